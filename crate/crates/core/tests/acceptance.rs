//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p massey-core --test acceptance -- --nocapture` to see
//! the report.

use std::time::{Duration, Instant};

use massey_core::cohom::{Cochain1, Cohomology};
use massey_core::fixtures::{by_name, small_library, LARGE_LIBRARY};
use massey_core::formation::{
    check_axioms, main_pipeline, pipeline_input, AxiomOptions, Formation, FormationSpec, PipelineOptions,
};
use massey_core::groups::Character;
use massey_core::massey::{
    defining_reps3, lift_to_full, massey_set3, restriction_split_check, superdiagonal_cups_vanish, BarRep,
    MasseyOptions,
};
use massey_core::modring::Modulus;
use massey_core::sweep::{prop32_sweep, sweep_group, summarize, SweepOptions, SweepSummary};
use massey_core::unitri::{cocycle_identity_check, schreier_iso_check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const MODULI: [u64; 3] = [2, 3, 4];
/// Criterion 10: seconds allowed for one product at |G| = 64, m = 4.
const PERF_LIMIT: Duration = Duration::from_secs(10);

type Verdict = Result<String, String>;

fn fixture(name: &str) -> FormationSpec {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn modulus(m: u64) -> Modulus {
    Modulus::new(m).unwrap()
}

fn cocycle_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total = 0;
    for (n, m) in [(2, 2), (2, 3), (3, 2)] {
        let r = cocycle_identity_check(n, modulus(m), usize::MAX, 0, &mut rng);
        if !r.exhaustive || r.violations > 0 {
            return Err(format!("Ū_{n}(Z/{m}): {} violations, exhaustive={}", r.violations, r.exhaustive));
        }
        total += r.triples_checked;
    }
    for (n, m) in [(3, 4), (4, 2), (2, 8)] {
        let r = cocycle_identity_check(n, modulus(m), 0, 100_000, &mut rng);
        if r.violations > 0 || r.triples_checked < 100_000 {
            return Err(format!("Ū_{n}(Z/{m}): {} violations in {} samples", r.violations, r.triples_checked));
        }
        total += r.triples_checked;
    }
    Ok(format!("{total} triples, 0 violations"))
}

fn schreier() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut total = 0;
    for (n, m) in [(2, 2), (2, 3), (3, 2)] {
        let r = schreier_iso_check(n, modulus(m), usize::MAX, 0, &mut rng);
        if !r.exhaustive || !r.passed() {
            return Err(format!("U_{n}(Z/{m}): {} violations, bijective={}", r.violations, r.bijective));
        }
        total += r.pairs_checked;
    }
    let r = schreier_iso_check(3, modulus(4), 0, 10_000, &mut rng);
    if !r.passed() || r.pairs_checked < 10_000 {
        return Err(format!("U_3(Z/4): {} violations in {} pairs", r.violations, r.pairs_checked));
    }
    total += r.pairs_checked;
    Ok(format!("{total} pairs, 0 violations"))
}

fn library_sweep() -> (SweepSummary, Vec<String>, Duration) {
    let t = Instant::now();
    let opts = SweepOptions::default();
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    for g in small_library() {
        for m in MODULI {
            match sweep_group(&g, modulus(m), &opts) {
                Ok(v) => instances.extend(v),
                Err(e) => errors.push(format!("{} m={m}: {e}", g.name())),
            }
        }
    }
    (summarize(&instances), errors, t.elapsed())
}

fn dwyer_oracle(s: &SweepSummary, errors: &[String], took: Duration) -> Verdict {
    if !errors.is_empty() {
        return Err(errors.join("; "));
    }
    if s.oracle_mismatches > 0 || s.errors > 0 || s.oracle_checked != s.instances {
        return Err(format!(
            "{} mismatches, {} errors, {} of {} checked",
            s.oracle_mismatches, s.errors, s.oracle_checked, s.instances
        ));
    }
    Ok(format!(
        "{} triples ({} defined, {} essential), 0 mismatches, {:.1}s",
        s.instances,
        s.defined,
        s.essential,
        took.as_secs_f64()
    ))
}

fn cups_and_modify(s: &SweepSummary) -> Verdict {
    if s.cup_failures > 0 || s.modify_failures > 0 || s.bar_reps == 0 {
        return Err(format!("{} block-witness failures, {} modify failures", s.cup_failures, s.modify_failures));
    }
    Ok(format!("{} BarReps, 0 violations", s.bar_reps))
}

/// Random n = 3 BarReps: a random defined triple, then a random shift of
/// ρ̄₁₃ and ρ̄₂₄ by characters.
fn restriction_to_v() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let names = ["Z2^2", "Z2^3", "Z3^2", "Z4xZ4", "D4", "Q8", "Z2xD4", "Heis3", "U3Z2"];
    let (mut checked, mut attempts) = (0, 0);
    while checked < 120 {
        attempts += 1;
        if attempts > 100_000 {
            return Err(format!("only {checked} BarReps sampled"));
        }
        let g = by_name(names[rng.random_range(0..names.len())]).unwrap();
        let m = modulus(MODULI[rng.random_range(0..MODULI.len())]);
        let cohom = Cohomology::new(&g, m);
        let gens = cohom.hom_generators();
        let pick = |rng: &mut ChaCha8Rng| {
            gens.iter()
                .fold(Character::zero(&g, m), |acc, h| acc.add(&h.scale(rng.random_range(0..m.get()) as i64)))
        };
        let chars = [pick(&mut rng), pick(&mut rng), pick(&mut rng)];
        let tri = [&chars[0], &chars[1], &chars[2]];
        let Some(sys) = defining_reps3(&cohom, tri).unwrap() else { continue };
        let (l, lp) = (pick(&mut rng), pick(&mut rng));
        let f13 = sys.f13.add(&Cochain1::from(&l));
        let f24 = sys.f24.add(&Cochain1::from(&lp));
        let rho = BarRep::from_entries3(&g, tri, &f13, &f24).unwrap();
        let r = restriction_split_check(&g, &rho).map_err(|e| format!("{}: {e}", g.name()))?;
        if !r.holds() {
            return Err(format!("{} m={} chars {:?}", g.name(), m.get(), chars.map(|c| c.generator_images(&g))));
        }
        checked += 1;
    }
    Ok(format!("{checked} random BarReps, 0 violations"))
}

fn rho_mu() -> Verdict {
    let t = Instant::now();
    let (mut instances, mut a_true) = (0, 0);
    for g in small_library() {
        for m in MODULI {
            let s = prop32_sweep(&g, modulus(m)).map_err(|e| format!("{} m={m}: {e}", g.name()))?;
            if s.violations > 0 {
                return Err(format!("{} violations, e.g. {}", s.violations, s.examples.join("; ")));
            }
            instances += s.instances;
            a_true += s.a_true;
        }
    }
    Ok(format!(
        "{instances} (G, χ₁, χ₂, σ₁, ω) instances ({a_true} with (a) true), 0 violations, {:.1}s",
        t.elapsed().as_secs_f64()
    ))
}

fn lift_presence(s: &SweepSummary) -> Verdict {
    if s.lift_failures > 0 || s.dwyer_failures > 0 {
        return Err(format!("{} lift disagreements, {} pullbacks outside the set", s.lift_failures, s.dwyer_failures));
    }
    Ok(format!("{} BarReps, lift ⇔ zero class on all", s.bar_reps))
}

fn falsification() -> Verdict {
    let opts = AxiomOptions::default();
    let empty = Formation::from_spec(&fixture("empty")).unwrap();
    if !check_axioms(&empty, &opts).unwrap().all_hold() {
        return Err("empty formation fails an axiom".into());
    }
    let expected = [
        ("kf1_only", "KF1", "ψ∪χ = 0 but ψ is not a corestriction"),
        ("kf2_only", "KF2", "Ker κ_M outside mA^M"),
        ("kf3_only", "KF3", "Res_M κ_M′"),
        ("kf4_only", "KF4", "Ĥ⁻¹(M′/M, A^M) has order 2"),
    ];
    for (file, axiom, detail) in expected {
        let f = Formation::from_spec(&fixture(file)).unwrap();
        let rep = check_axioms(&f, &opts).unwrap();
        if rep.failing() != [axiom] {
            return Err(format!("{file}: failing {:?}, expected only {axiom}", rep.failing()));
        }
        let v = match axiom {
            "KF1" => &rep.kf1,
            "KF2" => &rep.kf2,
            "KF3" => &rep.kf3,
            _ => &rep.kf4,
        };
        let w = v.witness.as_ref().ok_or(format!("{file}: no witness"))?;
        if !w.detail.contains(detail) {
            return Err(format!("{file}: witness {:?}", w.detail));
        }
    }
    let neg = Formation::from_spec(&fixture("negation")).unwrap();
    let g = neg.group();
    let h = neg.module().h_hat_minus1(&g.trivial_subgroup(), &g.whole()).unwrap();
    let rep = check_axioms(&neg, &opts).unwrap();
    let w = rep.kf4.witness.clone().unwrap_or_default();
    if h.order != 2 || rep.kf4.holds || w.subgroup != [0] || w.supergroup.as_deref() != Some(&[0, 1][..]) {
        return Err(format!("negation: Ĥ⁻¹ of order {}, KF4 witness {w:?}", h.order));
    }
    Ok("4 single-axiom fixtures fail only their axiom; empty passes; negation Ĥ⁻¹ ≅ Z/2".into())
}

fn pipelines() -> Verdict {
    let mut done = Vec::new();
    for name in ["planted_u3z2", "planted_z2xz2", "planted_z3xz3", "planted_z4xz4"] {
        let spec = fixture(name);
        let f = Formation::from_spec(&spec).unwrap();
        let rho = pipeline_input(&f, spec.pipeline.as_ref().unwrap()).unwrap();
        let out = main_pipeline(&f, &rho, PipelineOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let g = f.group();
        let cohom = Cohomology::new(g, f.modulus());
        let chars = rho.superdiagonals();
        if out.rho.bar_project() != out.rho_bar_final || out.rho_bar_final.superdiagonals() != chars {
            return Err(format!("{name}: lift does not project to ρ̄_final with the same superdiagonal"));
        }
        superdiagonal_cups_vanish(g, &out.rho_bar_final).map_err(|e| format!("{name}: {e}"))?;
        if lift_to_full(&cohom, &out.rho_bar_final).unwrap().is_none() {
            return Err(format!("{name}: ρ̄_final does not lift"));
        }
        let rep = massey_set3(&cohom, [&chars[0], &chars[1], &chars[2]], MasseyOptions::default()).unwrap();
        if !rep.contains_zero {
            return Err(format!("{name}: Massey product does not contain 0"));
        }
        done.push(format!("{name} (χ₂ {}, {})", if chars[1].is_zero() { "= 0" } else { "≠ 0" }, out.report.route));
    }
    Ok(done.join(", "))
}

fn performance() -> Verdict {
    let m = modulus(4);
    let mut worst = (Duration::ZERO, String::new());
    let mut count = 0;
    for name in LARGE_LIBRARY {
        let g = by_name(name).unwrap();
        if g.order() != 64 {
            continue;
        }
        let cohom = Cohomology::new(&g, m);
        let chars = cohom.h1_enumerate(1 << 12).unwrap();
        let mut per_group = 0;
        'search: for a in chars.iter().filter(|c| !c.is_zero()) {
            for b in chars.iter().filter(|c| !c.is_zero()) {
                for c in chars.iter().filter(|c| !c.is_zero()) {
                    if defining_reps3(&cohom, [a, b, c]).unwrap().is_none() {
                        continue;
                    }
                    let t = Instant::now();
                    massey_set3(&cohom, [a, b, c], MasseyOptions::default()).unwrap();
                    let took = t.elapsed();
                    if took > worst.0 {
                        worst = (took, name.to_string());
                    }
                    per_group += 1;
                    if per_group == 10 {
                        break 'search;
                    }
                }
            }
        }
        count += per_group;
    }
    if count == 0 {
        return Err("no defined triple at |G| = 64".into());
    }
    if worst.0 >= PERF_LIMIT {
        return Err(format!("{} took {:.2}s", worst.1, worst.0.as_secs_f64()));
    }
    Ok(format!("{count} products at |G| = 64, m = 4; slowest {:.3}s ({})", worst.0.as_secs_f64(), worst.1))
}

#[test]
fn acceptance() {
    let (summary, errors, took) = library_sweep();
    let results: Vec<(&str, Verdict)> = vec![
        ("1 cocycle identity for c", cocycle_identity()),
        ("2 decomposition of α (Schreier)", schreier()),
        ("3 Dwyer set equals defining-system oracle", dwyer_oracle(&summary, &errors, took)),
        ("4 vanishing cups and modified homomorphism", cups_and_modify(&summary)),
        ("5 restriction to V", restriction_to_v()),
        ("6 ρ_μ a homomorphism: verdicts agree", rho_mu()),
        ("7 lift_to_full ⇔ zero pullback class", lift_presence(&summary)),
        ("8 formation falsification", falsification()),
        ("9 pipeline end-to-end", pipelines()),
        ("10 performance", performance()),
    ];
    let mut failed = 0;
    for (name, v) in &results {
        match v {
            Ok(d) => println!("PASS  {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL  {name}: {d}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
