//! The lifting argument run step by step on a finite formation: the key
//! step producing `t`, the character `ω`, the corrected `ρ̄′₁₃`, `λ₂₄`, and
//! the final representation with vanishing pullback.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::axioms::kf1_instance;
use super::gmodule::combination;
use super::{cor_local, res_local, Formation, PipelineSpec};
use crate::cohom::{cup_chars, sigma_minus_one, Cochain1, Cohomology};
use crate::error::{Error, Result};
use crate::groups::{check_sigma_generates, is_m_independent, kernel_of, Character, FiniteGroup, Subgroup};
use crate::massey::{
    defining_reps3, lift_to_full, massey_set3, modify_rep, psi_z, superdiagonal_cups_vanish, BarRep, MasseyOptions, Rep,
};
use crate::modring::{Modulus, RowSpan};
use crate::unitri::BarUniTri;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    pub step: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyStep {
    pub sigma3: u32,
    /// `σ = σ₁σ₃`.
    pub sigma: u32,
    /// Members of `M′ = ⟨M, σ⟩`.
    pub m_prime: Vec<u32>,
    /// `N_{M′/M}(y₃ − y₁)`.
    pub norm: Vec<u32>,
    pub t: Vec<u32>,
    pub b: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaStep {
    pub y1: Vec<u32>,
    pub y3: Vec<u32>,
    pub key: KeyStep,
    /// `ω` on `M₁`, in local ids of `M₁`.
    pub omega: Character,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda24 {
    /// `Res_{M₁}(ρ̄*α) = 0`.
    pub a: bool,
    /// Some `λ` with `(ρ̄(I − λE₂₄))*α = 0`.
    pub b: bool,
    /// `ω ∈ Cor_{M₁} H¹(M)`.
    pub c: bool,
    pub lambda: Option<Character>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub formation: String,
    /// `χ1, χ2, χ3` on the group generators.
    pub chars: [Vec<u32>; 3],
    pub sigma1: u32,
    /// `psi` when `ρ̄′₁₃` comes from `ψ₀`, `direct` when it is solved for.
    pub route: String,
    pub omega_step: OmegaStep,
    pub lambda13: Vec<u32>,
    pub verdicts: Lambda24,
    pub lambda24: Vec<u32>,
    /// `ρ̄_final` on the group generators, keyed by entry (`"13"` etc).
    pub rho_bar_final: Vec<BTreeMap<String, u32>>,
    pub rho: Vec<BTreeMap<String, u32>>,
    pub contains_zero: bool,
    pub steps: Vec<StepLog>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub report: PipelineReport,
    pub rho_bar_final: BarRep,
    pub rho: Rep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOptions {
    pub sigma1: Option<u32>,
    /// Largest `|G|` for which the `H²` half of a KF1 diagnosis runs.
    pub h2_max_order: Option<usize>,
}

fn fixed_by(g: &FiniteGroup, f: &Formation, s: &Subgroup, a: &[u32], what: &str) -> Result<()> {
    if s.members().iter().any(|&x| f.module().act(x, a) != a) {
        return Err(Error::invalid(format!("{what} is not fixed by its subgroup (in {})", g.name())));
    }
    Ok(())
}

/// `t ∈ A^M` with `(σ₁ − 1)N_{M₁/M}t ≡ N_{G/M₁}y₁ (mod mA^{M₁})`, following the proof.
pub fn key_step_t(f: &Formation, m1: &Subgroup, m3: &Subgroup, sigma1: u32, y1: &[u32], y3: &[u32]) -> Result<KeyStep> {
    const STEP: &str = "key step";
    let g = f.group();
    let a = f.module();
    let m = f.modulus();
    if !is_m_independent(g, m1, m3, m)? {
        return Err(Error::invalid("M₁, M₃ are not m-independent"));
    }
    if !m3.contains(sigma1) {
        return Err(Error::invalid("σ₁ is not in M₃"));
    }
    check_sigma_generates(g, m1, sigma1, m)?;
    fixed_by(g, f, m1, y1, "y₁")?;
    fixed_by(g, f, m3, y3, "y₃")?;
    let whole = g.whole();
    let ig = f.index_or_step(&whole, STEP, "G")?;
    let n1 = a.norm(m1, &whole, y1)?;
    let n3 = a.norm(m3, &whole, y3)?;
    if f.kappa(ig, &n1) != f.kappa(ig, &n3) {
        return Err(Error::invalid("κ_G(N_{G/M₁} y₁) ≠ κ_G(N_{G/M₃} y₃)"));
    }
    let sigma3 = m1
        .members()
        .iter()
        .copied()
        .find(|&x| check_sigma_generates(g, m3, x, m).is_ok())
        .ok_or_else(|| Error::inconsistency("no σ₃ ∈ M₁ generating G/M₃"))?;
    let mm = m1.intersect(g, m3);
    let sigma = g.mul(sigma1, sigma3);
    let mp = mm.generated_with(g, sigma);
    if mp.order() != mm.order() * m.get() as usize {
        return Err(Error::inconsistency("(M′ : M) ≠ m"));
    }
    let x = a.sub(y3, y1);
    let nx = a.norm(&mm, &mp, &x)?;
    let ag = a.fixed_submodule(&whole);
    if nx != a.sub(&n3, &n1) || !a.contains(&ag, &nx) {
        return Err(Error::inconsistency("N_{M′/M}(y₃ − y₁) ≠ N_{G/M₃}y₃ − N_{G/M₁}y₁"));
    }
    let mag = a.multiple(&ag, m.get() as i64);
    if !a.contains(&mag, &nx) {
        return Err(Error::step(
            STEP,
            format!("KF2 instance fails at G: N_{{M′/M}}(y₃ − y₁) = {nx:?} lies in Ker κ_G but not in mA^G"),
        ));
    }
    let Some((t, b)) = a.hilbert90_solve(&mm, sigma, &x)? else {
        let h = a.h_hat_minus1(&mm, &mp)?;
        if h.is_trivial() {
            return Err(Error::inconsistency("no Hilbert 90 solution although Ĥ⁻¹(M′/M, A^M) = 0"));
        }
        return Err(Error::step(
            STEP,
            format!(
                "KF4 instance fails for (M, M′) with M′ = {:?}: Ĥ⁻¹(M′/M, A^M) has order {}",
                mp.members(),
                h.order
            ),
        ));
    };
    let lhs = a.sigma_minus_one(sigma1, &a.norm(&mm, m1, &t)?);
    let diff = a.sub(&lhs, &a.norm(m1, &whole, y1)?);
    if !a.contains(&a.multiple(&a.fixed_submodule(m1), m.get() as i64), &diff) {
        return Err(Error::inconsistency(
            "(σ₁ − 1)N_{M₁/M}t ≢ N_{G/M₁}y₁ mod mA^{M₁} after the key step",
        ));
    }
    Ok(KeyStep {
        sigma3,
        sigma,
        m_prime: mp.members().to_vec(),
        norm: nx,
        t,
        b,
    })
}

fn preimage(f: &Formation, idx: usize, sub: &Subgroup, target: &Character) -> Result<Option<Vec<u32>>> {
    let g = f.group();
    let whole = g.whole();
    f.kappa_preimage(idx, target, |c| cor_local(g, sub, &whole, c).expect("subgroup of G"))
}

/// `ω = Cor_{M₁}κ_M(t)` with `(σ₁ − 1)ω = Res_{M₁}ρ̄₂₃`.
pub fn find_omega(f: &Formation, rho: &BarRep, sigma1: u32) -> Result<OmegaStep> {
    const STEP: &str = "ω step";
    let g = f.group();
    let a = f.module();
    if rho.n() != 3 || rho.modulus() != f.modulus() {
        return Err(Error::invalid("ρ̄ must be a Ū₃(Z/m) representation with the formation's m"));
    }
    let [chi1, chi2, chi3]: [Character; 3] = rho.superdiagonals().try_into().expect("n = 3");
    superdiagonal_cups_vanish(g, rho)?;
    let whole = g.whole();
    let m1 = kernel_of(g, &chi1);
    let m3 = kernel_of(g, &chi3);
    let mm = m1.intersect(g, &m3);
    let ig = f.index_or_step(&whole, STEP, "G")?;
    let i1 = f.index_or_step(&m1, STEP, "M₁")?;
    let i3 = f.index_or_step(&m3, STEP, "M₃")?;
    let im = f.index_or_step(&mm, STEP, "M = M₁∩M₃")?;
    let mut ys = Vec::with_capacity(2);
    for (name, idx, sub) in [("M₁", i1, &m1), ("M₃", i3, &m3)] {
        let y = preimage(f, idx, sub, &chi2)?.ok_or_else(|| {
            Error::step(
                STEP,
                format!("KF1 surjectivity instance fails for ({name}, ρ̄₂₃): no y ∈ A^{name} with Cor_G κ_{name}(y) = ρ̄₂₃"),
            )
        })?;
        if f.kappa(ig, &a.norm(sub, &whole, &y)?) != chi2 {
            return Err(Error::step(
                STEP,
                format!("KF3 instance fails for ({name}, G): κ_G(N y) ≠ Cor_G κ_{name}(y)"),
            ));
        }
        ys.push(y);
    }
    let (y1, y3) = (ys[0].clone(), ys[1].clone());
    let key = key_step_t(f, &m1, &m3, sigma1, &y1, &y3)?;
    let omega = cor_local(g, &mm, &m1, &f.kappa(im, &key.t))?;
    let target = chi2.restrict(&m1);
    if sigma_minus_one(g, &m1, sigma1, &omega)? != target {
        let nt = a.norm(&mm, &m1, &key.t)?;
        let detail = if f.kappa(i1, &nt) != omega {
            "KF3 instance fails for (M, M₁): κ_{M₁}(N t) ≠ Cor_{M₁} κ_M(t)"
        } else if f.kappa(i1, &a.sigma_minus_one(sigma1, &nt)) != sigma_minus_one(g, &m1, sigma1, &omega)? {
            "κ_{M₁} is not equivariant for σ₁"
        } else if f.kappa(i1, &a.norm(&m1, &whole, &y1)?) != target {
            "KF3 instance fails for (M₁, G): κ_{M₁}(a) ≠ Res κ_G(a)"
        } else {
            "KF2 instance fails at M₁: κ_{M₁} does not vanish on mA^{M₁}"
        };
        return Err(Error::step(STEP, detail));
    }
    Ok(OmegaStep { y1, y3, key, omega })
}

/// Verdicts (a), (b), (c) for `ρ̄′` and `ω = Res_{M₁}ρ̄′₁₃`, and `λ` under (b).
pub fn find_lambda24(f: &Formation, rho: &BarRep, omega: &Character) -> Result<Lambda24> {
    find_lambda24_with(f, rho, omega, None)
}

fn find_lambda24_with(f: &Formation, rho: &BarRep, omega: &Character, h2_max: Option<usize>) -> Result<Lambda24> {
    const STEP: &str = "λ₂₄ step";
    let g = f.group();
    let m = f.modulus();
    let cohom = Cohomology::new(g, m);
    let chi1 = rho.superdiagonal(1)?;
    let chi3 = rho.superdiagonal(3)?;
    let m1 = kernel_of(g, &chi1);
    let mm = m1.intersect(g, &kernel_of(g, &chi3));
    if rho.entry(1, 3)?.restrict(&m1).values != omega.values {
        return Err(Error::invalid("ω ≠ Res_{M₁} ρ̄₁₃"));
    }
    let z = rho.pullback_cocycle();
    let mg1 = m1.as_group(g);
    let c1 = Cohomology::new(&mg1, m);
    let a = c1.coboundary_witness(&z.restrict(&m1))?.is_some();

    let homs = cohom.hom_generators();
    let mut images: Vec<Vec<u32>> = cohom.boundaries().rows().map(|r| r.to_vec()).collect();
    let nb = images.len();
    images.extend(homs.iter().map(|h| cup_chars(&chi1, h).values));
    let lambda = combination(m, g.order() * g.order(), &images, &z.values)?.map(|c| {
        homs.iter()
            .zip(&c[nb..])
            .fold(Character::zero(g, m), |acc, (h, &k)| acc.add(&h.scale(k as i64)))
    });
    let b = lambda.is_some();

    let mgm = mm.as_group(g);
    let cor_image = RowSpan::from_rows(
        m,
        m1.order(),
        Cohomology::new(&mgm, m)
            .hom_generators()
            .iter()
            .map(|h| cor_local(g, &mm, &m1, h).map(|c| c.values))
            .collect::<Result<_>>()?,
    );
    let c = cor_image.contains(&omega.values);

    if a != b || a != c {
        if a != b {
            let n = g.order();
            let limit = h2_max.unwrap_or(16);
            if n > limit {
                return Err(Error::guard("KF1 diagnosis at H²(G)", limit, n));
            }
            let inst = kf1_instance(&cohom, &chi1, Some(&cohom.cocycle_generators()))?;
            if !inst.holds() {
                return Err(Error::step(STEP, "KF1 instance fails for (G, ρ̄₁₂)"));
            }
        }
        if a != c {
            let inst = kf1_instance(&c1, &res_local(&m1, &g.whole(), &chi3), None)?;
            if !inst.holds() {
                return Err(Error::step(STEP, "KF1 instance fails for (M₁, Res ρ̄₃₄) at H¹"));
            }
        }
        return Err(Error::inconsistency(format!(
            "verdicts disagree although the KF1 instances hold: (a)={a} (b)={b} (c)={c}"
        )));
    }
    Ok(Lambda24 { a, b, c, lambda })
}

fn entries(u: &BarUniTri) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for (i, row) in u.to_rows().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if j > i {
                if let Some(v) = v {
                    out.insert(format!("{}{}", i + 1, j + 1), *v);
                }
            }
        }
    }
    out
}

fn generator_entries(g: &FiniteGroup, rho: &BarRep) -> Vec<BTreeMap<String, u32>> {
    g.generators().iter().map(|&s| entries(rho.image(s))).collect()
}

fn sigma1_candidates(chi1: &Character, chi2: &Character, m3: &Subgroup) -> Vec<u32> {
    let one = 1 % chi1.modulus.get();
    let mut c: Vec<u32> = m3.members().iter().copied().filter(|&x| chi1.at(x) == one).collect();
    c.sort_by_key(|&x| (chi2.at(x) != 0, x));
    c
}

/// Runs the whole argument on `ρ̄`, checking every intermediate claim.
pub fn main_pipeline(f: &Formation, rho: &BarRep, opts: PipelineOptions) -> Result<PipelineOutcome> {
    let g = f.group();
    let m = f.modulus();
    if rho.n() != 3 || rho.modulus() != m {
        return Err(Error::invalid("ρ̄ must be a Ū₃(Z/m) representation with the formation's m"));
    }
    let cohom = Cohomology::new(g, m);
    let [chi1, chi2, chi3]: [Character; 3] = rho.superdiagonals().try_into().expect("n = 3");
    let m1 = kernel_of(g, &chi1);
    let m3 = kernel_of(g, &chi3);
    if !is_m_independent(g, &m1, &m3, m)? {
        return Err(Error::invalid("χ₁, χ₃ are not Z/m-linearly independent"));
    }
    let mut steps = Vec::new();
    let mut log = |step: &str, detail: String| {
        steps.push(StepLog {
            step: step.to_string(),
            detail,
        })
    };

    let candidates = match opts.sigma1 {
        Some(s) => {
            if s as usize >= g.order() || !m3.contains(s) || chi1.at(s) != 1 % m.get() {
                return Err(Error::invalid("σ₁ must lie in M₃ with χ₁(σ₁) = 1"));
            }
            vec![s]
        }
        None => sigma1_candidates(&chi1, &chi2, &m3),
    };
    let mut chosen: Option<(u32, OmegaStep, bool)> = None;
    for &s in &candidates {
        let om = find_omega(f, rho, s)?;
        let sm = g.pow(s, m.get() as u64);
        let psi_ok = chi2.at(s) == 0 && om.omega.at(m1.local(sm).expect("σ₁^m ∈ M₁")) == 0;
        let better = chosen.as_ref().is_none_or(|(_, _, p)| !p && psi_ok);
        if better {
            chosen = Some((s, om, psi_ok));
        }
        if psi_ok {
            break;
        }
    }
    let (sigma1, omega_step, psi_ok) = chosen.ok_or_else(|| Error::inconsistency("no σ₁ ∈ M₃ with χ₁(σ₁) = 1"))?;
    let omega = omega_step.omega.clone();
    log(
        "ω step",
        format!(
            "σ₁ = {}, σ₃ = {}, t = {:?}, b = {:?}; ω ∈ Cor_{{M₁}}H¹(M) and (σ₁ − 1)ω = Res_{{M₁}} χ₂ verified",
            g.label(sigma1),
            g.label(omega_step.key.sigma3),
            omega_step.key.t,
            omega_step.key.b
        ),
    );

    // ρ̄′₁₃ with d1 ρ̄′₁₃ = χ₁∪χ₂ and Res_{M₁} ρ̄′₁₃ = ω.
    let rho13 = rho.entry(1, 3)?;
    let (route, new13) = if psi_ok {
        let imgs = psi_z(g, &chi1, &chi2, sigma1, &omega, 0)?;
        let psi = Rep::new(g, imgs).map_err(|e| Error::step("lift of ρ̄₁₃", format!("ψ₀ is not a homomorphism: {e}")))?;
        ("psi", psi.entry(1, 3)?)
    } else {
        let homs = cohom.hom_generators();
        let images: Vec<Vec<u32>> = homs.iter().map(|h| h.restrict(&m1).values).collect();
        let target = omega.add(&Character {
            modulus: m,
            values: rho13.restrict(&m1).values,
        }
        .neg());
        let c = combination(m, m1.order(), &images, &target.values)?
            .ok_or_else(|| Error::step("lift of ρ̄₁₃", "no ρ̄′₁₃ with d1 ρ̄′₁₃ = χ₁∪χ₂ restricting to ω on M₁"))?;
        let shift = homs
            .iter()
            .zip(&c)
            .fold(Character::zero(g, m), |acc, (h, &k)| acc.add(&h.scale(k as i64)));
        ("direct", rho13.add(&Cochain1::from(&shift)))
    };
    if new13.restrict(&m1).values != omega.values {
        return Err(Error::inconsistency("Res_{M₁} ρ̄′₁₃ ≠ ω"));
    }
    let lam13 = rho13
        .sub(&new13)
        .to_character(g)
        .map_err(|_| Error::inconsistency("λ₁₃ = ρ̄₁₃ − ρ̄′₁₃ is not a homomorphism"))?;
    log(
        "lift of ρ̄₁₃",
        format!("route {route}; λ₁₃ = {:?} is a homomorphism", lam13.generator_images(g)),
    );
    let rho_p = modify_rep(&cohom, rho, &Cochain1::from(&lam13.neg()), &Cochain1::zero(g.order(), m))?;
    if rho_p.entry(1, 3)? != new13 {
        return Err(Error::inconsistency("ρ̄(I − λ₁₃E₁₃) has the wrong (1,3) entry"));
    }

    let verdicts = find_lambda24_with(f, &rho_p, &omega, opts.h2_max_order)?;
    let lam24 = match (&verdicts.lambda, verdicts.c) {
        (Some(l), true) => l.clone(),
        _ => return Err(Error::inconsistency("ω is a corestriction but (c) is false")),
    };
    log(
        "λ₂₄ step",
        format!("(a), (b), (c) all hold; λ₂₄ = {:?}", lam24.generator_images(g)),
    );
    let rho_final = modify_rep(&cohom, &rho_p, &Cochain1::zero(g.order(), m), &Cochain1::from(&lam24.neg()))?;
    if rho_final.superdiagonals() != rho.superdiagonals() {
        return Err(Error::inconsistency("superdiagonal changed"));
    }
    let expect13 = rho13.sub(&Cochain1::from(&lam13));
    let expect24 = rho.entry(2, 4)?.sub(&Cochain1::from(&lam24));
    if rho_final.entry(1, 3)? != expect13 || rho_final.entry(2, 4)? != expect24 {
        return Err(Error::inconsistency("ρ̄_final ≠ ρ̄(I − λ₁₃E₁₃)(I − λ₂₄E₂₄)"));
    }
    let rep = lift_to_full(&cohom, &rho_final)?
        .ok_or_else(|| Error::inconsistency("ρ̄_final*α ≠ 0"))?;
    log("final lift", "ρ̄_final lifts to U₄(Z/m)".to_string());
    let massey = massey_set3(&cohom, [&chi1, &chi2, &chi3], MasseyOptions::default())?;
    if !massey.contains_zero {
        return Err(Error::inconsistency("the Massey product does not contain 0"));
    }
    log("massey check", "0 ∈ ⟨χ₁, χ₂, χ₃⟩ confirmed independently".to_string());

    let report = PipelineReport {
        formation: f.name().to_string(),
        chars: [&chi1, &chi2, &chi3].map(|c| c.generator_images(g)),
        sigma1,
        route: route.to_string(),
        omega_step,
        lambda13: lam13.generator_images(g),
        verdicts,
        lambda24: lam24.generator_images(g),
        rho_bar_final: generator_entries(g, &rho_final),
        rho: g.generators().iter().map(|&s| entries(&rep.images()[s as usize].bar_project()))
            .zip(g.generators().iter().map(|&s| rep.images()[s as usize].corner()))
            .map(|(mut e, c)| {
                e.insert("14".to_string(), c);
                e
            })
            .collect(),
        contains_zero: true,
        steps,
    };
    Ok(PipelineOutcome {
        report,
        rho_bar_final: rho_final,
        rho: rep,
    })
}

/// The `ρ̄` described by a pipeline spec.
pub fn pipeline_input(f: &Formation, spec: &PipelineSpec) -> Result<BarRep> {
    let g = f.group();
    let m = f.modulus();
    let chars = spec
        .chars
        .iter()
        .map(|v| Character::from_generator_images(g, m, v))
        .collect::<Result<Vec<_>>>()?;
    match &spec.rho_bar {
        Some(gens) => {
            if gens.len() != g.generators().len() {
                return Err(Error::invalid("ρ̄ needs one image per group generator"));
            }
            let mut imgs = Vec::with_capacity(gens.len());
            for map in gens {
                let mut es = Vec::new();
                for (k, &v) in map {
                    let b = k.as_bytes();
                    if b.len() != 2 || !b[0].is_ascii_digit() || !b[1].is_ascii_digit() {
                        return Err(Error::invalid(format!("bad entry key {k:?}")));
                    }
                    es.push((((b[0] - b'0') as usize, (b[1] - b'0') as usize), v));
                }
                imgs.push(BarUniTri::from_entries(3, m, es)?);
            }
            let rho = BarRep::from_generator_images(g, 3, m, &imgs)?;
            if rho.superdiagonals() != chars {
                return Err(Error::invalid("ρ̄ does not have the stated superdiagonal"));
            }
            Ok(rho)
        }
        None => {
            let cohom = Cohomology::new(g, m);
            let refs = [&chars[0], &chars[1], &chars[2]];
            let sys = defining_reps3(&cohom, refs)?
                .ok_or_else(|| Error::invalid("no ρ̄ with this superdiagonal: χ₁∪χ₂ or χ₂∪χ₃ is nonzero"))?;
            BarRep::from_entries3(g, refs, &sys.f13, &sys.f24)
        }
    }
}

/// `A = ⊕_j Z/m[G/B]` with `κ_B(e_{xB}) = x·φ_j` and, on larger members
/// `M′`, `κ_{M′}(e_{xB}) = x·Cor_{M′}φ_j` on one coset per `M′`-orbit and 0
/// elsewhere. `B` is the smallest lattice member and `G/B` must be abelian.
pub fn planted_formation(
    name: &str,
    g: &FiniteGroup,
    m: Modulus,
    lattice: &[Subgroup],
    phis: &[Character],
) -> Result<Formation> {
    let bottom = lattice
        .iter()
        .min_by_key(|s| s.order())
        .ok_or_else(|| Error::invalid("empty lattice"))?;
    if lattice.iter().any(|s| !bottom.is_subgroup_of(s)) {
        return Err(Error::invalid("lattice has no smallest member"));
    }
    for x in g.generators() {
        for y in g.generators() {
            let c = g.mul(g.mul(*x, *y), g.inv(g.mul(*y, *x)));
            if !bottom.contains(c) {
                return Err(Error::invalid("G/B is not abelian"));
            }
        }
    }
    let reps = bottom.left_transversal(g);
    let coset_of = |x: u32| {
        reps.iter()
            .position(|&r| bottom.contains(g.mul(g.inv(r), x)))
            .expect("transversal covers G")
    };
    let k = reps.len();
    let rank = k * phis.len();
    let gen_mats: Vec<Vec<Vec<i64>>> = g
        .generators()
        .iter()
        .map(|&s| {
            let mut mat = vec![vec![0i64; rank]; rank];
            for j in 0..phis.len() {
                for (c, &r) in reps.iter().enumerate() {
                    mat[j * k + coset_of(g.mul(s, r))][j * k + c] = 1;
                }
            }
            mat
        })
        .collect();
    let gmod = super::GModule::new(g, vec![m.get(); rank], &gen_mats)?;
    let mut entries = Vec::with_capacity(lattice.len());
    for s in lattice {
        let mut chosen = vec![false; k];
        let mut covered = vec![false; k];
        for c in 0..k {
            if covered[c] {
                continue;
            }
            chosen[c] = true;
            for &h in s.members() {
                covered[coset_of(g.mul(h, reps[c]))] = true;
            }
        }
        let mut kappa = Vec::with_capacity(rank);
        for phi in phis {
            let cor = cor_local(g, bottom, s, phi)?;
            for (c, &r) in reps.iter().enumerate() {
                kappa.push(if chosen[c] {
                    crate::cohom::conj_act(g, s, r, &cor)?
                } else {
                    Character {
                        modulus: m,
                        values: vec![0; s.order()],
                    }
                });
            }
        }
        entries.push(super::Member::on_basis(s.clone(), kappa));
    }
    Formation::new(name, gmod, m, entries)
}
