//! Exhaustive sweeps over character triples, cross-checking the solver-based
//! Massey product against the brute-force oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohom::{Cochain1, Cohomology};
use crate::error::{Error, Result};
use crate::fixtures::by_name;
use crate::groups::{kernel_of, Character, FiniteGroup};
use crate::massey::{
    defining_reps3, lift_to_full, massey_oracle3, massey_set3, modify_rep, prop32_check, pullback_class,
    superdiagonal_cups_vanish, BarRep, MasseyOptions,
};
use crate::modring::Modulus;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOptions {
    pub oracle: bool,
    pub guard: usize,
    /// Shifts `(λ, λ′)` tried per defined triple, taken from Hom generators and 0.
    pub shifts_per_triple: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            oracle: true,
            guard: crate::massey::ORACLE_GUARD,
            shifts_per_triple: 4,
        }
    }
}

/// Per-triple verdicts; `None` where a check does not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleVerdict {
    pub group: String,
    pub modulus: u32,
    /// Values of `χ1, χ2, χ3` on the group generators.
    pub chars: [Vec<u32>; 3],
    pub defined: bool,
    pub contains_zero: bool,
    pub set_size: Option<usize>,
    pub oracle_equal: Option<bool>,
    pub oracle_zero_agrees: Option<bool>,
    pub bar_reps: usize,
    pub cups_vanish: bool,
    pub modify_identity: bool,
    pub lift_agrees: bool,
    pub pullback_in_set: bool,
    pub error: Option<String>,
}

impl TripleVerdict {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.oracle_equal != Some(false)
            && self.oracle_zero_agrees != Some(false)
            && self.cups_vanish
            && self.modify_identity
            && self.lift_agrees
            && self.pullback_in_set
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub defined: usize,
    pub essential: usize,
    pub oracle_checked: usize,
    pub oracle_mismatches: usize,
    pub bar_reps: usize,
    pub cup_failures: usize,
    pub modify_failures: usize,
    pub lift_failures: usize,
    pub dwyer_failures: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub groups: Vec<String>,
    pub moduli: Vec<u32>,
    pub summary: SweepSummary,
    pub instances: Vec<TripleVerdict>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.instances.iter().all(|v| v.passed())
    }
}

fn check_bar_rep(cohom: &Cohomology, rho: &BarRep, classes: Option<&std::collections::BTreeSet<Vec<u32>>>) -> Result<(bool, bool, bool)> {
    let g = cohom.group();
    let cups = superdiagonal_cups_vanish(g, rho).is_ok();
    let class = pullback_class(cohom, rho);
    let lift = lift_to_full(cohom, rho)?;
    let lift_ok = lift.is_some() == cohom.h2_is_zero(&class);
    let in_set = classes.is_none_or(|c| c.contains(&class.canonical));
    Ok((cups, lift_ok, in_set))
}

fn verdict(cohom: &Cohomology, chars: [&Character; 3], opts: &SweepOptions) -> Result<TripleVerdict> {
    let g = cohom.group();
    let m = cohom.modulus();
    let report = massey_set3(cohom, chars, MasseyOptions::default())?;
    let mut v = TripleVerdict {
        group: g.name().to_string(),
        modulus: m.get(),
        chars: chars.map(|c| c.generator_images(g)),
        defined: report.defined,
        contains_zero: report.contains_zero,
        set_size: report.classes.as_ref().map(|c| c.len()),
        oracle_equal: None,
        oracle_zero_agrees: None,
        bar_reps: 0,
        cups_vanish: true,
        modify_identity: true,
        lift_agrees: true,
        pullback_in_set: true,
        error: None,
    };
    if opts.oracle {
        let oracle = massey_oracle3(cohom, chars, opts.guard)?;
        let zero = vec![0u32; g.order() * g.order()];
        v.oracle_equal = Some(match (&oracle, &report.classes) {
            (None, Some(c)) => !report.defined && c.is_empty(),
            (Some(o), Some(c)) => report.defined && o == c,
            (_, None) => false,
        });
        v.oracle_zero_agrees = Some(oracle.as_ref().is_some_and(|o| o.contains(&zero)) == report.contains_zero);
    }
    let Some(sys) = defining_reps3(cohom, chars)? else {
        return Ok(v);
    };
    let rho = BarRep::from_entries3(g, chars, &sys.f13, &sys.f24)?;
    let classes = report.classes.as_ref();
    let mut shifts: Vec<Cochain1> = vec![Cochain1::zero(g.order(), m)];
    shifts.extend(cohom.hom_generators().iter().map(Cochain1::from));
    shifts.truncate(opts.shifts_per_triple.max(1));
    let (cups, lift, in_set) = check_bar_rep(cohom, &rho, classes)?;
    v.bar_reps = 1;
    v.cups_vanish &= cups;
    v.lift_agrees &= lift;
    v.pullback_in_set &= in_set;
    for lam in &shifts {
        for lp in &shifts {
            match modify_rep(cohom, &rho, lam, lp) {
                Ok(r2) => {
                    let (cups, lift, in_set) = check_bar_rep(cohom, &r2, classes)?;
                    v.bar_reps += 1;
                    v.cups_vanish &= cups;
                    v.lift_agrees &= lift;
                    v.pullback_in_set &= in_set;
                }
                Err(Error::Inconsistency(_)) => v.modify_identity = false,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(v)
}

/// All character triples of `g` with values in `Z/m`.
pub fn sweep_group(g: &FiniteGroup, m: Modulus, opts: &SweepOptions) -> Result<Vec<TripleVerdict>> {
    let cohom = Cohomology::new(g, m);
    let chars = cohom.h1_enumerate(opts.guard)?;
    let k = chars.len();
    let total = k.checked_pow(3).unwrap_or(usize::MAX);
    if total > opts.guard {
        return Err(Error::guard("character triples", opts.guard, total));
    }
    (0..total)
        .into_par_iter()
        .map(|t| {
            let tri = [&chars[t / (k * k)], &chars[(t / k) % k], &chars[t % k]];
            match verdict(&cohom, tri, opts) {
                Err(Error::Inconsistency(msg)) => Ok(TripleVerdict {
                    group: g.name().to_string(),
                    modulus: m.get(),
                    chars: tri.map(|c| c.generator_images(g)),
                    defined: false,
                    contains_zero: false,
                    set_size: None,
                    oracle_equal: None,
                    oracle_zero_agrees: None,
                    bar_reps: 0,
                    cups_vanish: true,
                    modify_identity: true,
                    lift_agrees: true,
                    pullback_in_set: true,
                    error: Some(msg),
                }),
                other => other,
            }
        })
        .collect()
}

pub fn summarize(instances: &[TripleVerdict]) -> SweepSummary {
    let mut s = SweepSummary::default();
    for v in instances {
        s.instances += 1;
        s.defined += v.defined as usize;
        s.essential += (v.defined && !v.contains_zero) as usize;
        s.oracle_checked += v.oracle_equal.is_some() as usize;
        s.oracle_mismatches += (v.oracle_equal == Some(false) || v.oracle_zero_agrees == Some(false)) as usize;
        s.bar_reps += v.bar_reps;
        s.cup_failures += !v.cups_vanish as usize;
        s.modify_failures += !v.modify_identity as usize;
        s.lift_failures += !v.lift_agrees as usize;
        s.dwyer_failures += !v.pullback_in_set as usize;
        s.errors += v.error.is_some() as usize;
    }
    s
}

pub fn sweep(groups: &[&str], moduli: &[u32], opts: &SweepOptions) -> Result<SweepReport> {
    let mut instances = Vec::new();
    for name in groups {
        let g = by_name(name)?;
        for &m in moduli {
            instances.extend(sweep_group(&g, Modulus::new(m as u64)?, opts)?);
        }
    }
    Ok(SweepReport {
        groups: groups.iter().map(|s| s.to_string()).collect(),
        moduli: moduli.to_vec(),
        summary: summarize(&instances),
        instances,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop32Summary {
    pub instances: usize,
    pub a_true: usize,
    pub violations: usize,
    pub examples: Vec<String>,
}

/// Every valid `(χ1, χ2, σ1, ω)` on `g`: `χ1(σ1) = 1`, `χ2(σ1) = 0`, `ω` a
/// character of `Ker χ1` vanishing on `σ1^m`.
pub fn prop32_sweep(g: &FiniteGroup, m: Modulus) -> Result<Prop32Summary> {
    let cohom = Cohomology::new(g, m);
    let chars = cohom.h1_enumerate(1 << 20)?;
    let one = 1 % m.get();
    let mut jobs = Vec::new();
    for (i, c1) in chars.iter().enumerate() {
        if !g.elements().any(|s| c1.at(s) == one) {
            continue;
        }
        let m1 = kernel_of(g, c1);
        let omegas = Cohomology::new(&m1.as_group(g), m).h1_enumerate(1 << 20)?;
        for sigma in g.elements().filter(|&s| c1.at(s) == one) {
            let sm = g.pow(sigma, m.get() as u64);
            for (j, c2) in chars.iter().enumerate() {
                if c2.at(sigma) != 0 {
                    continue;
                }
                for omega in omegas.iter().filter(|w| w.at(m1.local(sm).expect("in kernel")) == 0) {
                    jobs.push((i, j, sigma, omega.clone()));
                }
            }
        }
    }
    let results: Vec<(bool, bool, Option<String>)> = jobs
        .par_iter()
        .map(|(i, j, sigma, omega)| {
            let r = prop32_check(&cohom, &chars[*i], &chars[*j], *sigma, omega)?;
            let bad = (!r.consistent()).then(|| {
                format!(
                    "{} m={} χ1={:?} χ2={:?} σ1={} ω={:?}: a={} b={} c={} d={} lifts_are_psi={}",
                    g.name(),
                    m.get(),
                    chars[*i].generator_images(g),
                    chars[*j].generator_images(g),
                    g.label(*sigma),
                    omega.values,
                    r.a,
                    r.b,
                    r.c,
                    r.d,
                    r.lifts_are_psi
                )
            });
            Ok((r.a, bad.is_none(), bad))
        })
        .collect::<Result<_>>()?;
    let mut s = Prop32Summary::default();
    for (a, ok, ex) in results {
        s.instances += 1;
        s.a_true += a as usize;
        if !ok {
            s.violations += 1;
            if s.examples.len() < 5 {
                s.examples.extend(ex);
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        let r = sweep(&["Z4", "Z2^2", "D3"], &[2, 3], &SweepOptions::default()).unwrap();
        assert!(r.all_passed(), "{:?}", r.summary);
        assert!(r.summary.defined > 0);
        assert_eq!(r.summary.oracle_checked, r.summary.instances);
    }

    #[test]
    fn prop32_sweep_small() {
        let g = by_name("D4").unwrap();
        let s = prop32_sweep(&g, Modulus::new(2).unwrap()).unwrap();
        assert!(s.instances > 0);
        assert_eq!(s.violations, 0, "{:?}", s.examples);
    }
}
