//! Unitriangular representations, pullbacks of the extension class, triple
//! Massey products and the lifting problem.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cohom::{cup11, cup_chars, d1, Cochain1, Cochain2, Cohomology, H2Class};
use crate::error::{Error, Result};
use crate::groups::{kernel_of, sigma_decompose, Character, FiniteGroup, Subgroup};
use crate::modring::{LinearSystem, Modulus, ResidueVector};
use crate::unitri::{c_value, BarUniTri, UniTri};

/// Guard on the number of defining-system pairs the oracle enumerates.
pub const ORACLE_GUARD: usize = 1_000_000;

/// A homomorphism `ρ̄: G → Ū_n(Z/m)`, stored by its image of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarRep {
    n: usize,
    modulus: Modulus,
    images: Vec<BarUniTri>,
}

fn first_non_multiplicative<T, F>(g: &FiniteGroup, images: &[T], mul: F) -> Option<(u32, u32)>
where
    T: PartialEq,
    F: Fn(&T, &T) -> T,
{
    for a in g.elements() {
        for b in g.elements() {
            if images[g.mul(a, b) as usize] != mul(&images[a as usize], &images[b as usize]) {
                return Some((a, b));
            }
        }
    }
    None
}

fn extend_from_generators<T, F>(g: &FiniteGroup, identity: T, gen_images: &[T], mul: F) -> Result<Vec<T>>
where
    T: Clone,
    F: Fn(&T, &T) -> T,
{
    if gen_images.len() != g.generators().len() {
        return Err(Error::invalid(format!(
            "{} generator images for {} generators",
            gen_images.len(),
            g.generators().len()
        )));
    }
    let mut out: Vec<Option<T>> = vec![None; g.order()];
    out[g.identity() as usize] = Some(identity);
    let mut queue = vec![g.identity()];
    while let Some(x) = queue.pop() {
        for (&s, img) in g.generators().iter().zip(gen_images) {
            let y = g.mul(x, s) as usize;
            if out[y].is_none() {
                out[y] = Some(mul(out[x as usize].as_ref().expect("visited"), img));
                queue.push(y as u32);
            }
        }
    }
    Ok(out.into_iter().map(|x| x.expect("generators generate")).collect())
}

fn non_hom_error(g: &FiniteGroup, what: &str, (a, b): (u32, u32)) -> Error {
    Error::invalid(format!(
        "{what} is not a homomorphism: fails at ({}, {})",
        g.label(a),
        g.label(b)
    ))
}

impl BarRep {
    pub fn new(g: &FiniteGroup, images: Vec<BarUniTri>) -> Result<Self> {
        if images.len() != g.order() {
            return Err(Error::invalid("one image per group element required"));
        }
        let first = &images[0];
        let (n, modulus) = (first.n(), first.modulus());
        if images.iter().any(|u| u.n() != n || u.modulus() != modulus) {
            return Err(Error::invalid("images live in different groups"));
        }
        if let Some(p) = first_non_multiplicative(g, &images, |a, b| a.mul(b)) {
            return Err(non_hom_error(g, "ρ̄", p));
        }
        Ok(BarRep { n, modulus, images })
    }

    pub fn from_generator_images(g: &FiniteGroup, n: usize, modulus: Modulus, gens: &[BarUniTri]) -> Result<Self> {
        if gens.iter().any(|u| u.n() != n || u.modulus() != modulus) {
            return Err(Error::invalid("generator images live in different groups"));
        }
        let images = extend_from_generators(g, BarUniTri::identity(n, modulus), gens, |a, b| a.mul(b))?;
        Self::new(g, images)
    }

    /// The `n = 3` representation with the given entries; the entries must
    /// satisfy `d1 f13 = χ1∪χ2` and `d1 f24 = χ2∪χ3`.
    pub fn from_entries3(
        g: &FiniteGroup,
        chars: [&Character; 3],
        f13: &Cochain1,
        f24: &Cochain1,
    ) -> Result<Self> {
        let m = chars[0].modulus;
        let images = g
            .elements()
            .map(|x| {
                BarUniTri::from_entries(
                    3,
                    m,
                    [
                        ((1, 2), chars[0].at(x) as i64),
                        ((2, 3), chars[1].at(x) as i64),
                        ((3, 4), chars[2].at(x) as i64),
                        ((1, 3), f13.at(x) as i64),
                        ((2, 4), f24.at(x) as i64),
                    ],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, images)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn images(&self) -> &[BarUniTri] {
        &self.images
    }

    pub fn image(&self, g: u32) -> &BarUniTri {
        &self.images[g as usize]
    }

    /// `ρ̄_{ij}` as a cochain.
    pub fn entry(&self, i: usize, j: usize) -> Result<Cochain1> {
        let values = self.images.iter().map(|u| u.pr(i, j)).collect::<Result<Vec<_>>>()?;
        Ok(Cochain1 {
            modulus: self.modulus,
            values,
        })
    }

    /// `ρ̄_{i,i+1}` as a character.
    pub fn superdiagonal(&self, i: usize) -> Result<Character> {
        let e = self.entry(i, i + 1)?;
        Ok(Character {
            modulus: self.modulus,
            values: e.values,
        })
    }

    pub fn superdiagonals(&self) -> Vec<Character> {
        (1..=self.n).map(|i| self.superdiagonal(i).expect("index in range")).collect()
    }

    /// The 2-cocycle `(g, h) ↦ c(ρ̄(g), ρ̄(h))`.
    pub fn pullback_cocycle(&self) -> Cochain2 {
        let n = self.images.len();
        Cochain2::from_fn(n, self.modulus, |a, b| c_value(&self.images[a as usize], &self.images[b as usize]))
    }

    /// Replace entry `(i,j)` by `ρ̄_{ij} + shift`.
    fn shifted(&self, i: usize, j: usize, shift: &Cochain1) -> Result<Vec<BarUniTri>> {
        let m = self.modulus;
        self.images
            .iter()
            .enumerate()
            .map(|(x, u)| u.with_entry(i, j, m.add(u.pr(i, j)?, shift.at(x as u32))))
            .collect()
    }
}

/// A homomorphism `ρ: G → U_n(Z/m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep {
    n: usize,
    modulus: Modulus,
    images: Vec<UniTri>,
}

impl Rep {
    pub fn new(g: &FiniteGroup, images: Vec<UniTri>) -> Result<Self> {
        if images.len() != g.order() {
            return Err(Error::invalid("one image per group element required"));
        }
        let (n, modulus) = (images[0].n(), images[0].modulus());
        if images.iter().any(|u| u.n() != n || u.modulus() != modulus) {
            return Err(Error::invalid("images live in different groups"));
        }
        if let Some(p) = first_non_multiplicative(g, &images, |a, b| a.mul(b)) {
            return Err(non_hom_error(g, "ρ", p));
        }
        Ok(Rep { n, modulus, images })
    }

    pub fn from_generator_images(g: &FiniteGroup, n: usize, modulus: Modulus, gens: &[UniTri]) -> Result<Self> {
        let images = extend_from_generators(g, UniTri::identity(n, modulus), gens, |a, b| a.mul(b))?;
        Self::new(g, images)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn images(&self) -> &[UniTri] {
        &self.images
    }

    pub fn bar_project(&self) -> BarRep {
        BarRep {
            n: self.n,
            modulus: self.modulus,
            images: self.images.iter().map(|u| u.bar_project()).collect(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<Cochain1> {
        let values = self.images.iter().map(|u| u.pr(i, j)).collect::<Result<Vec<_>>>()?;
        Ok(Cochain1 {
            modulus: self.modulus,
            values,
        })
    }
}

/// The class `ρ̄*α`, computed from the cocycle `c`.
pub fn pullback_class(cohom: &Cohomology, rho: &BarRep) -> H2Class {
    cohom.class_unchecked(&rho.pullback_cocycle())
}

/// For `i = 2..=n`, the cochain `ρ̄_{i−1,i+1}` checked to satisfy
/// `d1 ρ̄_{i−1,i+1} = ρ̄_{i−1,i} ∪ ρ̄_{i,i+1}`.
pub fn superdiagonal_cups_vanish(g: &FiniteGroup, rho: &BarRep) -> Result<Vec<Cochain1>> {
    if rho.n < 3 {
        return Err(Error::invalid("cup vanishing needs n >= 3"));
    }
    let mut out = Vec::with_capacity(rho.n - 1);
    for i in 2..=rho.n {
        let f = rho.entry(i - 1, i + 1)?;
        let cup = cup11(&rho.entry(i - 1, i)?, &rho.entry(i, i + 1)?);
        if d1(g, &f) != cup {
            return Err(Error::inconsistency(format!(
                "d1 ρ̄_({},{}) differs from ρ̄_({},{}) ∪ ρ̄_({},{})",
                i - 1,
                i + 1,
                i - 1,
                i,
                i,
                i + 1
            )));
        }
        out.push(f);
    }
    Ok(out)
}

/// Particular solutions of `d1 f13 = χ1∪χ2`, `d1 f24 = χ2∪χ3`; all others
/// differ from these by characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefiningSystem {
    pub f13: Cochain1,
    pub f24: Cochain1,
}

pub fn defining_reps3(cohom: &Cohomology, chars: [&Character; 3]) -> Result<Option<DefiningSystem>> {
    let [c1, c2, c3] = chars;
    let f13 = cohom.coboundary_witness(&cup_chars(c1, c2))?;
    let f24 = cohom.coboundary_witness(&cup_chars(c2, c3))?;
    Ok(match (f13, f24) {
        (Some(f13), Some(f24)) => Some(DefiningSystem { f13, f24 }),
        _ => None,
    })
}

/// A full defining system with vanishing product, and its lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroWitness {
    pub f13: Cochain1,
    pub f24: Cochain1,
    pub f14: Cochain1,
    pub rep: Rep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyReport {
    pub defined: bool,
    /// Class of `χ1∪f24 + f13∪χ3` for the particular defining system.
    pub base: Option<H2Class>,
    /// Generators of the indeterminacy `{class(χ1∪λ′ + λ∪χ3)}`.
    pub indeterminacy: Vec<H2Class>,
    /// The full set, when enumerated.
    pub classes: Option<BTreeSet<Vec<u32>>>,
    pub contains_zero: bool,
    pub essential: bool,
    pub witness: Option<ZeroWitness>,
}

#[derive(Debug, Clone, Copy)]
pub struct MasseyOptions {
    /// Enumerate the class set up to this many classes (0 = never).
    pub enumerate_cap: usize,
    /// Restrict the joint system to pairs `(g, s)`, `s` a generator or 1.
    pub generator_equations: bool,
}

impl Default for MasseyOptions {
    fn default() -> Self {
        MasseyOptions {
            enumerate_cap: 1 << 16,
            generator_equations: false,
        }
    }
}

/// The triple Massey product `⟨χ1, χ2, χ3⟩` as a coset, with the zero
/// question decided by one joint linear system in `(f13, f24, f14)`.
pub fn massey_set3(cohom: &Cohomology, chars: [&Character; 3], opts: MasseyOptions) -> Result<MasseyReport> {
    let g = cohom.group();
    let [c1, _, c3] = chars;
    let Some(sys) = defining_reps3(cohom, chars)? else {
        let empty = MasseyReport {
            defined: false,
            base: None,
            indeterminacy: Vec::new(),
            classes: (opts.enumerate_cap > 0).then(BTreeSet::new),
            contains_zero: false,
            essential: false,
            witness: None,
        };
        // The joint system must agree that no defining system exists.
        if joint_zero_solve(g, chars, opts.generator_equations)?.is_some() {
            return Err(Error::inconsistency("joint system solvable but the product is empty"));
        }
        return Ok(empty);
    };
    let base_cocycle = cup11(&c1.into(), &sys.f24).add(&cup11(&sys.f13, &c3.into()));
    let base = cohom.class_unchecked(&base_cocycle);
    let mut indeterminacy = Vec::new();
    for lam in cohom.hom_generators() {
        for z in [cup_chars(c1, &lam), cup_chars(&lam, c3)] {
            let cl = cohom.class_unchecked(&z);
            if !cl.is_zero() && !indeterminacy.contains(&cl) {
                indeterminacy.push(cl);
            }
        }
    }
    let classes = if opts.enumerate_cap > 0 {
        Some(cohom.class_coset(&base, &indeterminacy, opts.enumerate_cap)?)
    } else {
        None
    };
    let witness = match joint_zero_solve(g, chars, opts.generator_equations)? {
        Some((f13, f24, f14)) => {
            let m = c1.modulus;
            let images = g
                .elements()
                .map(|x| {
                    UniTri::from_entries(
                        3,
                        m,
                        [
                            ((1, 2), chars[0].at(x) as i64),
                            ((2, 3), chars[1].at(x) as i64),
                            ((3, 4), chars[2].at(x) as i64),
                            ((1, 3), f13.at(x) as i64),
                            ((2, 4), f24.at(x) as i64),
                            ((1, 4), f14.at(x) as i64),
                        ],
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let rep = Rep::new(g, images)
                .map_err(|e| Error::inconsistency(format!("joint solution is not a representation: {e}")))?;
            Some(ZeroWitness { f13, f24, f14, rep })
        }
        None => None,
    };
    let contains_zero = witness.is_some();
    if let Some(cl) = &classes {
        let zero = vec![0u32; g.order() * g.order()];
        if cl.contains(&zero) != contains_zero {
            return Err(Error::inconsistency(
                "coset enumeration and joint solve disagree on containing zero",
            ));
        }
    }
    Ok(MasseyReport {
        defined: true,
        base: Some(base),
        indeterminacy,
        classes,
        contains_zero,
        essential: !contains_zero,
        witness,
    })
}

/// Solves `d1 f13 = χ1∪χ2`, `d1 f24 = χ2∪χ3`, `d1 f14 = χ1∪f24 + f13∪χ3`
/// jointly.
pub fn joint_zero_solve(
    g: &FiniteGroup,
    chars: [&Character; 3],
    generator_equations: bool,
) -> Result<Option<(Cochain1, Cochain1, Cochain1)>> {
    let [c1, c2, c3] = chars;
    let m = c1.modulus;
    let n = g.order();
    // Equation pairs (a, b).
    let pairs: Vec<(u32, u32)> = if generator_equations {
        let mut right: Vec<u32> = g.generators().to_vec();
        right.push(g.identity());
        g.elements().flat_map(|a| right.iter().map(move |&s| (a, s))).collect()
    } else {
        g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).collect()
    };
    let p = pairs.len();
    let eq = 3 * p;
    let unknowns = 3 * n;
    let one = 1 % m.get();
    let mut columns = vec![vec![0u32; eq + unknowns]; unknowns];
    for (row, &(a, b)) in pairs.iter().enumerate() {
        let ab = g.mul(a, b) as usize;
        for block in 0..3 {
            // d1 δ_k (a,b) = [ab = k] − [a = k] − [b = k]
            let base = block * n;
            let col = &mut columns[base + ab][block * p + row];
            *col = m.add(*col, one);
            let col = &mut columns[base + a as usize][block * p + row];
            *col = m.sub(*col, one);
            let col = &mut columns[base + b as usize][block * p + row];
            *col = m.sub(*col, one);
        }
        // Third block: − f13(a) χ3(b) − χ1(a) f24(b).
        let r3 = 2 * p + row;
        let col = &mut columns[a as usize][r3];
        *col = m.sub(*col, c3.at(b));
        let col = &mut columns[n + b as usize][r3];
        *col = m.sub(*col, c1.at(a));
    }
    for (k, col) in columns.iter_mut().enumerate() {
        col[eq + k] = one;
    }
    let system = LinearSystem::from_columns(m, eq, unknowns, columns);
    let mut rhs = vec![0u32; eq];
    for (row, &(a, b)) in pairs.iter().enumerate() {
        rhs[row] = m.mul(c1.at(a), c2.at(b));
        rhs[p + row] = m.mul(c2.at(a), c3.at(b));
    }
    let sol = system.solve(&ResidueVector::from_reduced(m, rhs))?;
    Ok(sol.map(|s| {
        let x = s.particular.into_entries();
        let part = |k: usize| Cochain1 {
            modulus: m,
            values: x[k * n..(k + 1) * n].to_vec(),
        };
        (part(0), part(1), part(2))
    }))
}

/// All `f` with `d1 f = z`, by assigning values on generators and
/// propagating `f(xs) = f(x) + f(s) + z(x, s)`; independent of the solver.
pub fn brute_force_d1_solutions(g: &FiniteGroup, z: &Cochain2, guard: usize) -> Result<Vec<Cochain1>> {
    let m = z.modulus;
    let gens = g.generators();
    let total = (m.get() as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    if total > guard as u128 {
        return Err(Error::guard("generator assignments", guard, total.min(usize::MAX as u128) as usize));
    }
    let mut out = Vec::new();
    let mut assign = vec![0u32; gens.len()];
    for _ in 0..total {
        let mut f: Vec<Option<u32>> = vec![None; g.order()];
        f[g.identity() as usize] = Some(m.neg(z.at(g.identity(), g.identity())));
        for (&s, &v) in gens.iter().zip(&assign) {
            if s == g.identity() {
                continue;
            }
            f[s as usize] = Some(v);
        }
        let mut queue = vec![g.identity()];
        let mut visited = vec![false; g.order()];
        visited[g.identity() as usize] = true;
        while let Some(x) = queue.pop() {
            for &s in gens {
                let y = g.mul(x, s);
                let fx = f[x as usize].expect("visited");
                let fs = f[s as usize].expect("generator assigned");
                let val = m.add(m.add(fx, fs), z.at(x, s));
                if !visited[y as usize] {
                    visited[y as usize] = true;
                    if f[y as usize].is_none() || g.generators().contains(&y) {
                        // Generators keep their assigned value; a clash is
                        // caught by the final check.
                        f[y as usize].get_or_insert(val);
                    }
                    queue.push(y);
                }
            }
        }
        let cand = Cochain1 {
            modulus: m,
            values: f.into_iter().map(|v| v.expect("group generated")).collect(),
        };
        if d1(g, &cand) == *z {
            out.push(cand);
        }
        for x in assign.iter_mut() {
            *x += 1;
            if *x == m.get() {
                *x = 0;
            } else {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.values.cmp(&b.values));
    out.dedup();
    Ok(out)
}

/// Brute-force Massey set: classes of `χ1∪a24 + a13∪χ3` over every pair of
/// solutions. `None` when the product is empty.
pub fn massey_oracle3(cohom: &Cohomology, chars: [&Character; 3], guard: usize) -> Result<Option<BTreeSet<Vec<u32>>>> {
    let g = cohom.group();
    let [c1, c2, c3] = chars;
    let s13 = brute_force_d1_solutions(g, &cup_chars(c1, c2), guard)?;
    let s24 = brute_force_d1_solutions(g, &cup_chars(c2, c3), guard)?;
    if s13.is_empty() || s24.is_empty() {
        return Ok(None);
    }
    let pairs = s13.len().saturating_mul(s24.len());
    if pairs > guard {
        return Err(Error::guard("defining-system pairs", guard, pairs));
    }
    let (c1, c3): (Cochain1, Cochain1) = (c1.into(), c3.into());
    let left: Vec<Cochain2> = s24.iter().map(|a24| cup11(&c1, a24)).collect();
    let mut out = BTreeSet::new();
    for a13 in &s13 {
        let right = cup11(a13, &c3);
        for l in &left {
            out.insert(cohom.class_unchecked(&l.add(&right)).canonical);
        }
    }
    Ok(Some(out))
}

/// A lift of `ρ̄` through `π`, when `ρ̄*α = 0`.
pub fn lift_to_full(cohom: &Cohomology, rho: &BarRep) -> Result<Option<Rep>> {
    let z = rho.pullback_cocycle();
    let Some(f) = cohom.coboundary_witness(&z)? else {
        return Ok(None);
    };
    let images = rho
        .images
        .iter()
        .zip(&f.values)
        .map(|(u, &r)| u.lift(r))
        .collect();
    let rep = Rep::new(cohom.group(), images)
        .map_err(|e| Error::inconsistency(format!("lift is not a homomorphism: {e}")))?;
    if rep.bar_project() != *rho {
        return Err(Error::inconsistency("lift does not project back to ρ̄"));
    }
    Ok(Some(rep))
}

fn require_character(g: &FiniteGroup, f: &Cochain1, name: &str) -> Result<Character> {
    match f.to_character(g) {
        Ok(c) => Ok(c),
        Err(_) => {
            let chi = Character {
                modulus: f.modulus,
                values: f.values.clone(),
            };
            let (a, b) = chi.violation(g).expect("not a homomorphism");
            Err(Error::invalid(format!(
                "{name} is not a homomorphism: {name}({}·{}) ≠ {name}({}) + {name}({})",
                g.label(a),
                g.label(b),
                g.label(a),
                g.label(b)
            )))
        }
    }
}

/// Shifts entry `(1,n)` by `λ` and `(2,n+1)` by `λ′`, and checks
/// `(ρ̄′)*α = ρ̄*α + λ∪ρ̄_{n,n+1} + ρ̄₁₂∪λ′`.
pub fn modify_rep(cohom: &Cohomology, rho: &BarRep, lam: &Cochain1, lam_p: &Cochain1) -> Result<BarRep> {
    let g = cohom.group();
    let n = rho.n;
    if n < 3 {
        return Err(Error::invalid("modify_rep needs n >= 3"));
    }
    // Report the multiplicativity failure of the patched map first, then
    // reject on the non-character shift.
    let patched = BarRep {
        n,
        modulus: rho.modulus,
        images: rho.shifted(1, n, lam)?,
    };
    let patched = BarRep {
        images: patched.shifted(2, n + 1, lam_p)?,
        ..patched
    };
    let lam_c = require_character(g, lam, "λ").map_err(|e| annotate_patch(g, &patched, e))?;
    let lam_pc = require_character(g, lam_p, "λ′").map_err(|e| annotate_patch(g, &patched, e))?;
    let out = BarRep::new(g, patched.images)
        .map_err(|e| Error::inconsistency(format!("shift by characters broke multiplicativity: {e}")))?;
    let lhs = pullback_class(cohom, &out);
    let shift = cup_chars(&lam_c, &rho.superdiagonal(n)?).add(&cup_chars(&rho.superdiagonal(1)?, &lam_pc));
    let rhs = cohom.class_unchecked(&rho.pullback_cocycle().add(&shift));
    if lhs != rhs {
        return Err(Error::inconsistency("pullback shift identity fails"));
    }
    Ok(out)
}

fn annotate_patch(g: &FiniteGroup, patched: &BarRep, e: Error) -> Error {
    match first_non_multiplicative(g, &patched.images, |a, b| a.mul(b)) {
        Some((a, b)) => Error::invalid(format!(
            "{e}; the patched map fails multiplicativity at ({}, {})",
            g.label(a),
            g.label(b)
        )),
        None => e,
    }
}

/// Both sides of `Res_{M₁}(ρ̄*α) = Res(ρ̄₁₃) ∪ Res(ρ̄₃₄)` with `M₁ = Ker ρ̄₁₂`.
#[derive(Debug, Clone)]
pub struct RestrictionSplit {
    pub m1: Subgroup,
    pub lhs: H2Class,
    pub rhs: H2Class,
}

impl RestrictionSplit {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn restriction_split_check(g: &FiniteGroup, rho: &BarRep) -> Result<RestrictionSplit> {
    if rho.n != 3 {
        return Err(Error::invalid("restriction split check needs n = 3"));
    }
    let m1 = kernel_of(g, &rho.superdiagonal(1)?);
    let mg = m1.as_group(g);
    let sub = Cohomology::new(&mg, rho.modulus);
    let lhs = sub.class_unchecked(&rho.pullback_cocycle().restrict(&m1));
    let r13 = require_character(&mg, &rho.entry(1, 3)?.restrict(&m1), "Res ρ̄₁₃")
        .map_err(|e| Error::inconsistency(e.to_string()))?;
    let r34 = rho.superdiagonal(3)?.restrict(&m1);
    let rhs = sub.class_unchecked(&cup_chars(&r13, &r34));
    Ok(RestrictionSplit { m1, lhs, rhs })
}

/// `ψ: G → U₂` from `G = M₁M₂` and characters on the two pieces.
#[derive(Debug, Clone)]
pub struct PsiReport {
    pub images: Vec<UniTri>,
    pub homomorphism_direct: bool,
    pub homomorphism_criterion: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn psi_from_subgroups(
    g: &FiniteGroup,
    m1: &Subgroup,
    m2: &Subgroup,
    chi1: &Character,
    chi2: &Character,
    omega1: &Character,
    omega2: &Character,
) -> Result<PsiReport> {
    let m = chi1.modulus;
    if !m1.is_normal() {
        return Err(Error::invalid("M₁ is not normal"));
    }
    if omega1.values.len() != m1.order() || omega2.values.len() != m2.order() {
        return Err(Error::invalid("ω₁, ω₂ must be characters of M₁, M₂"));
    }
    let inter = m1.intersect(g, m2);
    for &x in inter.members() {
        if omega1.at(m1.local(x).expect("in M₁")) != 0 || omega2.at(m2.local(x).expect("in M₂")) != 0 {
            return Err(Error::invalid(format!(
                "ω₁, ω₂ are not trivial on M₁∩M₂ (at {})",
                g.label(x)
            )));
        }
    }
    // One decomposition per element, and well-definedness over all of them.
    let mut decomp: Vec<Option<(u32, u32)>> = vec![None; g.order()];
    let mut corner: Vec<Option<u32>> = vec![None; g.order()];
    for &x2 in m2.members() {
        for &x1 in m1.members() {
            let x = g.mul(x1, x2) as usize;
            let v = m.add(
                omega1.at(m1.local(x1).expect("in M₁")),
                omega2.at(m2.local(x2).expect("in M₂")),
            );
            match corner[x] {
                None => {
                    corner[x] = Some(v);
                    decomp[x] = Some((x1, x2));
                }
                Some(old) if old != v => {
                    return Err(Error::inconsistency(format!(
                        "ψ is not well defined at {}",
                        g.label(x as u32)
                    )))
                }
                Some(_) => {}
            }
        }
    }
    if decomp.iter().any(|d| d.is_none()) {
        return Err(Error::invalid("G ≠ M₁M₂"));
    }
    let images: Vec<UniTri> = g
        .elements()
        .map(|x| {
            UniTri::from_entries(
                2,
                m,
                [
                    ((1, 2), chi1.at(x) as i64),
                    ((2, 3), chi2.at(x) as i64),
                    ((1, 3), corner[x as usize].expect("covered") as i64),
                ],
            )
            .expect("valid entries")
        })
        .collect();
    let direct = first_non_multiplicative(g, &images, |a, b| a.mul(b)).is_none();
    let criterion = g.elements().all(|x| {
        let (_, x2) = decomp[x as usize].expect("covered");
        g.elements().all(|y| {
            let (y1, _) = decomp[y as usize].expect("covered");
            let conj = g.conj(x2, y1);
            let lhs = m.sub(
                omega1.at(m1.local(conj).expect("M₁ normal")),
                omega1.at(m1.local(y1).expect("in M₁")),
            );
            lhs == m.mul(chi1.at(x), chi2.at(y))
        })
    });
    if direct != criterion {
        return Err(Error::inconsistency(
            "direct homomorphism check and commutator criterion disagree",
        ));
    }
    Ok(PsiReport {
        images,
        homomorphism_direct: direct,
        homomorphism_criterion: criterion,
    })
}

/// Validates the setup of `ψ_z`: `χ1(σ1) = 1`, `χ2(σ1) = 0`, `ω` a character
/// of `M₁ = Ker χ1` vanishing on `σ1^m`.
pub fn check_psi_setup(
    g: &FiniteGroup,
    chi1: &Character,
    chi2: &Character,
    sigma1: u32,
    omega: &Character,
) -> Result<Subgroup> {
    let m = chi1.modulus;
    if chi1.at(sigma1) != 1 % m.get() {
        return Err(Error::invalid("χ₁(σ₁) ≠ 1"));
    }
    if chi2.at(sigma1) != 0 {
        return Err(Error::invalid("χ₂(σ₁) ≠ 0"));
    }
    let m1 = kernel_of(g, chi1);
    if omega.values.len() != m1.order() {
        return Err(Error::invalid("ω is not a character of M₁ = Ker χ₁"));
    }
    let mg = m1.as_group(g);
    if omega.violation(&mg).is_some() {
        return Err(Error::invalid("ω is not a homomorphism on M₁"));
    }
    let sm = g.pow(sigma1, m.get() as u64);
    if omega.at(m1.local(sm).expect("χ₁(σ₁^m) = 0")) != 0 {
        return Err(Error::invalid("ω is not trivial on σ₁^m"));
    }
    Ok(m1)
}

/// `ψ_z(hσ₁ⁱ)` with entries `(i, ω(h) + iz, χ₂(h))`.
pub fn psi_z(
    g: &FiniteGroup,
    chi1: &Character,
    chi2: &Character,
    sigma1: u32,
    omega: &Character,
    z: u32,
) -> Result<Vec<UniTri>> {
    let m = chi1.modulus;
    let m1 = check_psi_setup(g, chi1, chi2, sigma1, omega)?;
    g.elements()
        .map(|x| {
            let (h, i) = sigma_decompose(g, &m1, sigma1, m, x)?;
            let hl = m1.local(h).expect("h in M₁");
            UniTri::from_entries(
                2,
                m,
                [
                    ((1, 2), i as i64),
                    ((1, 3), m.add(omega.at(hl), m.mul(i % m.get(), z % m.get())) as i64),
                    ((2, 3), chi2.at(h) as i64),
                ],
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop32Report {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    /// Every lift found under (a) equals some `ψ_z`.
    pub lifts_are_psi: bool,
    /// All lifts found under (a), as their `(1,3)` entries.
    pub lifts: Vec<Cochain1>,
}

impl Prop32Report {
    pub fn consistent(&self) -> bool {
        self.a == self.b && self.b == self.c && self.c == self.d && self.lifts_are_psi
    }
}

/// Evaluates conditions (a)–(d) independently.
pub fn prop32_check(
    cohom: &Cohomology,
    chi1: &Character,
    chi2: &Character,
    sigma1: u32,
    omega: &Character,
) -> Result<Prop32Report> {
    let g = cohom.group();
    let m = chi1.modulus;
    let m1 = check_psi_setup(g, chi1, chi2, sigma1, omega)?;
    // (a): all ρ₁₃ with d1 ρ₁₃ = χ₁∪χ₂ restricting to ω on M₁.
    let mut lifts = Vec::new();
    if let Some(f0) = cohom.coboundary_witness(&cup_chars(chi1, chi2))? {
        for lam in cohom.h1_enumerate(crate::cohom::DEFAULT_ENUM_CAP)? {
            let f = f0.add(&(&lam).into());
            if f.restrict(&m1).values == omega.values {
                lifts.push(f);
            }
        }
    }
    let a = !lifts.is_empty();
    let mut hom_for_z = Vec::with_capacity(m.get() as usize);
    let mut psis = Vec::with_capacity(m.get() as usize);
    for z in 0..m.get() {
        let imgs = psi_z(g, chi1, chi2, sigma1, omega, z)?;
        hom_for_z.push(first_non_multiplicative(g, &imgs, |x, y| x.mul(y)).is_none());
        psis.push(imgs);
    }
    let b = hom_for_z.iter().any(|&h| h);
    let c = hom_for_z.iter().all(|&h| h);
    let lhs = crate::cohom::sigma_minus_one(g, &m1, sigma1, omega)?;
    let d = lhs == chi2.restrict(&m1);
    let lifts_are_psi = lifts.iter().all(|f| {
        psis.iter().any(|imgs| {
            imgs.iter().enumerate().all(|(x, u)| {
                u.at(1, 3) == f.at(x as u32) && u.at(1, 2) == chi1.at(x as u32) && u.at(2, 3) == chi2.at(x as u32)
            })
        })
    });
    Ok(Prop32Report {
        a,
        b,
        c,
        d,
        lifts_are_psi,
        lifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{by_name, cyclic, dihedral};
    use crate::modring::Modulus;

    fn md(m: u64) -> Modulus {
        Modulus::new(m).unwrap()
    }

    fn chars_of(g: &FiniteGroup, m: u64) -> (Cohomology, Vec<Character>) {
        let c = Cohomology::new(g, md(m));
        let chars = c.h1_enumerate(1 << 16).unwrap();
        (c, chars)
    }

    #[test]
    fn trivial_rep_pulls_back_to_zero() {
        let g = by_name("Z2^2").unwrap();
        let c = Cohomology::new(&g, md(2));
        let rho = BarRep::new(&g, vec![BarUniTri::identity(3, md(2)); 4]).unwrap();
        assert!(pullback_class(&c, &rho).is_zero());
        assert!(lift_to_full(&c, &rho).unwrap().unwrap().images().iter().all(|u| u.is_identity()));
        assert!(superdiagonal_cups_vanish(&g, &rho).unwrap().iter().all(|f| f.is_zero()));
    }

    #[test]
    fn n2_pullback_is_cup() {
        let g = cyclic(4);
        let (c, chars) = chars_of(&g, 4);
        for a in &chars {
            for b in &chars {
                let imgs: Vec<BarUniTri> = g
                    .elements()
                    .map(|x| BarUniTri::from_entries(2, md(4), [((1, 2), a.at(x) as i64), ((2, 3), b.at(x) as i64)]).unwrap())
                    .collect();
                let rho = BarRep::new(&g, imgs).unwrap();
                assert_eq!(pullback_class(&c, &rho), c.class_unchecked(&cup_chars(a, b)));
                let lift = lift_to_full(&c, &rho).unwrap();
                assert_eq!(lift.is_some(), c.class_unchecked(&cup_chars(a, b)).is_zero());
                if let Some(r) = lift {
                    assert_eq!(d1(&g, &r.entry(1, 3).unwrap()), cup_chars(a, b));
                }
            }
        }
    }

    #[test]
    fn chi2_zero_contains_zero() {
        let g = by_name("Z2^2").unwrap();
        let (c, chars) = chars_of(&g, 2);
        let zero = Character::zero(&g, md(2));
        let c1 = chars.iter().find(|x| x.values == vec![0, 0, 1, 1]).unwrap();
        let c3 = chars.iter().find(|x| x.values == vec![0, 1, 0, 1]).unwrap();
        let r = massey_set3(&c, [c1, &zero, c3], MasseyOptions::default()).unwrap();
        assert!(r.defined && r.contains_zero && !r.essential);
        let w = r.witness.unwrap();
        assert_eq!(w.rep.bar_project().superdiagonals(), vec![c1.clone(), zero.clone(), c3.clone()]);
        let sys = defining_reps3(&c, [c1, &zero, c3]).unwrap().unwrap();
        assert!(sys.f13.is_zero() || d1(&g, &sys.f13).is_zero());
    }

    #[test]
    fn defining_system_square_on_klein() {
        let g = by_name("Z2^2").unwrap();
        let (c, chars) = chars_of(&g, 2);
        for chi in &chars {
            let z = cup_chars(chi, chi);
            // Exhaustive oracle over all 16 one-cochains.
            let brute = (0..16).any(|x| d1(&g, &Cochain1::new(md(2), (0..4).map(|i| (x >> i) & 1))) == z);
            assert_eq!(c.coboundary_witness(&z).unwrap().is_some(), brute);
        }
    }

    #[test]
    fn empty_product_when_cup_nonzero() {
        let g = cyclic(2);
        let (c, chars) = chars_of(&g, 2);
        let x = &chars[1];
        // χ∪χ is the nonzero class of H²(Z/2, Z/2).
        let r = massey_set3(&c, [x, x, x], MasseyOptions::default()).unwrap();
        assert!(!r.defined && !r.essential && !r.contains_zero);
        assert_eq!(massey_oracle3(&c, [x, x, x], ORACLE_GUARD).unwrap(), None);
    }

    #[test]
    fn z4_singleton_product() {
        let g = cyclic(4);
        let (c, _) = chars_of(&g, 2);
        let chi = Character::new(&g, md(2), vec![0, 1, 0, 1]).unwrap();
        let oracle = massey_oracle3(&c, [&chi, &chi, &chi], ORACLE_GUARD).unwrap().unwrap();
        assert_eq!(oracle.len(), 1);
        let r = massey_set3(&c, [&chi, &chi, &chi], MasseyOptions::default()).unwrap();
        assert_eq!(r.classes.unwrap(), oracle);
    }

    #[test]
    fn brute_force_solutions_match_solver() {
        for name in ["Z6", "D4", "Q8", "Z2^3", "A4"] {
            let g = by_name(name).unwrap();
            for m in [2, 3, 4] {
                let (c, chars) = chars_of(&g, m);
                for a in chars.iter().take(5) {
                    for b in chars.iter().take(5) {
                        let z = cup_chars(a, b);
                        let brute = brute_force_d1_solutions(&g, &z, 1 << 20).unwrap();
                        let solver = c.coboundary_witness(&z).unwrap();
                        assert_eq!(brute.is_empty(), solver.is_none());
                        if solver.is_some() {
                            assert_eq!(brute.len(), chars.len());
                            assert!(brute.iter().all(|f| d1(&g, f) == z));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn modify_rep_identity_and_rejection() {
        let g = by_name("Z2xZ4").unwrap();
        let (c, chars) = chars_of(&g, 2);
        let nz: Vec<&Character> = chars.iter().filter(|x| !x.is_zero()).collect();
        let mut triples = Vec::new();
        for &a in &nz {
            for &b in &nz {
                for &d in &nz {
                    triples.push((a, b, d));
                }
            }
        }
        let (c1, c2, c3, sys) = triples
            .into_iter()
            .find_map(|(a, b, d)| defining_reps3(&c, [a, b, d]).unwrap().map(|s| (a, b, d, s)))
            .unwrap();
        let rho = BarRep::from_entries3(&g, [c1, c2, c3], &sys.f13, &sys.f24).unwrap();
        let zero = Cochain1::zero(8, md(2));
        assert_eq!(modify_rep(&c, &rho, &zero, &zero).unwrap(), rho);
        for lam in &chars {
            for lp in &chars {
                modify_rep(&c, &rho, &lam.into(), &lp.into()).unwrap();
            }
        }
        let mut bad = zero.clone();
        bad.values[1] = 1;
        let err = modify_rep(&c, &rho, &bad, &zero).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert!(err.to_string().contains("multiplicativity"), "{err}");
    }

    #[test]
    fn psi_degenerate_cases() {
        let g = dihedral(4);
        let m = md(2);
        let (_, chars) = chars_of(&g, 2);
        let rot = Subgroup::from_members(&g, &[0, 1, 2, 3]).unwrap();
        let refl = Subgroup::from_members(&g, &[0, 4]).unwrap();
        let zero_g = Character::zero(&g, m);
        for chi2 in &chars {
            for w1 in Cohomology::new(&rot.as_group(&g), m).h1_enumerate(100).unwrap() {
                for w2 in Cohomology::new(&refl.as_group(&g), m).h1_enumerate(100).unwrap() {
                    for chi1 in &chars {
                        let r = psi_from_subgroups(&g, &rot, &refl, chi1, chi2, &w1, &w2).unwrap();
                        assert_eq!(r.homomorphism_direct, r.homomorphism_criterion);
                    }
                    let r = psi_from_subgroups(&g, &rot, &refl, &zero_g, chi2, &w1, &w2).unwrap();
                    // With χ₁ = 0 the criterion is conjugation invariance of ω₁.
                    let inv = g.elements().all(|x| {
                        rot.members().iter().all(|&h| {
                            w1.at(rot.local(g.conj(x, h)).unwrap()) == w1.at(rot.local(h).unwrap())
                        })
                    });
                    assert_eq!(r.homomorphism_direct, inv);
                }
            }
        }
    }

    #[test]
    fn psi_with_trivial_m2() {
        let g = cyclic(4);
        let m = md(4);
        let whole = g.whole();
        let triv = g.trivial_subgroup();
        let chi = Character::new(&g, m, vec![0, 1, 2, 3]).unwrap();
        let omega = Character::new(&g, m, vec![0, 1, 2, 3]).unwrap();
        let w2 = Character::zero(&triv.as_group(&g), m);
        let r = psi_from_subgroups(&g, &whole, &triv, &chi, &chi, &omega, &w2).unwrap();
        // g₂ = 1 makes the criterion read 0 = χ₁(g)χ₂(g′), false here.
        assert!(!r.homomorphism_criterion);
        let zero = Character::zero(&g, m);
        let r = psi_from_subgroups(&g, &whole, &triv, &zero, &chi, &omega, &w2).unwrap();
        assert!(r.homomorphism_criterion);
    }

    #[test]
    fn prop32_trivial_and_false_cases() {
        let g = dihedral(4);
        let m = md(2);
        let c = Cohomology::new(&g, m);
        let chars = c.h1_enumerate(100).unwrap();
        let mut saw_false = false;
        for chi1 in chars.iter().filter(|x| !x.is_zero()) {
            let m1 = kernel_of(&g, chi1);
            let omegas = Cohomology::new(&m1.as_group(&g), m).h1_enumerate(100).unwrap();
            for sigma in g.elements().filter(|&s| chi1.at(s) == 1) {
                for chi2 in chars.iter().filter(|x| x.at(sigma) == 0) {
                    for omega in &omegas {
                        let Ok(r) = prop32_check(&c, chi1, chi2, sigma, omega) else { continue };
                        assert!(r.consistent(), "{r:?}");
                        if chi2.is_zero() && omega.is_zero() {
                            assert!(r.a && r.b && r.c && r.d);
                        }
                        saw_false |= !r.d;
                    }
                }
            }
        }
        assert!(saw_false);
    }

    #[test]
    fn restriction_split_examples() {
        let g = by_name("Z2xZ4").unwrap();
        let (c, chars) = chars_of(&g, 2);
        for c1 in &chars {
            for c2 in &chars {
                for c3 in &chars {
                    if let Some(sys) = defining_reps3(&c, [c1, c2, c3]).unwrap() {
                        let rho = BarRep::from_entries3(&g, [c1, c2, c3], &sys.f13, &sys.f24).unwrap();
                        assert!(restriction_split_check(&g, &rho).unwrap().holds());
                    }
                }
            }
        }
    }
}
