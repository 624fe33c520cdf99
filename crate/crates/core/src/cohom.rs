//! Inhomogeneous cochains with trivial `Z/m` coefficients.
//!
//! Conventions: `d1 f (g,h) = f(gh) − f(g) − f(h)` and
//! `d2 z (g,h,k) = z(h,k) − z(gh,k) + z(g,hk) − z(g,h)`, so that a matrix
//! entry satisfying `ρ₁₃(gh) = ρ₁₃(g) + χ₁(g)χ₂(h) + ρ₁₃(h)` reads
//! `d1 ρ₁₃ = χ₁ ∪ χ₂`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Character, FiniteGroup, Subgroup};
use crate::modring::{LinearSystem, Modulus, ResidueVector, RowSpan};

/// Default cap on enumerated sets of characters or classes.
pub const DEFAULT_ENUM_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain1 {
    pub modulus: Modulus,
    pub values: Vec<u32>,
}

impl Cochain1 {
    pub fn zero(order: usize, modulus: Modulus) -> Self {
        Cochain1 {
            modulus,
            values: vec![0; order],
        }
    }

    pub fn new(modulus: Modulus, values: impl IntoIterator<Item = i64>) -> Self {
        Cochain1 {
            modulus,
            values: values.into_iter().map(|v| modulus.reduce(v)).collect(),
        }
    }

    #[inline]
    pub fn at(&self, g: u32) -> u32 {
        self.values[g as usize]
    }

    pub fn add(&self, other: &Cochain1) -> Cochain1 {
        let m = self.modulus;
        Cochain1 {
            modulus: m,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| m.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Cochain1) -> Cochain1 {
        let m = self.modulus;
        Cochain1 {
            modulus: m,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| m.sub(a, b)).collect(),
        }
    }

    pub fn restrict(&self, sub: &Subgroup) -> Cochain1 {
        Cochain1 {
            modulus: self.modulus,
            values: sub.members().iter().map(|&x| self.at(x)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// The cochain as a character, if it is a homomorphism.
    pub fn to_character(&self, g: &FiniteGroup) -> Result<Character> {
        Character::new(g, self.modulus, self.values.clone())
    }
}

impl From<&Character> for Cochain1 {
    fn from(chi: &Character) -> Self {
        Cochain1 {
            modulus: chi.modulus,
            values: chi.values.clone(),
        }
    }
}

/// A 2-cochain; `values[g * order + h] = z(g, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain2 {
    pub modulus: Modulus,
    pub order: usize,
    pub values: Vec<u32>,
}

impl Cochain2 {
    pub fn zero(order: usize, modulus: Modulus) -> Self {
        Cochain2 {
            modulus,
            order,
            values: vec![0; order * order],
        }
    }

    pub fn from_fn(order: usize, modulus: Modulus, f: impl Fn(u32, u32) -> u32) -> Self {
        let mut values = Vec::with_capacity(order * order);
        for a in 0..order as u32 {
            for b in 0..order as u32 {
                values.push(f(a, b) % modulus.get());
            }
        }
        Cochain2 {
            modulus,
            order,
            values,
        }
    }

    #[inline]
    pub fn at(&self, g: u32, h: u32) -> u32 {
        self.values[g as usize * self.order + h as usize]
    }

    pub fn add(&self, other: &Cochain2) -> Cochain2 {
        assert_eq!(self.order, other.order);
        let m = self.modulus;
        Cochain2 {
            modulus: m,
            order: self.order,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| m.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Cochain2) -> Cochain2 {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Cochain2 {
        let m = self.modulus;
        let c = m.reduce(c);
        Cochain2 {
            modulus: m,
            order: self.order,
            values: self.values.iter().map(|&a| m.mul(a, c)).collect(),
        }
    }

    pub fn restrict(&self, sub: &Subgroup) -> Cochain2 {
        let mem = sub.members();
        Cochain2::from_fn(mem.len(), self.modulus, |a, b| self.at(mem[a as usize], mem[b as usize]))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

pub fn d1(g: &FiniteGroup, f: &Cochain1) -> Cochain2 {
    let m = f.modulus;
    Cochain2::from_fn(g.order(), m, |a, b| m.sub(m.sub(f.at(g.mul(a, b)), f.at(a)), f.at(b)))
}

pub fn d2_value(g: &FiniteGroup, z: &Cochain2, a: u32, b: u32, c: u32) -> u32 {
    let m = z.modulus;
    let x = m.sub(z.at(b, c), z.at(g.mul(a, b), c));
    let y = m.sub(z.at(a, g.mul(b, c)), z.at(a, b));
    m.add(x, y)
}

/// First triple at which `d2 z` is nonzero.
pub fn d2_violation(g: &FiniteGroup, z: &Cochain2) -> Option<(u32, u32, u32)> {
    for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                if d2_value(g, z, a, b, c) != 0 {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// `(φ ∪ ψ)(g, h) = φ(g) ψ(h)`.
pub fn cup11(phi: &Cochain1, psi: &Cochain1) -> Cochain2 {
    assert_eq!(phi.modulus, psi.modulus, "cup of cochains with different moduli");
    assert_eq!(phi.values.len(), psi.values.len(), "cup of cochains on different groups");
    let m = phi.modulus;
    Cochain2::from_fn(phi.values.len(), m, |a, b| m.mul(phi.at(a), psi.at(b)))
}

pub fn cup_chars(a: &Character, b: &Character) -> Cochain2 {
    cup11(&a.into(), &b.into())
}

/// A class in `H²(G, Z/m)`, held by its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct H2Class {
    pub modulus: Modulus,
    pub order: usize,
    pub canonical: Vec<u32>,
}

impl H2Class {
    pub fn is_zero(&self) -> bool {
        self.canonical.iter().all(|&v| v == 0)
    }

    pub fn representative(&self) -> Cochain2 {
        Cochain2 {
            modulus: self.modulus,
            order: self.order,
            values: self.canonical.clone(),
        }
    }
}

/// Cohomology of one finite group with `Z/m` coefficients: holds the
/// coboundary span and the `d1` system once, for repeated queries.
#[derive(Debug, Clone)]
pub struct Cohomology {
    group: FiniteGroup,
    modulus: Modulus,
    boundaries: RowSpan,
    d1_system: LinearSystem,
}

impl Cohomology {
    pub fn new(group: &FiniteGroup, modulus: Modulus) -> Self {
        let n = group.order();
        let eq = n * n;
        let one = 1 % modulus.get();
        // Column k: d1 of the indicator cochain of k, then the unit vector.
        let columns: Vec<Vec<u32>> = (0..n as u32)
            .map(|k| {
                let mut col = vec![0u32; eq + n];
                for a in 0..n as u32 {
                    for b in 0..n as u32 {
                        let mut v = 0i64;
                        if group.mul(a, b) == k {
                            v += 1;
                        }
                        if a == k {
                            v -= 1;
                        }
                        if b == k {
                            v -= 1;
                        }
                        col[a as usize * n + b as usize] = modulus.reduce(v);
                    }
                }
                col[eq + k as usize] = one;
                col
            })
            .collect();
        let boundaries = RowSpan::from_rows(modulus, eq, columns.iter().map(|c| c[..eq].to_vec()).collect());
        let d1_system = LinearSystem::from_columns(modulus, eq, n, columns);
        Cohomology {
            group: group.clone(),
            modulus,
            boundaries,
            d1_system,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn boundaries(&self) -> &RowSpan {
        &self.boundaries
    }

    fn check_cochain2(&self, z: &Cochain2) -> Result<()> {
        if z.modulus != self.modulus {
            return Err(Error::ModulusMismatch(z.modulus.get(), self.modulus.get()));
        }
        if z.order != self.group.order() {
            return Err(Error::DimensionMismatch(format!(
                "2-cochain on a group of order {}, expected {}",
                z.order,
                self.group.order()
            )));
        }
        Ok(())
    }

    /// Some `f` with `d1 f = z`, or `None` when `z` is not a coboundary.
    pub fn coboundary_witness(&self, z: &Cochain2) -> Result<Option<Cochain1>> {
        self.check_cochain2(z)?;
        let b = ResidueVector::from_reduced(self.modulus, z.values.clone());
        Ok(self.d1_system.solve(&b)?.map(|sol| Cochain1 {
            modulus: self.modulus,
            values: sol.particular.into_entries(),
        }))
    }

    /// Generators of `Hom(G, Z/m) = ker d1`.
    pub fn hom_generators(&self) -> Vec<Character> {
        self.d1_system
            .kernel()
            .into_iter()
            .map(|k| Character {
                modulus: self.modulus,
                values: k.into_entries(),
            })
            .collect()
    }

    /// Every character `G → Z/m`, each once, in a deterministic order.
    pub fn h1_enumerate(&self, cap: usize) -> Result<Vec<Character>> {
        let n = self.group.order();
        let span = RowSpan::from_rows(
            self.modulus,
            n,
            self.hom_generators().into_iter().map(|c| c.values).collect(),
        );
        let mut out: Vec<Character> = span
            .elements(cap)?
            .into_iter()
            .map(|values| Character {
                modulus: self.modulus,
                values,
            })
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn h1_order(&self) -> u128 {
        let span = RowSpan::from_rows(
            self.modulus,
            self.group.order(),
            self.hom_generators().into_iter().map(|c| c.values).collect(),
        );
        span.size().unwrap_or(u128::MAX)
    }

    /// Canonical class of a validated 2-cocycle.
    pub fn h2_class(&self, z: &Cochain2) -> Result<H2Class> {
        self.check_cochain2(z)?;
        if let Some((a, b, c)) = d2_violation(&self.group, z) {
            return Err(Error::invalid(format!(
                "not a 2-cocycle: d2 z({}, {}, {}) ≠ 0",
                self.group.label(a),
                self.group.label(b),
                self.group.label(c)
            )));
        }
        Ok(self.class_unchecked(z))
    }

    /// Canonical class without the cocycle check; for cochains known to be
    /// cocycles by construction.
    pub fn class_unchecked(&self, z: &Cochain2) -> H2Class {
        H2Class {
            modulus: self.modulus,
            order: z.order,
            canonical: self.boundaries.canonical(&z.values),
        }
    }

    pub fn h2_equal(&self, a: &H2Class, b: &H2Class) -> bool {
        a.canonical == b.canonical
    }

    pub fn h2_is_zero(&self, a: &H2Class) -> bool {
        a.is_zero()
    }

    pub fn class_add(&self, a: &H2Class, b: &H2Class) -> H2Class {
        let m = self.modulus;
        let sum: Vec<u32> = a.canonical.iter().zip(&b.canonical).map(|(&x, &y)| m.add(x, y)).collect();
        H2Class {
            modulus: m,
            order: a.order,
            canonical: self.boundaries.canonical(&sum),
        }
    }

    pub fn zero_class(&self) -> H2Class {
        self.class_unchecked(&Cochain2::zero(self.group.order(), self.modulus))
    }

    /// All classes `base + span(gens)`, by closure; each exactly once.
    pub fn class_coset(&self, base: &H2Class, gens: &[H2Class], cap: usize) -> Result<BTreeSet<Vec<u32>>> {
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        seen.insert(base.canonical.clone());
        let mut frontier = vec![base.clone()];
        while let Some(c) = frontier.pop() {
            for g in gens {
                let next = self.class_add(&c, g);
                if !seen.contains(&next.canonical) {
                    if seen.len() >= cap {
                        return Err(Error::guard("class enumeration", cap, seen.len() + 1));
                    }
                    seen.insert(next.canonical.clone());
                    frontier.push(next);
                }
            }
        }
        Ok(seen)
    }

    /// Generators of the cocycle space `Z² = ker d2`.
    pub fn cocycle_generators(&self) -> Vec<Cochain2> {
        let g = &self.group;
        let n = g.order();
        let eq = n * n * n;
        let unknowns = n * n;
        let one = 1 % self.modulus.get();
        let m = self.modulus;
        let mut columns = Vec::with_capacity(unknowns);
        for x in 0..n as u32 {
            for y in 0..n as u32 {
                // d2 of the indicator of (x, y).
                let mut col = vec![0u32; eq + unknowns];
                let mut bump = |a: u32, b: u32, c: u32, v: i64| {
                    let i = (a as usize * n + b as usize) * n + c as usize;
                    col[i] = m.add(col[i], m.reduce(v));
                };
                for a in 0..n as u32 {
                    for b in 0..n as u32 {
                        for c in 0..n as u32 {
                            let mut v = 0i64;
                            if (b, c) == (x, y) {
                                v += 1;
                            }
                            if (g.mul(a, b), c) == (x, y) {
                                v -= 1;
                            }
                            if (a, g.mul(b, c)) == (x, y) {
                                v += 1;
                            }
                            if (a, b) == (x, y) {
                                v -= 1;
                            }
                            if v != 0 {
                                bump(a, b, c, v);
                            }
                        }
                    }
                }
                col[eq + x as usize * n + y as usize] = one;
                columns.push(col);
            }
        }
        LinearSystem::from_columns(m, eq, unknowns, columns)
            .kernel()
            .into_iter()
            .map(|k| Cochain2 {
                modulus: m,
                order: n,
                values: k.into_entries(),
            })
            .collect()
    }

    /// Generators of `{c : Σ c_k z_k is a coboundary}`.
    pub fn coboundary_relations(&self, cocycles: &[Cochain2]) -> Vec<Vec<u32>> {
        let m = self.modulus;
        let eq = self.group.order() * self.group.order();
        let k = cocycles.len();
        let brows: Vec<&[u32]> = self.boundaries.rows().collect();
        let unknowns = k + brows.len();
        let one = 1 % m.get();
        let columns: Vec<Vec<u32>> = cocycles
            .iter()
            .map(|z| z.values.as_slice())
            .chain(brows.iter().copied())
            .enumerate()
            .map(|(i, v)| {
                let mut col = vec![0u32; eq + unknowns];
                col[..eq].copy_from_slice(v);
                col[eq + i] = one;
                col
            })
            .collect();
        LinearSystem::from_columns(m, eq, unknowns, columns)
            .kernel()
            .into_iter()
            .map(|c| c.entries()[..k].to_vec())
            .filter(|c| c.iter().any(|&x| x != 0))
            .collect()
    }

    /// Every class of `H²(G, Z/m)`, as canonical representatives.
    pub fn h2_enumerate(&self, cap: usize) -> Result<BTreeSet<Vec<u32>>> {
        let gens: Vec<H2Class> = self
            .cocycle_generators()
            .iter()
            .map(|z| self.class_unchecked(z))
            .collect();
        self.class_coset(&self.zero_class(), &gens, cap)
    }
}

/// Left transversal data for `M ≤ G`: `reps[0] = 1` and, for every `x`,
/// the index of the coset `xM`.
#[derive(Debug, Clone)]
pub struct Transversal {
    pub reps: Vec<u32>,
    coset_of: Vec<u32>,
}

impl Transversal {
    pub fn standard(g: &FiniteGroup, sub: &Subgroup) -> Self {
        Self::from_reps(g, sub, sub.left_transversal(g)).expect("standard transversal is valid")
    }

    pub fn from_reps(g: &FiniteGroup, sub: &Subgroup, reps: Vec<u32>) -> Result<Self> {
        let mut coset_of = vec![u32::MAX; g.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &h in sub.members() {
                let x = g.mul(r, h) as usize;
                if coset_of[x] != u32::MAX {
                    return Err(Error::invalid("transversal has two representatives of one coset"));
                }
                coset_of[x] = i as u32;
            }
        }
        if coset_of.iter().any(|&c| c == u32::MAX) {
            return Err(Error::invalid("transversal misses a coset"));
        }
        Ok(Transversal { reps, coset_of })
    }

    /// `(σ_g(i), m_i(g))` with `g r_i = r_{σ_g(i)} m_i(g)`.
    pub fn act(&self, g: &FiniteGroup, x: u32, i: usize) -> (usize, u32) {
        let y = g.mul(x, self.reps[i]);
        let j = self.coset_of[y as usize] as usize;
        (j, g.mul(g.inv(self.reps[j]), y))
    }
}

/// Transfer `Hom(M, Z/m) → Hom(G, Z/m)`; `phi` is indexed by `sub`'s local ids.
pub fn cor1(g: &FiniteGroup, sub: &Subgroup, phi: &Character) -> Character {
    cor1_with(g, sub, phi, &Transversal::standard(g, sub))
}

pub fn cor1_with(g: &FiniteGroup, sub: &Subgroup, phi: &Character, t: &Transversal) -> Character {
    assert_eq!(phi.values.len(), sub.order(), "character is not on the subgroup");
    let m = phi.modulus;
    let values = g
        .elements()
        .map(|x| {
            (0..t.reps.len()).fold(0u32, |acc, i| {
                let (_, mi) = t.act(g, x, i);
                m.add(acc, phi.at(sub.local(mi).expect("m_i(g) lies in the subgroup")))
            })
        })
        .collect();
    Character { modulus: m, values }
}

/// `(gω)(h) = ω(g h g⁻¹)` for `ω` on a normal subgroup.
pub fn conj_act(g: &FiniteGroup, sub: &Subgroup, x: u32, omega: &Character) -> Result<Character> {
    if !sub.is_normal() {
        return Err(Error::invalid("conjugation action needs a normal subgroup"));
    }
    let values = sub
        .members()
        .iter()
        .map(|&h| omega.at(sub.local(g.conj(x, h)).expect("normal subgroup")))
        .collect();
    Ok(Character {
        modulus: omega.modulus,
        values,
    })
}

/// `(σ − 1)ω`.
pub fn sigma_minus_one(g: &FiniteGroup, sub: &Subgroup, sigma: u32, omega: &Character) -> Result<Character> {
    Ok(conj_act(g, sub, sigma, omega)?.add(&omega.neg()))
}

/// Restriction of an `H²(G)` class to a subgroup, canonical in `H²(M)`.
pub fn res_class(class: &H2Class, sub: &Subgroup, sub_cohom: &Cohomology) -> H2Class {
    sub_cohom.class_unchecked(&class.representative().restrict(sub))
}

/// Cached cohomology contexts keyed by subgroup.
#[derive(Debug, Default)]
pub struct CohomologyCache {
    map: HashMap<Vec<u32>, (FiniteGroup, Cohomology)>,
}

impl CohomologyCache {
    pub fn get(&mut self, g: &FiniteGroup, sub: &Subgroup, m: Modulus) -> &(FiniteGroup, Cohomology) {
        self.map.entry(sub.members().to_vec()).or_insert_with(|| {
            let sg = sub.as_group(g);
            let c = Cohomology::new(&sg, m);
            (sg, c)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{by_name, cyclic, dihedral, small_library};
    use crate::groups::kernel_of;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn md(m: u64) -> Modulus {
        Modulus::new(m).unwrap()
    }

    fn random_cochain1<R: Rng>(n: usize, m: Modulus, rng: &mut R) -> Cochain1 {
        Cochain1::new(m, (0..n).map(|_| rng.random_range(0..m.get() as i64)))
    }

    #[test]
    fn d1_of_character_vanishes() {
        let g = cyclic(4);
        let chi = Character::new(&g, md(4), vec![0, 1, 2, 3]).unwrap();
        assert!(d1(&g, &(&chi).into()).is_zero());
    }

    #[test]
    fn d1_constant_one_on_z2() {
        let g = cyclic(2);
        let f = Cochain1::new(md(2), [1, 1]);
        let z = d1(&g, &f);
        // Direct evaluation of f(gh) − f(g) − f(h) = 1 − 1 − 1.
        assert!(z.values.iter().all(|&v| v == 1));
    }

    #[test]
    fn d2_d1_vanishes_exhaustively_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in small_library().iter().filter(|g| g.order() <= 8) {
            for m in [2, 3, 4] {
                for _ in 0..5 {
                    let f = random_cochain1(g.order(), md(m), &mut rng);
                    assert_eq!(d2_violation(g, &d1(g, &f)), None, "{}", g.name());
                }
            }
        }
    }

    #[test]
    fn cup_examples() {
        let g = cyclic(2);
        let m = md(2);
        let id = Character::new(&g, m, vec![0, 1]).unwrap();
        let z = cup_chars(&id, &id);
        assert_eq!(z.values, vec![0, 0, 0, 1]);
        assert!(cup_chars(&Character::zero(&g, m), &id).is_zero());
    }

    #[test]
    fn coboundary_witness_examples() {
        let g = cyclic(2);
        let m = md(2);
        let c = Cohomology::new(&g, m);
        let z = Cochain2 {
            modulus: m,
            order: 2,
            values: vec![0, 0, 0, 1],
        };
        // Oracle: try all four 1-cochains.
        let any = (0..4).any(|x| d1(&g, &Cochain1::new(m, [x & 1, x >> 1])) == z);
        assert!(!any);
        assert_eq!(c.coboundary_witness(&z).unwrap(), None);
        assert!(!c.h2_class(&z).unwrap().is_zero());
        let zero = Cochain2::zero(2, m);
        let f = c.coboundary_witness(&zero).unwrap().unwrap();
        assert_eq!(d1(&g, &f), zero);
    }

    #[test]
    fn witness_for_random_coboundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for name in ["Z6", "D4", "Q8", "Z2xZ4", "A4"] {
            let g = by_name(name).unwrap();
            for m in [2, 4, 6] {
                let c = Cohomology::new(&g, md(m));
                let f0 = random_cochain1(g.order(), md(m), &mut rng);
                let z = d1(&g, &f0);
                let f = c.coboundary_witness(&z).unwrap().unwrap();
                assert_eq!(d1(&g, &f), z);
                assert!(c.h2_class(&z).unwrap().is_zero());
                // Coset invariance.
                let w = d1(&g, &random_cochain1(g.order(), md(m), &mut rng));
                let base = cup_chars(&c.h1_enumerate(100).unwrap()[0], &c.h1_enumerate(100).unwrap()[0]);
                assert_eq!(c.h2_class(&base).unwrap(), c.h2_class(&base.add(&w)).unwrap());
            }
        }
    }

    #[test]
    fn h1_counts() {
        assert_eq!(Cohomology::new(&by_name("1").unwrap(), md(3)).h1_enumerate(10).unwrap().len(), 1);
        let z4 = cyclic(4);
        assert_eq!(Cohomology::new(&z4, md(2)).h1_enumerate(10).unwrap().len(), 2);
        let v4 = by_name("Z2^2").unwrap();
        let chars = Cohomology::new(&v4, md(4)).h1_enumerate(100).unwrap();
        assert_eq!(chars.len(), 4);
        assert!(chars.iter().all(|c| c.values.iter().all(|&v| v % 2 == 0)));
    }

    /// |Hom(G, Z/m)| by brute force over generator images.
    fn brute_hom_count(g: &FiniteGroup, m: Modulus) -> usize {
        let k = g.generators().len();
        let total = (m.get() as usize).pow(k as u32);
        (0..total)
            .filter(|&idx| {
                let mut t = idx;
                let imgs: Vec<i64> = (0..k)
                    .map(|_| {
                        let d = t % m.get() as usize;
                        t /= m.get() as usize;
                        d as i64
                    })
                    .collect();
                Character::from_generator_images(g, m, &imgs).is_ok()
            })
            .count()
    }

    #[test]
    fn h1_matches_brute_force() {
        for g in small_library() {
            for m in [2, 3, 4] {
                let c = Cohomology::new(&g, md(m));
                assert_eq!(c.h1_enumerate(1 << 16).unwrap().len(), brute_hom_count(&g, md(m)), "{}", g.name());
            }
        }
    }

    #[test]
    fn h2_orders_known() {
        // |H²(G, Z/m)| for a few groups with known answers.
        let cases = [("Z2", 2, 2), ("Z4", 2, 2), ("Z2^2", 2, 8), ("Z3", 2, 1), ("Q8", 2, 4), ("D4", 2, 8), ("Z2^2", 4, 8)];
        for (name, m, expected) in cases {
            let g = by_name(name).unwrap();
            let c = Cohomology::new(&g, md(m));
            assert_eq!(c.h2_enumerate(1000).unwrap().len(), expected, "{name} m={m}");
        }
    }

    #[test]
    fn non_cocycle_rejected() {
        let g = cyclic(3);
        let m = md(3);
        let c = Cohomology::new(&g, m);
        let mut z = Cochain2::zero(3, m);
        z.values[1] = 1;
        let err = c.h2_class(&z).unwrap_err();
        assert!(err.to_string().contains("not a 2-cocycle"));
    }

    #[test]
    fn anticommutativity_up_to_coboundary() {
        for g in small_library() {
            for m in [2, 3, 4] {
                let c = Cohomology::new(&g, md(m));
                let chars = c.h1_enumerate(1 << 12).unwrap();
                for a in chars.iter().take(6) {
                    for b in chars.iter().take(6) {
                        let lhs = c.h2_class(&cup_chars(a, b)).unwrap();
                        let rhs = c.h2_class(&cup_chars(b, a).scale(-1)).unwrap();
                        assert_eq!(lhs, rhs, "{}", g.name());
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let g = by_name("D4").unwrap();
        let m = md(2);
        let c = Cohomology::new(&g, m);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for chi in c.h1_enumerate(100).unwrap() {
            let k = kernel_of(&g, &chi);
            assert!(chi.restrict(&k).is_zero());
            assert_eq!(chi.restrict(&g.whole()), chi);
            let f = random_cochain1(g.order(), m, &mut rng);
            assert_eq!(d1(&g, &f).restrict(&k), d1(&k.as_group(&g), &f.restrict(&k)));
        }
    }

    #[test]
    fn transfer_z4_to_index_two() {
        let g = cyclic(4);
        let m = md(2);
        let sub = Subgroup::from_members(&g, &[0, 2]).unwrap();
        let phi = Character::new(&sub.as_group(&g), m, vec![0, 1]).unwrap();
        let a = cor1_with(&g, &sub, &phi, &Transversal::from_reps(&g, &sub, vec![0, 1]).unwrap());
        let b = cor1_with(&g, &sub, &phi, &Transversal::from_reps(&g, &sub, vec![0, 3]).unwrap());
        assert_eq!(a, b);
        // The transfer Z/4 → {0,2} sends 1 to 1+1 = 2, and φ(2) = 1.
        assert_eq!(a.values, vec![0, 1, 0, 1]);
        assert_eq!(cor1(&g, &g.whole(), &Character::new(&g, m, vec![0, 1, 0, 1]).unwrap()).values, vec![0, 1, 0, 1]);
        assert!(cor1(&g, &sub, &Character::zero(&sub.as_group(&g), m)).is_zero());
    }

    #[test]
    fn transfer_independent_of_transversal_and_res_cor() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for g in small_library().into_iter().filter(|g| g.order() > 1) {
            for m in [2, 3, 4] {
                let c = Cohomology::new(&g, md(m));
                for chi in c.h1_enumerate(1 << 12).unwrap().into_iter().take(4) {
                    let sub = kernel_of(&g, &chi);
                    let sg = sub.as_group(&g);
                    let sc = Cohomology::new(&sg, md(m));
                    for phi in sc.h1_enumerate(1 << 12).unwrap().into_iter().take(4) {
                        let std = cor1(&g, &sub, &phi);
                        assert!(std.violation(&g).is_none());
                        for _ in 0..5 {
                            // Random representatives of each coset.
                            let reps: Vec<u32> = Transversal::standard(&g, &sub)
                                .reps
                                .iter()
                                .map(|&r| g.mul(r, sub.members()[rng.random_range(0..sub.order())]))
                                .collect();
                            let t = Transversal::from_reps(&g, &sub, reps).unwrap();
                            assert_eq!(cor1_with(&g, &sub, &phi, &t), std);
                        }
                        // res ∘ cor = Σ over coset reps of conjugates.
                        let lhs = std.restrict(&sub);
                        let mut rhs = Character::zero(&sg, md(m));
                        for &r in &Transversal::standard(&g, &sub).reps {
                            rhs = rhs.add(&conj_act(&g, &sub, r, &phi).unwrap());
                        }
                        assert_eq!(lhs, rhs, "{}", g.name());
                    }
                }
            }
        }
    }

    #[test]
    fn reflection_inverts_rotation_character() {
        let g = dihedral(4);
        let m = md(4);
        let rot = Subgroup::from_members(&g, &[0, 1, 2, 3]).unwrap();
        let omega = Character::new(&rot.as_group(&g), m, vec![0, 1, 2, 3]).unwrap();
        let s = 4;
        assert_eq!(conj_act(&g, &rot, s, &omega).unwrap(), omega.neg());
        assert_eq!(conj_act(&g, &rot, 0, &omega).unwrap(), omega);
        assert_eq!(conj_act(&g, &rot, 2, &omega).unwrap(), omega);
    }
}
