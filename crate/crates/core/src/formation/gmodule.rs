//! Finite `G`-modules `A = ⊕ Z/d_i` with an explicit action, and the
//! fixed points, norms and `Ĥ⁻¹` computations on them.
//!
//! All subgroup computations run over `Z/L` for a common multiple `L` of
//! the orders involved: the summand `Z/d` sits inside `Z/L` as `(L/d)Z/L`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::modring::{gcd, LinearSystem, Modulus, ResidueVector, RowSpan};

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Generators of `{c : Σ c_k images[k] = 0}` over `Z/l`.
pub(crate) fn relations(l: Modulus, width: usize, images: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let k = images.len();
    let one = 1 % l.get();
    let columns = images
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut col = vec![0u32; width + k];
            col[..width].copy_from_slice(v);
            col[width + i] = one;
            col
        })
        .collect();
    LinearSystem::from_columns(l, width, k, columns)
        .kernel()
        .into_iter()
        .map(|c| c.into_entries())
        .collect()
}

/// Some `c` with `Σ c_k images[k] = target` over `Z/l`.
pub(crate) fn combination(l: Modulus, width: usize, images: &[Vec<u32>], target: &[u32]) -> Result<Option<Vec<u32>>> {
    let k = images.len();
    let one = 1 % l.get();
    let columns = images
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut col = vec![0u32; width + k];
            col[..width].copy_from_slice(v);
            col[width + i] = one;
            col
        })
        .collect();
    let sys = LinearSystem::from_columns(l, width, k, columns);
    Ok(sys
        .solve(&ResidueVector::from_reduced(l, target.to_vec()))?
        .map(|s| s.particular.into_entries()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    group: FiniteGroup,
    orders: Vec<u32>,
    exponent: Modulus,
    /// Per group element, the matrix whose column `j` is the image of `e_j`.
    action: Vec<Vec<u32>>,
}

/// A subgroup of `A`, by generators and their span.
#[derive(Debug, Clone)]
pub struct Submodule {
    gens: Vec<Vec<u32>>,
    span: RowSpan,
}

impl Submodule {
    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn order(&self) -> u128 {
        self.span.size().unwrap_or(u128::MAX)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

#[derive(Debug, Clone)]
pub struct HHatMinus1 {
    pub norm_kernel: Submodule,
    pub augmentation: Submodule,
    pub order: u128,
}

impl HHatMinus1 {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GModuleSpec {
    pub orders: Vec<u32>,
    /// One matrix per group generator, as rows; column `j` is the image of `e_j`.
    pub action: Vec<Vec<Vec<i64>>>,
}

impl GModule {
    pub fn new(group: &FiniteGroup, orders: Vec<u32>, gen_matrices: &[Vec<Vec<i64>>]) -> Result<Self> {
        if orders.iter().any(|&d| d == 0) {
            return Err(Error::invalid("summand orders must be positive"));
        }
        let r = orders.len();
        if gen_matrices.len() != group.generators().len() {
            return Err(Error::invalid(format!(
                "{} action matrices for {} group generators",
                gen_matrices.len(),
                group.generators().len()
            )));
        }
        let exponent = orders.iter().fold(1u64, |acc, &d| lcm(acc, d as u64));
        let exponent = Modulus::new(exponent.max(2))?;
        let mut gens = Vec::with_capacity(gen_matrices.len());
        for (s, mat) in gen_matrices.iter().enumerate() {
            if mat.len() != r || mat.iter().any(|row| row.len() != r) {
                return Err(Error::invalid(format!("action matrix {s} is not {r}×{r}")));
            }
            let mut flat = vec![0u32; r * r];
            for i in 0..r {
                for j in 0..r {
                    flat[i * r + j] = mat[i][j].rem_euclid(orders[i] as i64) as u32;
                }
            }
            // Column j must be killed by d_j.
            for j in 0..r {
                for i in 0..r {
                    if (orders[j] as u64 * flat[i * r + j] as u64) % orders[i] as u64 != 0 {
                        return Err(Error::invalid(format!(
                            "action matrix {s}: image of e_{j} does not have order dividing {}",
                            orders[j]
                        )));
                    }
                }
            }
            gens.push(flat);
        }
        let mut out = GModule {
            group: group.clone(),
            orders,
            exponent,
            action: Vec::new(),
        };
        let identity = out.identity_matrix();
        let mut action: Vec<Option<Vec<u32>>> = vec![None; group.order()];
        action[group.identity() as usize] = Some(identity.clone());
        let mut queue = vec![group.identity()];
        while let Some(x) = queue.pop() {
            for (&s, ms) in group.generators().iter().zip(&gens) {
                let y = group.mul(x, s) as usize;
                if action[y].is_none() {
                    action[y] = Some(out.compose(action[x as usize].as_ref().expect("visited"), ms));
                    queue.push(y as u32);
                }
            }
        }
        out.action = action.into_iter().map(|a| a.expect("generators generate")).collect();
        for a in group.elements() {
            for b in group.elements() {
                let ab = &out.action[group.mul(a, b) as usize];
                if *ab != out.compose(&out.action[a as usize], &out.action[b as usize]) {
                    return Err(Error::invalid(format!(
                        "action is not a homomorphism: fails at ({}, {})",
                        group.label(a),
                        group.label(b)
                    )));
                }
            }
        }
        for (s, ms) in group.generators().iter().zip(&gens) {
            if out.action[*s as usize] != *ms {
                return Err(Error::invalid("action matrices do not define a group action"));
            }
        }
        Ok(out)
    }

    pub fn from_spec(group: &FiniteGroup, spec: &GModuleSpec) -> Result<Self> {
        Self::new(group, spec.orders.clone(), &spec.action)
    }

    pub fn to_spec(&self) -> GModuleSpec {
        let r = self.rank();
        GModuleSpec {
            orders: self.orders.clone(),
            action: self
                .group
                .generators()
                .iter()
                .map(|&s| {
                    let m = &self.action[s as usize];
                    (0..r).map(|i| (0..r).map(|j| m[i * r + j] as i64).collect()).collect()
                })
                .collect(),
        }
    }

    pub fn trivial(group: &FiniteGroup, orders: Vec<u32>) -> Result<Self> {
        let r = orders.len();
        let id: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        Self::new(group, orders, &vec![id; group.generators().len()])
    }

    fn identity_matrix(&self) -> Vec<u32> {
        let r = self.rank();
        let mut m = vec![0u32; r * r];
        for i in 0..r {
            m[i * r + i] = 1 % self.orders[i];
        }
        m
    }

    fn compose(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let r = self.rank();
        let mut out = vec![0u32; r * r];
        for i in 0..r {
            let d = self.orders[i] as u64;
            for j in 0..r {
                let mut acc = 0u64;
                for k in 0..r {
                    acc += a[i * r + k] as u64 * b[k * r + j] as u64;
                }
                out[i * r + j] = (acc % d) as u32;
            }
        }
        out
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn exponent(&self) -> Modulus {
        self.exponent
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&d| d as u128).product()
    }

    pub fn reduce(&self, a: &[i64]) -> Result<Vec<u32>> {
        if a.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element of length {}, module has rank {}",
                a.len(),
                self.rank()
            )));
        }
        Ok(a.iter().zip(&self.orders).map(|(&x, &d)| x.rem_euclid(d as i64) as u32).collect())
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.rank()]
    }

    pub fn basis(&self, i: usize) -> Vec<u32> {
        let mut v = self.zero();
        v[i] = 1 % self.orders[i];
        v
    }

    pub fn is_zero(&self, a: &[u32]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &d)| ((x as u64 + y as u64) % d as u64) as u32).collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.orders).map(|(&x, &d)| (d - x) % d).collect()
    }

    pub fn sub(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: i64, a: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| ((c.rem_euclid(d as i64) as u64 * x as u64) % d as u64) as u32)
            .collect()
    }

    /// `g·a`.
    pub fn act(&self, g: u32, a: &[u32]) -> Vec<u32> {
        let r = self.rank();
        let m = &self.action[g as usize];
        (0..r)
            .map(|i| {
                let acc: u64 = (0..r).map(|j| m[i * r + j] as u64 * a[j] as u64).sum();
                (acc % self.orders[i] as u64) as u32
            })
            .collect()
    }

    /// `(σ − 1)a`.
    pub fn sigma_minus_one(&self, sigma: u32, a: &[u32]) -> Vec<u32> {
        self.sub(&self.act(sigma, a), a)
    }

    pub fn elements(&self, cap: usize) -> Result<Vec<Vec<u32>>> {
        let total = self.order();
        if total > cap as u128 {
            return Err(Error::guard("module elements", cap, total.min(usize::MAX as u128) as usize));
        }
        let mut out = vec![self.zero()];
        for (i, &d) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for v in &out {
                for x in 0..d {
                    let mut w = v.clone();
                    w[i] = x;
                    next.push(w);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// `a` inside `(Z/l)^r`; `l` must be a multiple of every order.
    pub(crate) fn embed(&self, l: Modulus, a: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| l.mul(x % l.get(), l.get() / d))
            .collect()
    }

    /// `Σ c_k gens[k]`.
    pub fn combine(&self, gens: &[Vec<u32>], coeffs: &[u32]) -> Vec<u32> {
        gens.iter()
            .zip(coeffs)
            .fold(self.zero(), |acc, (g, &c)| self.add(&acc, &self.scale(c as i64, g)))
    }

    pub fn submodule(&self, gens: Vec<Vec<u32>>) -> Submodule {
        let e = self.exponent;
        let gens: Vec<Vec<u32>> = gens.into_iter().filter(|g| !self.is_zero(g)).collect();
        let span = RowSpan::from_rows(e, self.rank(), gens.iter().map(|g| self.embed(e, g)).collect());
        Submodule { gens, span }
    }

    pub fn contains(&self, sub: &Submodule, a: &[u32]) -> bool {
        sub.span.contains(&self.embed(self.exponent, a))
    }

    /// Whether `a ⊆ b`.
    pub fn is_contained(&self, a: &Submodule, b: &Submodule) -> bool {
        a.gens.iter().all(|g| self.contains(b, g))
    }

    pub fn whole(&self) -> Submodule {
        self.submodule((0..self.rank()).map(|i| self.basis(i)).collect())
    }

    /// Generators of the kernel of a homomorphism given on the generators
    /// of `sub`, with images in `(Z/l)^width`.
    pub(crate) fn kernel_of_map(&self, sub: &Submodule, l: Modulus, width: usize, images: &[Vec<u32>]) -> Submodule {
        let rel = relations(l, width, images);
        // Each generator has order dividing l, so Z/l coefficients suffice.
        let gens = rel.iter().map(|c| self.combine(&sub.gens, c)).collect();
        self.submodule(gens)
    }

    /// `A^M`.
    pub fn fixed_submodule(&self, m: &Subgroup) -> Submodule {
        let e = self.exponent;
        let r = self.rank();
        let sigmas: Vec<u32> = m.members().iter().copied().filter(|&s| s != self.group.identity()).collect();
        let basis: Vec<Vec<u32>> = (0..r).map(|i| self.basis(i)).collect();
        let images: Vec<Vec<u32>> = basis
            .iter()
            .map(|b| {
                sigmas
                    .iter()
                    .flat_map(|&s| self.embed(e, &self.sigma_minus_one(s, b)))
                    .collect()
            })
            .collect();
        let whole = self.submodule(basis);
        if sigmas.is_empty() {
            return whole;
        }
        self.kernel_of_map(&whole, e, r * sigmas.len(), &images)
    }

    fn check_fixed(&self, m: &Subgroup, a: &[u32]) -> Result<()> {
        if let Some(&s) = m.members().iter().find(|&&s| self.act(s, a) != a) {
            return Err(Error::invalid(format!(
                "element {a:?} is not fixed by {} in the subgroup",
                self.group.label(s)
            )));
        }
        Ok(())
    }

    /// `N_{M′/M}(a) = Σ r·a` over coset representatives of `M′/M`.
    pub fn norm(&self, small: &Subgroup, big: &Subgroup, a: &[u32]) -> Result<Vec<u32>> {
        if !small.is_subgroup_of(big) {
            return Err(Error::invalid("norm needs M ≤ M′"));
        }
        self.check_fixed(small, a)?;
        Ok(self.norm_with(&small.coset_reps_in(&self.group, big), a))
    }

    pub fn norm_with(&self, reps: &[u32], a: &[u32]) -> Vec<u32> {
        reps.iter().fold(self.zero(), |acc, &r| self.add(&acc, &self.act(r, a)))
    }

    /// `m·S`.
    pub fn multiple(&self, sub: &Submodule, k: i64) -> Submodule {
        self.submodule(sub.gens.iter().map(|g| self.scale(k, g)).collect())
    }

    /// `Ĥ⁻¹(M′/M, A^M) = Ker N_{M′/M} / I_{M′/M}`.
    pub fn h_hat_minus1(&self, small: &Subgroup, big: &Subgroup) -> Result<HHatMinus1> {
        if !small.is_subgroup_of(big) {
            return Err(Error::invalid("Ĥ⁻¹ needs M ≤ M′"));
        }
        let e = self.exponent;
        let fixed = self.fixed_submodule(small);
        let reps = small.coset_reps_in(&self.group, big);
        let images: Vec<Vec<u32>> = fixed.gens.iter().map(|a| self.embed(e, &self.norm_with(&reps, a))).collect();
        let norm_kernel = self.kernel_of_map(&fixed, e, self.rank(), &images);
        let aug = fixed
            .gens
            .iter()
            .flat_map(|a| reps.iter().map(move |&s| (s, a)))
            .map(|(s, a)| self.sigma_minus_one(s, a))
            .collect();
        let augmentation = self.submodule(aug);
        if !self.is_contained(&augmentation, &norm_kernel) {
            return Err(Error::inconsistency("I_{M′/M} is not inside the norm kernel"));
        }
        let order = norm_kernel.order() / augmentation.order();
        Ok(HHatMinus1 {
            norm_kernel,
            augmentation,
            order,
        })
    }

    /// `I_{M′/M}` as `{(σ − 1)a : a ∈ A^M}` for a generator `σ` of a cyclic
    /// quotient.
    pub fn augmentation_cyclic(&self, small: &Subgroup, sigma: u32) -> Submodule {
        let fixed = self.fixed_submodule(small);
        self.submodule(fixed.gens.iter().map(|a| self.sigma_minus_one(sigma, a)).collect())
    }

    /// `(t, b)` with `t ∈ A^M`, `b ∈ A^G` and `(σ − 1)t = x + b`.
    pub fn hilbert90_solve(&self, small: &Subgroup, sigma: u32, x: &[u32]) -> Result<Option<(Vec<u32>, Vec<u32>)>> {
        self.check_fixed(small, x)?;
        let e = self.exponent;
        let am = self.fixed_submodule(small);
        let ag = self.fixed_submodule(&self.group.whole());
        let mut images: Vec<Vec<u32>> = am.gens.iter().map(|t| self.embed(e, &self.sigma_minus_one(sigma, t))).collect();
        images.extend(ag.gens.iter().map(|b| self.embed(e, &self.neg(b))));
        let Some(c) = combination(e, self.rank(), &images, &self.embed(e, x))? else {
            return Ok(None);
        };
        let k = am.gens.len();
        let t = self.combine(&am.gens, &c[..k]);
        let b = self.combine(&ag.gens, &c[k..]);
        if self.sigma_minus_one(sigma, &t) != self.add(x, &b) {
            return Err(Error::inconsistency("Hilbert 90 solution fails verification"));
        }
        Ok(Some((t, b)))
    }
}
