//! Unitriangular groups `U_n(Z/m)`, their quotients `Ū_n(Z/m)` by the central
//! corner, the 2-cocycle `c` and the twisted product on `Z/m × Ū_n`.
//!
//! Matrices have size `(n+1) × (n+1)` and entries are addressed 1-based as
//! in `pr_{ij}`, `1 <= i < j <= n+1`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::modring::Modulus;

/// Dense storage of the strictly upper entries, row by row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Shape {
    n: usize,
}

impl Shape {
    fn size(self) -> usize {
        self.n + 1
    }

    fn len(self) -> usize {
        let s = self.size();
        s * (s - 1) / 2
    }

    #[inline]
    fn idx(self, i: usize, j: usize) -> usize {
        let s = self.size();
        (i - 1) * (2 * s - i) / 2 + (j - i - 1)
    }

    fn check(self, i: usize, j: usize) -> Result<()> {
        if i >= 1 && i < j && j <= self.size() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "entry ({i},{j}) out of range for {}x{} unitriangular matrices",
                self.size(),
                self.size()
            )))
        }
    }
}

fn product(shape: Shape, m: Modulus, a: &[u32], b: &[u32], skip_corner: bool) -> Vec<u32> {
    let s = shape.size();
    let mm = m.get() as u64;
    let mut out = vec![0u32; shape.len()];
    for i in 1..s {
        for j in i + 1..=s {
            if skip_corner && i == 1 && j == s {
                continue;
            }
            let mut acc = a[shape.idx(i, j)] as u64 + b[shape.idx(i, j)] as u64;
            for k in i + 1..j {
                acc += a[shape.idx(i, k)] as u64 * b[shape.idx(k, j)] as u64;
            }
            out[shape.idx(i, j)] = (acc % mm) as u32;
        }
    }
    out
}

fn inverse_entries(shape: Shape, m: Modulus, a: &[u32], skip_corner: bool) -> Vec<u32> {
    let s = shape.size();
    let mm = m.get() as u64;
    let mut x = vec![0u32; shape.len()];
    // X = A^{-1} satisfies X_ij = -A_ij - sum_{i<k<j} A_ik X_kj.
    for width in 1..s {
        for i in 1..=s - width {
            let j = i + width;
            if skip_corner && i == 1 && j == s {
                continue;
            }
            let mut acc = a[shape.idx(i, j)] as u64;
            for k in i + 1..j {
                acc += a[shape.idx(i, k)] as u64 * x[shape.idx(k, j)] as u64;
            }
            x[shape.idx(i, j)] = m.neg((acc % mm) as u32);
        }
    }
    x
}

fn check_compatible(n1: usize, m1: Modulus, n2: usize, m2: Modulus) -> Result<()> {
    if m1 != m2 {
        return Err(Error::ModulusMismatch(m1.get(), m2.get()));
    }
    if n1 != n2 {
        return Err(Error::DimensionMismatch(format!("U_{n1} vs U_{n2}")));
    }
    Ok(())
}

/// An element of `U_n(Z/m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniTri {
    n: usize,
    modulus: Modulus,
    entries: Vec<u32>,
}

impl UniTri {
    pub fn identity(n: usize, modulus: Modulus) -> Self {
        assert!(n >= 1, "U_n needs n >= 1");
        let shape = Shape { n };
        UniTri {
            n,
            modulus,
            entries: vec![0; shape.len()],
        }
    }

    /// `I + sum of value * E_ij` over the given entries.
    pub fn from_entries(
        n: usize,
        modulus: Modulus,
        entries: impl IntoIterator<Item = ((usize, usize), i64)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("U_n needs n >= 1"));
        }
        let mut u = UniTri::identity(n, modulus);
        for ((i, j), v) in entries {
            u.shape().check(i, j)?;
            let k = u.shape().idx(i, j);
            u.entries[k] = modulus.add(u.entries[k], modulus.reduce(v));
        }
        Ok(u)
    }

    /// `I + value * E_ij`.
    pub fn elementary(n: usize, modulus: Modulus, i: usize, j: usize, value: i64) -> Result<Self> {
        Self::from_entries(n, modulus, [((i, j), value)])
    }

    /// From a full `(n+1) x (n+1)` matrix, which must be unitriangular.
    pub fn from_matrix(modulus: Modulus, rows: &[Vec<i64>]) -> Result<Self> {
        let s = rows.len();
        if s < 2 {
            return Err(Error::invalid("unitriangular matrix must be at least 2x2"));
        }
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != s {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {s}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                let v = modulus.reduce(v);
                if j < i && v != 0 || j == i && v != 1 % modulus.get() {
                    return Err(Error::invalid(format!(
                        "matrix is not unitriangular at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                if j > i {
                    entries.push(((i + 1, j + 1), v as i64));
                }
            }
        }
        Self::from_entries(s - 1, modulus, entries)
    }

    fn shape(&self) -> Shape {
        Shape { n: self.n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn pr(&self, i: usize, j: usize) -> Result<u32> {
        self.shape().check(i, j)?;
        Ok(self.entries[self.shape().idx(i, j)])
    }

    /// Unchecked entry access; panics when out of range.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.entries[self.shape().idx(i, j)]
    }

    pub fn corner(&self) -> u32 {
        self.at(1, self.n + 1)
    }

    pub fn try_mul(&self, other: &UniTri) -> Result<UniTri> {
        check_compatible(self.n, self.modulus, other.n, other.modulus)?;
        Ok(UniTri {
            n: self.n,
            modulus: self.modulus,
            entries: product(self.shape(), self.modulus, &self.entries, &other.entries, false),
        })
    }

    pub fn mul(&self, other: &UniTri) -> UniTri {
        self.try_mul(other).expect("incompatible unitriangular matrices")
    }

    pub fn inverse(&self) -> UniTri {
        UniTri {
            n: self.n,
            modulus: self.modulus,
            entries: inverse_entries(self.shape(), self.modulus, &self.entries, false),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// The image under `π: U_n → Ū_n`.
    pub fn bar_project(&self) -> BarUniTri {
        let mut entries = self.entries.clone();
        entries[self.shape().idx(1, self.n + 1)] = 0;
        BarUniTri {
            n: self.n,
            modulus: self.modulus,
            entries,
        }
    }

    /// `I + r E_{1,n+1}`.
    pub fn central_embed(r: u32, n: usize, modulus: Modulus) -> UniTri {
        let mut u = UniTri::identity(n, modulus);
        let k = u.shape().idx(1, n + 1);
        u.entries[k] = r % modulus.get();
        u
    }

    /// The block on rows and columns `a..=b`, an element of `U_{b-a}`.
    pub fn block_restrict(&self, a: usize, b: usize) -> Result<UniTri> {
        if !(1 <= a && a < b && b <= self.n + 1) {
            return Err(Error::invalid(format!(
                "block range {a}..{b} invalid for U_{}",
                self.n
            )));
        }
        let r = b - a;
        let mut out = UniTri::identity(r, self.modulus);
        for i in a..b {
            for j in i + 1..=b {
                let k = out.shape().idx(i - a + 1, j - a + 1);
                out.entries[k] = self.at(i, j);
            }
        }
        Ok(out)
    }

    /// The full matrix as rows, diagonal included.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        let s = self.n + 1;
        (1..=s)
            .map(|i| {
                (1..=s)
                    .map(|j| match j.cmp(&i) {
                        std::cmp::Ordering::Less => 0,
                        std::cmp::Ordering::Equal => 1 % self.modulus.get(),
                        std::cmp::Ordering::Greater => self.at(i, j),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(n: usize, modulus: Modulus, rng: &mut R) -> UniTri {
        let mut u = UniTri::identity(n, modulus);
        for x in u.entries.iter_mut() {
            *x = rng.random_range(0..modulus.get());
        }
        u
    }

    /// All `m^{n(n+1)/2}` elements, in lexicographic order of entries.
    pub fn all(n: usize, modulus: Modulus, cap: usize) -> Result<Vec<UniTri>> {
        let id = UniTri::identity(n, modulus);
        let tuples = all_tuples(id.entries.len(), modulus, cap, "U_n enumeration")?;
        Ok(tuples
            .into_iter()
            .map(|entries| UniTri {
                n,
                modulus,
                entries,
            })
            .collect())
    }
}

fn all_tuples(len: usize, modulus: Modulus, cap: usize, what: &str) -> Result<Vec<Vec<u32>>> {
    let m = modulus.get() as u128;
    let total = m.checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::guard(what, cap, total.min(usize::MAX as u128) as usize));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u32; len];
    for _ in 0..total {
        out.push(cur.clone());
        for x in cur.iter_mut().rev() {
            *x += 1;
            if *x == modulus.get() {
                *x = 0;
            } else {
                break;
            }
        }
    }
    Ok(out)
}

impl fmt::Display for UniTri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        write!(f, "{}", rows.join(" "))
    }
}

/// An element of `Ū_n(Z/m) = U_n(Z/m) / R⁺`; the corner slot does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarUniTri {
    n: usize,
    modulus: Modulus,
    /// Same layout as `UniTri`, with the corner slot pinned to 0.
    entries: Vec<u32>,
}

impl BarUniTri {
    pub fn identity(n: usize, modulus: Modulus) -> Self {
        UniTri::identity(n, modulus).bar_project()
    }

    pub fn from_entries(
        n: usize,
        modulus: Modulus,
        entries: impl IntoIterator<Item = ((usize, usize), i64)>,
    ) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        if entries.iter().any(|&((i, j), _)| i == 1 && j == n + 1) {
            return Err(Error::invalid(format!(
                "Ū_{n} has no (1,{}) entry",
                n + 1
            )));
        }
        Ok(UniTri::from_entries(n, modulus, entries)?.bar_project())
    }

    fn shape(&self) -> Shape {
        Shape { n: self.n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn pr(&self, i: usize, j: usize) -> Result<u32> {
        self.shape().check(i, j)?;
        if i == 1 && j == self.n + 1 {
            return Err(Error::invalid(format!(
                "Ū_{} has no (1,{}) entry",
                self.n,
                self.n + 1
            )));
        }
        Ok(self.entries[self.shape().idx(i, j)])
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        debug_assert!(!(i == 1 && j == self.n + 1));
        self.entries[self.shape().idx(i, j)]
    }

    pub fn try_mul(&self, other: &BarUniTri) -> Result<BarUniTri> {
        check_compatible(self.n, self.modulus, other.n, other.modulus)?;
        Ok(BarUniTri {
            n: self.n,
            modulus: self.modulus,
            entries: product(self.shape(), self.modulus, &self.entries, &other.entries, true),
        })
    }

    pub fn mul(&self, other: &BarUniTri) -> BarUniTri {
        self.try_mul(other).expect("incompatible unitriangular matrices")
    }

    pub fn inverse(&self) -> BarUniTri {
        BarUniTri {
            n: self.n,
            modulus: self.modulus,
            entries: inverse_entries(self.shape(), self.modulus, &self.entries, true),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// The section `Ū → U` filling the corner with `r`.
    pub fn lift(&self, r: u32) -> UniTri {
        let mut entries = self.entries.clone();
        entries[self.shape().idx(1, self.n + 1)] = r % self.modulus.get();
        UniTri {
            n: self.n,
            modulus: self.modulus,
            entries,
        }
    }

    /// Return a copy with entry `(i,j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: u32) -> Result<BarUniTri> {
        self.pr(i, j)?;
        let mut out = self.clone();
        let k = self.shape().idx(i, j);
        out.entries[k] = value % self.modulus.get();
        Ok(out)
    }

    /// Rows with `None` at the omitted corner.
    pub fn to_rows(&self) -> Vec<Vec<Option<u32>>> {
        let s = self.n + 1;
        self.lift(0)
            .to_rows()
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.into_iter()
                    .enumerate()
                    .map(|(j, x)| (!(i == 0 && j == s - 1)).then_some(x))
                    .collect()
            })
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(n: usize, modulus: Modulus, rng: &mut R) -> BarUniTri {
        UniTri::random(n, modulus, rng).bar_project()
    }

    pub fn all(n: usize, modulus: Modulus, cap: usize) -> Result<Vec<BarUniTri>> {
        let shape = Shape { n };
        let corner = shape.idx(1, n + 1);
        let tuples = all_tuples(shape.len() - 1, modulus, cap, "Ū_n enumeration")?;
        Ok(tuples
            .into_iter()
            .map(|mut entries| {
                entries.insert(corner, 0);
                BarUniTri {
                    n,
                    modulus,
                    entries,
                }
            })
            .collect())
    }
}

impl fmt::Display for BarUniTri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r
                    .iter()
                    .map(|x| x.map_or_else(|| "*".to_string(), |v| v.to_string()))
                    .collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        write!(f, "{}", rows.join(" "))
    }
}

/// `c(ū, ū') = Σ_{k=2}^{n} ū_{1k} ū'_{k,n+1}`.
pub fn c_value(a: &BarUniTri, b: &BarUniTri) -> u32 {
    assert_eq!(a.n, b.n);
    assert_eq!(a.modulus, b.modulus);
    let n = a.n;
    let mm = a.modulus.get() as u64;
    let mut acc = 0u64;
    for k in 2..=n {
        acc += a.at(1, k) as u64 * b.at(k, n + 1) as u64;
    }
    (acc % mm) as u32
}

/// An element of `R⁺ × Ū_n` with `(r,ū)(r',ū') = (r + r' + c(ū,ū'), ūū')`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionElement {
    pub r: u32,
    pub ubar: BarUniTri,
}

impl ExtensionElement {
    pub fn identity(n: usize, modulus: Modulus) -> Self {
        ExtensionElement {
            r: 0,
            ubar: BarUniTri::identity(n, modulus),
        }
    }

    pub fn try_mul(&self, other: &ExtensionElement) -> Result<ExtensionElement> {
        let ubar = self.ubar.try_mul(&other.ubar)?;
        let m = self.ubar.modulus;
        let r = m.add(m.add(self.r, other.r), c_value(&self.ubar, &other.ubar));
        Ok(ExtensionElement { r, ubar })
    }

    pub fn mul(&self, other: &ExtensionElement) -> ExtensionElement {
        self.try_mul(other).expect("incompatible extension elements")
    }

    pub fn inverse(&self) -> ExtensionElement {
        let inv = self.ubar.inverse();
        let m = self.ubar.modulus;
        let r = m.neg(m.add(self.r, c_value(&self.ubar, &inv)));
        ExtensionElement { r, ubar: inv }
    }
}

/// `h = pr_{1,n+1} × π : U_n → R⁺ × Ū_n`.
pub fn schreier_h(u: &UniTri) -> ExtensionElement {
    ExtensionElement {
        r: u.corner(),
        ubar: u.bar_project(),
    }
}

/// Outcome of checking that `h` is an isomorphism onto the twisted product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierReport {
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub violations: u64,
    pub bijective: bool,
}

impl SchreierReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.bijective
    }
}

/// Checks `h(uv) = h(u) * h(v)` on all pairs when `|U|^2 <= pair_limit`, and
/// on `samples` random pairs otherwise. Bijectivity is checked on every
/// element when `|U| <= pair_limit`, else via `h(lift(r, ū)) = (r, ū)` on the
/// sampled elements.
pub fn schreier_iso_check<R: Rng + ?Sized>(
    n: usize,
    modulus: Modulus,
    pair_limit: usize,
    samples: u64,
    rng: &mut R,
) -> SchreierReport {
    let len = Shape { n }.len();
    let order = (modulus.get() as u128).checked_pow(len as u32);
    let exhaustive = order.is_some_and(|o| o * o <= pair_limit as u128);
    let mut violations = 0u64;
    let mut pairs = 0u64;
    let mut bijective = true;
    let check_pair = |u: &UniTri, v: &UniTri| schreier_h(&u.mul(v)) == schreier_h(u).mul(&schreier_h(v));
    if exhaustive {
        let all = UniTri::all(n, modulus, pair_limit).expect("order checked above");
        let mut images: Vec<ExtensionElement> = all.iter().map(schreier_h).collect();
        images.sort_by(|a, b| (a.r, &a.ubar.entries).cmp(&(b.r, &b.ubar.entries)));
        images.dedup();
        bijective = images.len() == all.len();
        for u in &all {
            for v in &all {
                pairs += 1;
                if !check_pair(u, v) {
                    violations += 1;
                }
            }
        }
    } else {
        for _ in 0..samples {
            let u = UniTri::random(n, modulus, rng);
            let v = UniTri::random(n, modulus, rng);
            pairs += 1;
            if !check_pair(&u, &v) {
                violations += 1;
            }
            let e = schreier_h(&u);
            if schreier_h(&e.ubar.lift(e.r)) != e || e.ubar.lift(e.r) != u {
                bijective = false;
            }
        }
    }
    SchreierReport {
        exhaustive,
        pairs_checked: pairs,
        violations,
        bijective,
    }
}

/// Outcome of checking the 2-cocycle identity for `c` on `Ū_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleReport {
    pub exhaustive: bool,
    pub triples_checked: u64,
    pub violations: u64,
}

#[inline]
fn cocycle_defect(u: &BarUniTri, v: &BarUniTri, w: &BarUniTri) -> u32 {
    let m = u.modulus;
    let a = m.sub(c_value(v, w), c_value(&u.mul(v), w));
    let b = m.sub(c_value(u, &v.mul(w)), c_value(u, v));
    m.add(a, b)
}

/// `c(v,w) − c(uv,w) + c(u,vw) − c(u,v) = 0`, exhaustively when
/// `|Ū|^3 <= triple_limit`, else on `samples` random triples.
pub fn cocycle_identity_check<R: Rng + ?Sized>(
    n: usize,
    modulus: Modulus,
    triple_limit: usize,
    samples: u64,
    rng: &mut R,
) -> CocycleReport {
    let len = Shape { n }.len() - 1;
    let order = (modulus.get() as u128).checked_pow(len as u32);
    let exhaustive = order.is_some_and(|o| o.saturating_mul(o).saturating_mul(o) <= triple_limit as u128);
    let mut violations = 0u64;
    let mut count = 0u64;
    if exhaustive {
        let all = BarUniTri::all(n, modulus, triple_limit).expect("order checked above");
        for u in &all {
            for v in &all {
                let uv = u.mul(v);
                for w in &all {
                    count += 1;
                    let m = modulus;
                    let d = m.add(
                        m.sub(c_value(v, w), c_value(&uv, w)),
                        m.sub(c_value(u, &v.mul(w)), c_value(u, v)),
                    );
                    if d != 0 {
                        violations += 1;
                    }
                }
            }
        }
    } else {
        for _ in 0..samples {
            let u = BarUniTri::random(n, modulus, rng);
            let v = BarUniTri::random(n, modulus, rng);
            let w = BarUniTri::random(n, modulus, rng);
            count += 1;
            if cocycle_defect(&u, &v, &w) != 0 {
                violations += 1;
            }
        }
    }
    CocycleReport {
        exhaustive,
        triples_checked: count,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn md(m: u64) -> Modulus {
        Modulus::new(m).unwrap()
    }

    /// Plain square-matrix product mod m.
    fn dense_mul(a: &[Vec<u32>], b: &[Vec<u32>], m: u32) -> Vec<Vec<u32>> {
        let s = a.len();
        (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        ((0..s).map(|k| a[i][k] as u64 * b[k][j] as u64).sum::<u64>() % m as u64)
                            as u32
                    })
                    .collect()
            })
            .collect()
    }

    fn to_i64(rows: Vec<Vec<u32>>) -> Vec<Vec<i64>> {
        rows.into_iter()
            .map(|r| r.into_iter().map(i64::from).collect())
            .collect()
    }

    #[test]
    fn square_of_superdiagonal() {
        let m = md(4);
        let x = UniTri::from_entries(2, m, [((1, 2), 1), ((2, 3), 1)]).unwrap();
        let sq = x.mul(&x);
        assert_eq!((sq.at(1, 2), sq.at(2, 3), sq.at(1, 3)), (2, 2, 1));
        let dense = dense_mul(&x.to_rows(), &x.to_rows(), 4);
        assert_eq!(sq.to_rows(), dense);
    }

    #[test]
    fn inverse_of_e12() {
        let m = md(4);
        let a = UniTri::elementary(2, m, 1, 2, 1).unwrap();
        let inv = a.inverse();
        assert_eq!(inv.pr(1, 2).unwrap(), 3);
        assert!(dense_mul(&a.to_rows(), &inv.to_rows(), 4) == UniTri::identity(2, m).to_rows());
        assert_eq!(UniTri::identity(3, m).inverse(), UniTri::identity(3, m));
    }

    #[test]
    fn group_laws_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, mm) in [(1, 5), (2, 4), (3, 6), (4, 2), (5, 9)] {
            let m = md(mm);
            for _ in 0..50 {
                let a = UniTri::random(n, m, &mut rng);
                let b = UniTri::random(n, m, &mut rng);
                assert_eq!(UniTri::identity(n, m).mul(&a), a);
                assert!(a.mul(&a.inverse()).is_identity());
                assert_eq!(a.inverse().inverse(), a);
                assert_eq!(
                    a.mul(&b).to_rows(),
                    dense_mul(&a.to_rows(), &b.to_rows(), mm as u32)
                );
                let ab = a.bar_project();
                assert_eq!(BarUniTri::identity(n, m).mul(&ab), ab);
                assert!(ab.mul(&ab.inverse()).is_identity());
                assert_eq!(ab.mul(&b.bar_project()), a.mul(&b).bar_project());
                let e = schreier_h(&a);
                assert_eq!(ExtensionElement::identity(n, m).mul(&e), e);
                assert_eq!(e.mul(&e.inverse()), ExtensionElement::identity(n, m));
                // pr_{12} is a homomorphism.
                let s = a.mul(&b);
                assert_eq!(s.at(1, 2), m.add(a.at(1, 2), b.at(1, 2)));
            }
        }
    }

    #[test]
    fn from_matrix_roundtrip_and_rejects() {
        let m = md(3);
        let u = UniTri::from_entries(3, m, [((1, 3), 2), ((2, 4), 1)]).unwrap();
        assert_eq!(UniTri::from_matrix(m, &to_i64(u.to_rows())).unwrap(), u);
        let bad = vec![vec![1, 0], vec![1, 1]];
        assert!(UniTri::from_matrix(m, &bad).is_err());
    }

    #[test]
    fn mismatched_operands_rejected() {
        let a = UniTri::identity(2, md(4));
        assert!(a.try_mul(&UniTri::identity(3, md(4))).is_err());
        assert!(a.try_mul(&UniTri::identity(2, md(3))).is_err());
    }

    #[test]
    fn projections_and_kernel() {
        let m = md(5);
        let id = UniTri::identity(3, m);
        for i in 1..4 {
            for j in i + 1..=4 {
                assert_eq!(id.pr(i, j).unwrap(), 0);
            }
        }
        assert!(id.pr(0, 1).is_err());
        assert!(id.pr(2, 2).is_err());
        for r in 0..5 {
            assert!(UniTri::central_embed(r, 3, m).bar_project().is_identity());
        }
        assert!(BarUniTri::identity(3, m).pr(1, 4).is_err());
        assert!(BarUniTri::from_entries(3, m, [((1, 4), 1)]).is_err());
    }

    #[test]
    fn kernel_of_pi_has_m_elements() {
        let m = md(3);
        let all = UniTri::all(2, m, 1000).unwrap();
        let k = all.iter().filter(|u| u.bar_project().is_identity()).count();
        assert_eq!(k, 3);
    }

    #[test]
    fn block_restrict_examples() {
        let m = md(2);
        let u = UniTri::from_entries(3, m, [((1, 2), 1), ((3, 4), 1)]).unwrap();
        assert_eq!(u.block_restrict(1, 4).unwrap(), u);
        assert_eq!(
            u.block_restrict(1, 3).unwrap(),
            UniTri::elementary(2, m, 1, 2, 1).unwrap()
        );
        assert!(u.block_restrict(3, 3).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = UniTri::random(4, md(6), &mut rng);
            let b = UniTri::random(4, md(6), &mut rng);
            for (x, y) in [(1, 3), (2, 5), (2, 4), (1, 5)] {
                let lhs = a.mul(&b).block_restrict(x, y).unwrap();
                let ra = a.block_restrict(x, y).unwrap();
                let rb = b.block_restrict(x, y).unwrap();
                assert_eq!(lhs.to_rows(), dense_mul(&ra.to_rows(), &rb.to_rows(), 6));
            }
        }
    }

    /// Factor set of `π` with respect to the section `ū ↦ lift(ū, 0)`:
    /// `s(a) s(b) = ι(f(a,b)) s(ab)`.
    fn factor_set(a: &BarUniTri, b: &BarUniTri) -> u32 {
        let prod = a.lift(0).mul(&b.lift(0));
        let sab = a.mul(b).lift(0);
        prod.mul(&sab.inverse()).corner()
    }

    #[test]
    fn c_value_examples() {
        let m = md(4);
        let u = BarUniTri::from_entries(2, m, [((1, 2), 1)]).unwrap();
        let v = BarUniTri::from_entries(2, m, [((2, 3), 3)]).unwrap();
        assert_eq!(c_value(&u, &v), 3);
        assert_eq!(factor_set(&u, &v), 3);
        let id = BarUniTri::identity(2, m);
        assert_eq!(c_value(&id, &u), 0);
        assert_eq!(c_value(&u, &id), 0);

        let m2 = md(2);
        let u = BarUniTri::from_entries(3, m2, [((1, 2), 1), ((1, 3), 1)]).unwrap();
        let v = BarUniTri::from_entries(3, m2, [((2, 4), 1), ((3, 4), 1)]).unwrap();
        assert_eq!(c_value(&u, &v), 0);
        assert_eq!(factor_set(&u, &v), 0);
    }

    #[test]
    fn c_equals_factor_set_of_zero_section() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, mm) in [(2, 4), (3, 3), (4, 2)] {
            for _ in 0..200 {
                let a = BarUniTri::random(n, md(mm), &mut rng);
                let b = BarUniTri::random(n, md(mm), &mut rng);
                assert_eq!(c_value(&a, &b), factor_set(&a, &b));
            }
        }
    }

    #[test]
    fn cocycle_identity_small_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (n, m) in [(2, 2), (2, 3)] {
            let r = cocycle_identity_check(n, md(m), 1_000_000, 0, &mut rng);
            assert!(r.exhaustive);
            assert_eq!(r.violations, 0);
        }
    }

    #[test]
    fn schreier_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = schreier_iso_check(2, md(2), 100, 0, &mut rng);
        assert!(r.exhaustive && r.passed());
        assert_eq!(r.pairs_checked, 64);
        let r = schreier_iso_check(3, md(4), 100, 1000, &mut rng);
        assert!(!r.exhaustive && r.passed());
    }

    #[test]
    fn extension_associative_exhaustive() {
        for mm in [2, 3] {
            let m = md(mm);
            let bars = BarUniTri::all(2, m, 1000).unwrap();
            let els: Vec<ExtensionElement> = bars
                .iter()
                .flat_map(|b| (0..mm as u32).map(move |r| ExtensionElement { r, ubar: b.clone() }))
                .collect();
            for a in &els {
                for b in &els {
                    let ab = a.mul(b);
                    for c in &els {
                        assert_eq!(ab.mul(c), a.mul(&b.mul(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn display_marks_corner() {
        let m = md(3);
        let b = BarUniTri::from_entries(2, m, [((1, 2), 2)]).unwrap();
        assert_eq!(b.to_string(), "[1 2 *] [0 1 0] [0 0 1]");
    }
}
