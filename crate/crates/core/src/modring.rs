//! Exact arithmetic over `Z/m` for arbitrary `m >= 2`.
//!
//! Because `Z/m` has zero divisors when `m` is composite, row spans are
//! canonicalized with the Howell normal form rather than row echelon form.
//! A Howell form is an echelon form whose pivots divide `m`, whose entries
//! above each pivot are reduced below it, and which has the extra property
//! that every vector of the span with `j` leading zeros is a combination of
//! the rows with at least `j` leading zeros. That last property is what makes
//! greedy reduction a complete membership test and gives unique coset
//! representatives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The modulus `m >= 2` of the residue ring `Z/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u32);

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(m: u64) -> Result<Self> {
        Modulus::new(m)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0 as u64
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 || m > u32::MAX as u64 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Modulus(m as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn reduce_u64(self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let m = self.0 as u64;
        (if s >= m { s - m } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.0 as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Inverse of `a` when it is a unit.
    pub fn inverse(self, a: u32) -> Option<u32> {
        let (g, s, _) = xgcd(a as i64, self.0 as i64);
        (g == 1).then(|| self.reduce(s))
    }

    /// A unit `u` with `u * a = gcd(a, m) (mod m)`.
    pub fn normalizing_unit(self, a: u32) -> u32 {
        let n = self.0 as u64;
        let d = gcd(a as u64, n);
        let step = n / d;
        if step == 1 {
            return 1;
        }
        let a_red = (a as u64 / d) % step;
        let (_, s, _) = xgcd(a_red as i64, step as i64);
        let base = s.rem_euclid(step as i64) as u64;
        let mut u = base;
        while gcd(u, n) != 1 {
            u += step;
        }
        (u % n) as u32
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// An element of `Z/m`, stored as its least non-negative representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: i64, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn zero(modulus: Modulus) -> Self {
        Residue { value: 0, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues from different rings"
        );
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.sub(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueVector {
    modulus: Modulus,
    entries: Vec<u32>,
}

impl ResidueVector {
    pub fn new(modulus: Modulus, entries: impl IntoIterator<Item = i64>) -> Self {
        ResidueVector {
            modulus,
            entries: entries.into_iter().map(|x| modulus.reduce(x)).collect(),
        }
    }

    /// Entries must already be reduced.
    pub fn from_reduced(modulus: Modulus, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&x| x < modulus.get()));
        ResidueVector { modulus, entries }
    }

    pub fn zeros(modulus: Modulus, len: usize) -> Self {
        ResidueVector {
            modulus,
            entries: vec![0; len],
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn get(&self, i: usize) -> Residue {
        Residue {
            value: self.entries[i],
            modulus: self.modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &ResidueVector) -> ResidueVector {
        assert_eq!(self.len(), other.len());
        let m = self.modulus;
        ResidueVector {
            modulus: m,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| m.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> ResidueVector {
        let m = self.modulus;
        ResidueVector {
            modulus: m,
            entries: self.entries.iter().map(|&a| m.mul(a, c)).collect(),
        }
    }
}

/// Dense row-major matrix over `Z/m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl ResidueMatrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        ResidueMatrix {
            modulus,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut a = Self::zeros(modulus, n, n);
        for i in 0..n {
            a.entries[i * n + i] = 1 % modulus.get();
        }
        a
    }

    pub fn from_rows(modulus: Modulus, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            entries.extend(r.iter().map(|&x| modulus.reduce(x)));
        }
        Ok(ResidueMatrix {
            modulus,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_reduced_rows(modulus: Modulus, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            entries.extend(r);
        }
        ResidueMatrix {
            modulus,
            rows: n,
            cols,
            entries,
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] = self.modulus.reduce(v);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<ResidueVector> {
        (0..self.rows)
            .map(|i| ResidueVector::from_reduced(self.modulus, self.row(i).to_vec()))
            .collect()
    }

    pub fn transpose(&self) -> ResidueMatrix {
        let mut t = ResidueMatrix::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &ResidueVector) -> Result<ResidueVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                x.len()
            )));
        }
        let m = self.modulus.get() as u64;
        let entries = (0..self.rows)
            .map(|i| {
                let acc = self
                    .row(i)
                    .iter()
                    .zip(x.entries())
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % m);
                acc as u32
            })
            .collect();
        Ok(ResidueVector::from_reduced(self.modulus, entries))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// A row span over `Z/m`, held in Howell normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpan {
    modulus: Modulus,
    width: usize,
    /// `(pivot column, row)` sorted by pivot column.
    rows: Vec<(usize, Vec<u32>)>,
}

impl RowSpan {
    pub fn empty(modulus: Modulus, width: usize) -> Self {
        RowSpan {
            modulus,
            width,
            rows: Vec::new(),
        }
    }

    /// Howell form of the span of `generators`; each must have length `width`
    /// and be reduced.
    pub fn from_rows(modulus: Modulus, width: usize, generators: Vec<Vec<u32>>) -> Self {
        let rows = howell_rows(modulus, width, generators);
        RowSpan {
            modulus,
            width,
            rows,
        }
    }

    pub fn from_matrix(a: &ResidueMatrix) -> Self {
        let gens = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
        Self::from_rows(a.modulus(), a.cols(), gens)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.rows.iter().map(|(j, r)| (*j, r[*j]))
    }

    pub fn to_matrix(&self) -> ResidueMatrix {
        ResidueMatrix::from_reduced_rows(
            self.modulus,
            self.width,
            self.rows.iter().map(|(_, r)| r.clone()).collect(),
        )
    }

    /// Number of elements in the span, or `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        let m = self.modulus.get() as u128;
        self.rows
            .iter()
            .try_fold(1u128, |acc, (j, r)| acc.checked_mul(m / r[*j] as u128))
    }

    /// Reduces `v` in place to the canonical representative of `v + span`.
    pub fn reduce_in_place(&self, v: &mut [u32]) {
        assert_eq!(v.len(), self.width);
        let m = self.modulus;
        for (j, row) in &self.rows {
            let d = row[*j];
            let q = v[*j] / d;
            if q != 0 {
                let c = m.neg(q % m.get());
                axpy(m, v, c, row, *j);
            }
        }
    }

    pub fn canonical(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.canonical(v).iter().all(|&x| x == 0)
    }

    /// Every element of the span, each exactly once.
    pub fn elements(&self, cap: usize) -> Result<Vec<Vec<u32>>> {
        let size = self.size().unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::guard(
                "row span enumeration",
                cap,
                size.min(usize::MAX as u128) as usize,
            ));
        }
        let m = self.modulus;
        let mut out = vec![vec![0u32; self.width]];
        for (j, row) in &self.rows {
            let order = m.get() / row[*j];
            let mut next = Vec::with_capacity(out.len() * order as usize);
            for v in &out {
                let mut w = v.clone();
                for _ in 0..order {
                    next.push(w.clone());
                    axpy(m, &mut w, 1, row, 0);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Span of `self` together with extra generators.
    pub fn extend(&self, extra: impl IntoIterator<Item = Vec<u32>>) -> RowSpan {
        let mut gens: Vec<Vec<u32>> = self.rows.iter().map(|(_, r)| r.clone()).collect();
        gens.extend(extra);
        RowSpan::from_rows(self.modulus, self.width, gens)
    }
}

/// `v[from..] += c * row[from..]`
#[inline]
fn axpy(m: Modulus, v: &mut [u32], c: u32, row: &[u32], from: usize) {
    if c == 0 {
        return;
    }
    let mm = m.get() as u64;
    let c = c as u64;
    for (x, &r) in v[from..].iter_mut().zip(&row[from..]) {
        if r != 0 {
            *x = ((*x as u64 + c * r as u64) % mm) as u32;
        }
    }
}

fn howell_rows(m: Modulus, width: usize, generators: Vec<Vec<u32>>) -> Vec<(usize, Vec<u32>)> {
    let n = m.get();
    let mut work: Vec<Vec<u32>> = generators
        .into_iter()
        .inspect(|r| assert_eq!(r.len(), width, "generator of wrong width"))
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut pivots: Vec<(usize, Vec<u32>)> = Vec::new();

    for j in 0..width {
        if work.is_empty() {
            break;
        }
        let mut pivot: Option<Vec<u32>> = None;
        let mut i = 0;
        while i < work.len() {
            if work[i][j] == 0 {
                i += 1;
                continue;
            }
            match pivot.as_mut() {
                None => {
                    pivot = Some(work.swap_remove(i));
                }
                Some(p) => {
                    eliminate(m, p, &mut work[i], j);
                    if work[i][j..].iter().all(|&x| x == 0) {
                        work.swap_remove(i);
                    } else {
                        i += 1;
                    }
                }
            }
        }
        if let Some(mut p) = pivot {
            let u = m.normalizing_unit(p[j]);
            if u != 1 {
                for x in p[j..].iter_mut() {
                    *x = m.mul(*x, u);
                }
            }
            let d = p[j];
            if d != 1 {
                let ann = n / d;
                let a: Vec<u32> = p.iter().map(|&x| m.mul(x, ann)).collect();
                if a.iter().any(|&x| x != 0) {
                    work.push(a);
                }
            }
            pivots.push((j, p));
        }
    }

    for i in 0..pivots.len() {
        let (j, d) = (pivots[i].0, pivots[i].1[pivots[i].0]);
        let (above, rest) = pivots.split_at_mut(i);
        let prow = &rest[0].1;
        for (_, r) in above.iter_mut() {
            let q = r[j] / d;
            if q != 0 {
                axpy(m, r, m.neg(q % n), prow, j);
            }
        }
    }
    pivots
}

/// Unimodular row operation on `(p, r)` leaving `r[j] = 0` and
/// `p[j] = gcd(p[j], r[j])`. Both rows vanish before column `j`.
fn eliminate(m: Modulus, p: &mut Vec<u32>, r: &mut Vec<u32>, j: usize) {
    let a = p[j];
    let b = r[j];
    if b % a == 0 {
        let q = b / a;
        axpy(m, r, m.neg(q % m.get()), p, j);
        return;
    }
    if a % b == 0 {
        std::mem::swap(p, r);
        let q = a / b;
        axpy(m, r, m.neg(q % m.get()), p, j);
        return;
    }
    let (g, s, t) = xgcd(a as i64, b as i64);
    let s = m.reduce(s) as u64;
    let t = m.reduce(t) as u64;
    let bg = m.reduce(b as i64 / g) as u64;
    let ag = m.reduce(-(a as i64 / g)) as u64;
    let mm = m.get() as u64;
    for k in j..p.len() {
        let (x, y) = (p[k] as u64, r[k] as u64);
        p[k] = ((s * x + t * y) % mm) as u32;
        r[k] = ((bg * x + ag * y) % mm) as u32;
    }
}

/// The Howell normal form of `a`, with zero rows trimmed.
pub fn howell_form(a: &ResidueMatrix) -> ResidueMatrix {
    RowSpan::from_matrix(a).to_matrix()
}

/// The full solution set of `A x = b`: `particular + span(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: ResidueVector,
    /// A generating set (not a basis) of `{x : A x = 0}`.
    pub kernel: Vec<ResidueVector>,
}

impl Solution {
    /// All solutions, each exactly once.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<ResidueVector>> {
        let m = self.particular.modulus();
        let width = self.particular.len();
        let span = RowSpan::from_rows(
            m,
            width,
            self.kernel.iter().map(|k| k.entries().to_vec()).collect(),
        );
        Ok(span
            .elements(cap)?
            .into_iter()
            .map(|k| ResidueVector::from_reduced(m, k).add(&self.particular))
            .collect())
    }
}

/// Row-reduction state for repeated solves against one coefficient matrix.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    equations: usize,
    unknowns: usize,
    span: RowSpan,
}

impl LinearSystem {
    pub fn new(a: &ResidueMatrix) -> Self {
        let m = a.modulus();
        let (eq, un) = (a.rows(), a.cols());
        let width = eq + un;
        // One row per unknown: [column of A | unit vector].
        let mut gens = Vec::with_capacity(un);
        for k in 0..un {
            let mut row = vec![0u32; width];
            for i in 0..eq {
                row[i] = a.get(i, k);
            }
            row[eq + k] = 1 % m.get();
            gens.push(row);
        }
        Self::from_columns(m, eq, un, gens)
    }

    /// Build from the augmented columns directly, avoiding a dense `A`.
    /// `columns[k]` must have length `equations + unknowns` with the unit
    /// vector already placed at `equations + k`.
    pub fn from_columns(
        m: Modulus,
        equations: usize,
        unknowns: usize,
        columns: Vec<Vec<u32>>,
    ) -> Self {
        let span = RowSpan::from_rows(m, equations + unknowns, columns);
        LinearSystem {
            equations,
            unknowns,
            span,
        }
    }

    pub fn kernel(&self) -> Vec<ResidueVector> {
        let m = self.span.modulus;
        self.span
            .rows
            .iter()
            .filter(|(j, _)| *j >= self.equations)
            .map(|(_, r)| ResidueVector::from_reduced(m, r[self.equations..].to_vec()))
            .collect()
    }

    pub fn solve(&self, b: &ResidueVector) -> Result<Option<Solution>> {
        if b.len() != self.equations {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, system has {} equations",
                b.len(),
                self.equations
            )));
        }
        let m = self.span.modulus;
        let mut v = vec![0u32; self.equations + self.unknowns];
        v[..self.equations].copy_from_slice(b.entries());
        for (j, row) in &self.span.rows {
            if *j >= self.equations {
                break;
            }
            let q = v[*j] / row[*j];
            if q != 0 {
                axpy(m, &mut v, m.neg(q % m.get()), row, *j);
            }
            if v[*j] != 0 {
                return Ok(None);
            }
        }
        if v[..self.equations].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let particular: Vec<u32> = v[self.equations..].iter().map(|&x| m.neg(x)).collect();
        Ok(Some(Solution {
            particular: ResidueVector::from_reduced(m, particular),
            kernel: self.kernel(),
        }))
    }
}

/// Solves `A x = b`; `None` when inconsistent.
pub fn solve_linear(a: &ResidueMatrix, b: &ResidueVector) -> Result<Option<Solution>> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus().get(), b.modulus().get()));
    }
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} rows, b has length {}",
            a.rows(),
            b.len()
        )));
    }
    LinearSystem::new(a).solve(b)
}

/// Whether `v` lies in the row span of `a`.
pub fn in_span(v: &ResidueVector, a: &ResidueMatrix) -> Result<bool> {
    if v.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {}, matrix has {} columns",
            v.len(),
            a.cols()
        )));
    }
    if a.modulus() != v.modulus() {
        return Err(Error::ModulusMismatch(a.modulus().get(), v.modulus().get()));
    }
    Ok(RowSpan::from_matrix(a).contains(v.entries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn md(m: u64) -> Modulus {
        Modulus::new(m).unwrap()
    }

    /// Every vector in the row span, by brute force over coefficient tuples.
    fn brute_span(a: &ResidueMatrix) -> BTreeSet<Vec<u32>> {
        let m = a.modulus();
        let mut out = BTreeSet::new();
        out.insert(vec![0; a.cols()]);
        for i in 0..a.rows() {
            let mut next = BTreeSet::new();
            for v in &out {
                for c in 0..m.get() {
                    let w: Vec<u32> = v
                        .iter()
                        .zip(a.row(i))
                        .map(|(&x, &r)| m.add(x, m.mul(c, r)))
                        .collect();
                    next.insert(w);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn modulus_rejects_small() {
        assert_eq!(Modulus::new(1), Err(Error::InvalidModulus(1)));
        assert!(Modulus::new(0).is_err());
    }

    #[test]
    fn residue_arithmetic_reduces() {
        let m = md(6);
        let a = Residue::new(-1, m);
        assert_eq!(a.value(), 5);
        assert_eq!((a + Residue::new(3, m)).value(), 2);
        assert_eq!((a * a).value(), 1);
        assert_eq!((-a).value(), 1);
    }

    #[test]
    fn normalizing_unit_hits_gcd() {
        for n in 2..40u64 {
            let m = md(n);
            for a in 1..n as u32 {
                let u = m.normalizing_unit(a);
                assert_eq!(gcd(u as u64, n), 1);
                assert_eq!(m.mul(u, a) as u64, gcd(a as u64, n));
            }
        }
    }

    #[test]
    fn howell_identity_is_fixed() {
        let i = ResidueMatrix::identity(md(4), 2);
        assert_eq!(howell_form(&i), i);
    }

    #[test]
    fn howell_single_zero_divisor_row() {
        let a = ResidueMatrix::from_rows(md(4), 1, &[vec![2]]).unwrap();
        assert_eq!(howell_form(&a), a);
    }

    #[test]
    fn howell_preserves_span_small_example() {
        let a = ResidueMatrix::from_rows(md(4), 2, &[vec![2, 1], vec![0, 2]]).unwrap();
        let h = howell_form(&a);
        assert_eq!(brute_span(&a), brute_span(&h));
        // The Howell property forces the annihilator row [0, 2] to survive.
        assert!(h.row_vectors().iter().any(|r| r.entries() == [0, 2]));
    }

    #[test]
    fn howell_property_needs_annihilator_rows() {
        // span of [2, 1] over Z/4 contains [0, 2] = 2 * [2, 1].
        let a = ResidueMatrix::from_rows(md(4), 2, &[vec![2, 1]]).unwrap();
        let span = RowSpan::from_matrix(&a);
        assert!(span.contains(&[0, 2]));
        assert!(!span.contains(&[0, 1]));
        assert_eq!(span.size(), Some(4));
    }

    #[test]
    fn solve_example_mod_6() {
        let a = ResidueMatrix::from_rows(md(6), 1, &[vec![2]]).unwrap();
        let b = ResidueVector::new(md(6), [4]);
        let sol = solve_linear(&a, &b).unwrap().unwrap();
        let all: BTreeSet<u32> = sol
            .enumerate(100)
            .unwrap()
            .into_iter()
            .map(|v| v.entries()[0])
            .collect();
        // Enumeration over x in 0..6: 2x = 4 exactly for x in {2, 5}.
        let oracle: BTreeSet<u32> = (0..6).filter(|x| (2 * x) % 6 == 4).collect();
        assert_eq!(all, oracle);
        let kspan: BTreeSet<u32> = RowSpan::from_rows(
            md(6),
            1,
            sol.kernel.iter().map(|k| k.entries().to_vec()).collect(),
        )
        .elements(10)
        .unwrap()
        .into_iter()
        .map(|v| v[0])
        .collect();
        assert_eq!(kspan, BTreeSet::from([0, 3]));
    }

    #[test]
    fn solve_zero_system() {
        let a = ResidueMatrix::zeros(md(4), 1, 1);
        let b = ResidueVector::zeros(md(4), 1);
        let sol = solve_linear(&a, &b).unwrap().unwrap();
        assert!(sol.particular.is_zero());
        assert_eq!(sol.enumerate(10).unwrap().len(), 4);
    }

    #[test]
    fn solve_inconsistent() {
        let a = ResidueMatrix::from_rows(md(4), 1, &[vec![2]]).unwrap();
        let b = ResidueVector::new(md(4), [1]);
        assert_eq!(solve_linear(&a, &b).unwrap(), None);
    }

    #[test]
    fn solve_rejects_mismatch() {
        let a = ResidueMatrix::zeros(md(4), 2, 1);
        let b = ResidueVector::zeros(md(4), 3);
        assert!(matches!(
            solve_linear(&a, &b),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(in_span(&ResidueVector::zeros(md(4), 3), &a).is_err());
    }

    #[test]
    fn in_span_examples() {
        let m = md(4);
        let a = ResidueMatrix::from_rows(m, 2, &[vec![1, 1]]).unwrap();
        assert!(in_span(&ResidueVector::zeros(m, 2), &a).unwrap());
        assert!(in_span(&ResidueVector::new(m, [2, 2]), &a).unwrap());
        let b = ResidueMatrix::from_rows(m, 2, &[vec![2, 0]]).unwrap();
        assert!(!in_span(&ResidueVector::new(m, [1, 0]), &b).unwrap());
        assert_eq!(
            brute_span(&b),
            BTreeSet::from([vec![0, 0], vec![2, 0]])
        );
    }

    fn arb_matrix() -> impl Strategy<Value = ResidueMatrix> {
        (prop::sample::select(vec![2u64, 3, 4, 6, 8]), 1usize..5, 1usize..5).prop_flat_map(
            |(m, r, c)| {
                prop::collection::vec(0i64..m as i64, r * c).prop_map(move |e| {
                    let rows: Vec<Vec<i64>> = e.chunks(c).map(|x| x.to_vec()).collect();
                    ResidueMatrix::from_rows(md(m), c, &rows).unwrap()
                })
            },
        )
    }

    proptest! {
        #[test]
        fn howell_idempotent(a in arb_matrix()) {
            let h = howell_form(&a);
            prop_assert_eq!(howell_form(&h), h);
        }

        #[test]
        fn howell_span_preserved(a in arb_matrix()) {
            let h = howell_form(&a);
            for r in a.row_vectors() {
                prop_assert!(in_span(&r, &h).unwrap());
            }
            for r in h.row_vectors() {
                prop_assert!(in_span(&r, &a).unwrap());
            }
            if a.rows() * a.cols() <= 8 {
                prop_assert_eq!(brute_span(&a), brute_span(&h));
                prop_assert_eq!(RowSpan::from_matrix(&a).size().unwrap() as usize, brute_span(&a).len());
            }
        }

        #[test]
        fn canonical_is_coset_invariant(a in arb_matrix(), seed in any::<u64>()) {
            let span = RowSpan::from_matrix(&a);
            let m = a.modulus();
            let v: Vec<u32> = (0..a.cols()).map(|i| m.reduce_u64(seed.rotate_left(i as u32 * 7) % 97)).collect();
            let c = span.canonical(&v);
            for g in a.row_vectors() {
                let w: Vec<u32> = v.iter().zip(g.entries()).map(|(&x, &y)| m.add(x, y)).collect();
                prop_assert_eq!(span.canonical(&w), c.clone());
            }
        }

        #[test]
        fn solve_sound_and_complete(a in arb_matrix(), x0 in prop::collection::vec(0i64..8, 4), shift in 0i64..8) {
            let m = a.modulus();
            let x0 = ResidueVector::new(m, x0.into_iter().take(a.cols()).chain(std::iter::repeat(0)).take(a.cols()));
            let mut b = a.mul_vec(&x0).unwrap();
            if shift % 3 == 0 {
                // Perturb to sometimes get an inconsistent system.
                b = b.add(&ResidueVector::new(m, std::iter::once(shift).chain(std::iter::repeat(0)).take(b.len())));
            }
            let sol = solve_linear(&a, &b).unwrap();
            if let Some(sol) = &sol {
                prop_assert_eq!(a.mul_vec(&sol.particular).unwrap(), b.clone());
                for k in &sol.kernel {
                    prop_assert!(a.mul_vec(k).unwrap().is_zero());
                }
            }
            if a.cols() <= 3 && m.get() <= 6 {
                // Exhaustive oracle over all candidate x.
                let mut oracle = BTreeSet::new();
                let total = (m.get() as usize).pow(a.cols() as u32);
                for idx in 0..total {
                    let mut t = idx;
                    let x: Vec<i64> = (0..a.cols()).map(|_| { let d = t % m.get() as usize; t /= m.get() as usize; d as i64 }).collect();
                    let xv = ResidueVector::new(m, x);
                    if a.mul_vec(&xv).unwrap() == b {
                        oracle.insert(xv.into_entries());
                    }
                }
                let got: BTreeSet<Vec<u32>> = match sol {
                    Some(s) => s.enumerate(10_000).unwrap().into_iter().map(|v| v.into_entries()).collect(),
                    None => BTreeSet::new(),
                };
                prop_assert_eq!(got, oracle);
            }
        }
    }
}
