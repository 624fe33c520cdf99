//! A library of small groups, addressable by name.
//!
//! Names: `1`, `Z<n>`, `D<n>` (dihedral of order `2n`), `Q<n>` (generalized
//! quaternion of order `n`, `n` divisible by 4 and at least 8), `A4`,
//! `Heis<p>` (`U_2(Z/p)`), `U<n>Z<p>` (`U_n(Z/p)`), powers `Z2^3`, and direct
//! products joined by `x`, e.g. `Z2xD4`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{close_generators, FiniteGroup, Permutation, DEFAULT_CLOSURE_CAP};
use crate::modring::Modulus;
use crate::unitri::UniTri;

pub fn trivial() -> FiniteGroup {
    FiniteGroup::from_table("1", 1, vec![0])
        .expect("trivial group")
        .with_labels(vec!["e".into()])
        .expect("one label")
}

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let table = (0..n * n).map(|x| ((x / n + x % n) % n) as u32).collect();
    FiniteGroup::from_table(format!("Z{n}"), n, table).expect("cyclic group")
}

/// Dihedral group of order `2n`; id `i + n*j` is `r^i s^j`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 2);
    let order = 2 * n;
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (i, a) = (x % n, x / n);
        for y in 0..order {
            let (k, b) = (y % n, y / n);
            let rot = if a == 0 { (i + k) % n } else { (i + n - k) % n };
            table[x * order + y] = (rot + n * ((a + b) % 2)) as u32;
        }
    }
    let labels = (0..order).map(|x| rs_label("r", "s", x % n, x / n)).collect();
    FiniteGroup::from_table(format!("D{n}"), order, table)
        .expect("dihedral group")
        .with_generators(vec![1, n as u32])
        .expect("r and s generate")
        .with_labels(labels)
        .expect("labels")
}

/// Generalized quaternion group of order `order`; id `i + k*j` is `x^i y^j`
/// with `k = order/2`, `x^k = 1`, `y^2 = x^{k/2}`, `y x y⁻¹ = x⁻¹`.
pub fn quaternion(order: usize) -> FiniteGroup {
    assert!(order >= 8 && order % 4 == 0);
    let k = order / 2;
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (i, a) = (x % k, x / k);
        for y in 0..order {
            let (j, b) = (y % k, y / k);
            let (e, c) = match (a, b) {
                (0, _) => ((i + j) % k, b),
                (1, 0) => ((i + k - j) % k, 1),
                _ => ((i + k - j + k / 2) % k, 0),
            };
            table[x * order + y] = (e + k * c) as u32;
        }
    }
    let labels = (0..order).map(|x| rs_label("x", "y", x % k, x / k)).collect();
    FiniteGroup::from_table(format!("Q{order}"), order, table)
        .expect("quaternion group")
        .with_generators(vec![1, k as u32])
        .expect("x and y generate")
        .with_labels(labels)
        .expect("labels")
}

fn rs_label(r: &str, s: &str, i: usize, j: usize) -> String {
    match (i, j) {
        (0, 0) => "e".into(),
        (0, _) => s.into(),
        (1, 0) => r.into(),
        (_, 0) => format!("{r}^{i}"),
        (1, _) => format!("{r}{s}"),
        _ => format!("{r}^{i}{s}"),
    }
}

pub fn alternating4() -> FiniteGroup {
    let gens = [
        Permutation::parse_cycles("(1 2 3)", 4).expect("cycle"),
        Permutation::parse_cycles("(1 2)(3 4)", 4).expect("cycle"),
    ];
    close_generators("A4", &gens, DEFAULT_CLOSURE_CAP)
        .expect("A4 closes")
        .0
}

/// `U_n(Z/p)` generated by the superdiagonal elementary matrices.
pub fn unitriangular(n: usize, p: u64) -> Result<FiniteGroup> {
    let m = Modulus::new(p)?;
    let gens: Vec<UniTri> = (1..=n)
        .map(|i| UniTri::elementary(n, m, i, i + 1, 1))
        .collect::<Result<_>>()?;
    Ok(close_generators(format!("U{n}Z{p}"), &gens, DEFAULT_CLOSURE_CAP)?.0)
}

fn parse_factor(name: &str) -> Result<FiniteGroup> {
    let bad = || Error::invalid(format!("unknown group name '{name}'"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if let Some((base, exp)) = name.split_once('^') {
        let e = num(exp)?;
        if e == 0 {
            return Ok(trivial());
        }
        let g = parse_factor(base)?;
        let mut acc = g.clone();
        for _ in 1..e {
            acc = acc.direct_product(&g);
        }
        return Ok(acc.with_name(name));
    }
    if name == "1" {
        return Ok(trivial());
    }
    if name == "A4" {
        return Ok(alternating4());
    }
    if let Some(p) = name.strip_prefix("Heis") {
        let p = num(p)?;
        return Ok(unitriangular(2, p as u64)?.with_name(name));
    }
    if let Some(rest) = name.strip_prefix('U') {
        if let Some((n, p)) = rest.split_once('Z') {
            let (n, p) = (num(n)?, num(p)?);
            if n == 0 || p < 2 {
                return Err(bad());
            }
            return unitriangular(n, p as u64);
        }
    }
    if let Some(n) = name.strip_prefix('Z') {
        let n = num(n)?;
        if n == 0 || n > 4096 {
            return Err(bad());
        }
        return Ok(cyclic(n));
    }
    if let Some(n) = name.strip_prefix('D') {
        let n = num(n)?;
        if n < 2 || n > 2048 {
            return Err(bad());
        }
        return Ok(dihedral(n));
    }
    if let Some(n) = name.strip_prefix('Q') {
        let n = num(n)?;
        if n < 8 || n % 4 != 0 || n > 4096 {
            return Err(bad());
        }
        return Ok(quaternion(n));
    }
    Err(bad())
}

/// Builds a group from its library name.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    let factors: Vec<&str> = name.split('x').collect();
    if factors.iter().any(|f| f.is_empty()) {
        return Err(Error::invalid(format!("unknown group name '{name}'")));
    }
    let mut acc = parse_factor(factors[0])?;
    for f in &factors[1..] {
        acc = acc.direct_product(&parse_factor(f)?);
    }
    if acc.order() > DEFAULT_CLOSURE_CAP {
        return Err(Error::guard("group order", DEFAULT_CLOSURE_CAP, acc.order()));
    }
    Ok(acc.with_name(name))
}

/// Where a group comes from: a library name, an explicit table, permutation
/// generators, or unitriangular generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Table {
        table: Vec<Vec<u32>>,
    },
    Permutations {
        degree: usize,
        permutations: Vec<String>,
    },
    Unitriangular {
        n: usize,
        p: u64,
        /// Entries `(i, j, v)` of each generator; defaults to the superdiagonal
        /// elementary matrices.
        #[serde(default)]
        generators: Option<Vec<Vec<(usize, usize, i64)>>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Named(name) => by_name(name),
            GroupSpec::Table { table } => {
                let n = table.len();
                if table.iter().any(|row| row.len() != n) {
                    return Err(Error::invalid("multiplication table is not square"));
                }
                FiniteGroup::from_table("table", n, table.concat())
            }
            GroupSpec::Permutations { degree, permutations } => {
                let gens = permutations
                    .iter()
                    .map(|s| Permutation::parse_cycles(s, *degree))
                    .collect::<Result<Vec<_>>>()?;
                if gens.is_empty() {
                    return Err(Error::invalid("no permutation generators"));
                }
                Ok(close_generators("perm", &gens, DEFAULT_CLOSURE_CAP)?.0)
            }
            GroupSpec::Unitriangular { n, p, generators } => match generators {
                None => unitriangular(*n, *p),
                Some(gens) => {
                    let m = Modulus::new(*p)?;
                    let gens = gens
                        .iter()
                        .map(|entries| {
                            UniTri::from_entries(*n, m, entries.iter().map(|&(i, j, v)| ((i, j), v)))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if gens.is_empty() {
                        return Err(Error::invalid("no unitriangular generators"));
                    }
                    Ok(close_generators(format!("U{n}Z{p}-sub"), &gens, DEFAULT_CLOSURE_CAP)?.0)
                }
            },
        }
    }
}

/// Names of the library groups of order at most 16.
pub const SMALL_LIBRARY: &[&str] = &[
    "1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z13", "Z14", "Z15",
    "Z16", "Z2^2", "Z2^3", "Z2^4", "Z3^2", "Z2xZ4", "Z2xZ6", "Z2xZ8", "Z4xZ4", "Z2^2xZ4", "D3",
    "D4", "D5", "D6", "D7", "D8", "Q8", "Q12", "Q16", "A4", "Z2xD4", "Z2xQ8",
];

/// Larger groups used by performance and pipeline tests.
pub const LARGE_LIBRARY: &[&str] = &["Heis3", "U3Z2", "Z4^3", "Z2^6", "D16xZ2xZ2"];

pub fn small_library() -> Vec<FiniteGroup> {
    SMALL_LIBRARY
        .iter()
        .map(|n| by_name(n).expect("library names parse"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_library_orders() {
        let lib = small_library();
        assert!(lib.iter().all(|g| g.order() <= 16));
        let orders: Vec<usize> = lib.iter().map(|g| g.order()).collect();
        assert_eq!(orders[..4], [1, 2, 3, 4]);
        assert_eq!(by_name("Q8").unwrap().order(), 8);
        assert_eq!(by_name("A4").unwrap().order(), 12);
    }

    #[test]
    fn large_library_orders() {
        assert_eq!(by_name("Heis3").unwrap().order(), 27);
        assert_eq!(by_name("U3Z2").unwrap().order(), 64);
        assert_eq!(by_name("Z4^3").unwrap().order(), 64);
        assert_eq!(by_name("D16xZ2xZ2").unwrap().order(), 128);
    }

    #[test]
    fn quaternion_structure() {
        let q = quaternion(8);
        assert!(!q.is_abelian());
        // Q8 has a unique element of order 2.
        let involutions = q.elements().filter(|&g| q.element_order(g) == 2).count();
        assert_eq!(involutions, 1);
        let q16 = quaternion(16);
        assert_eq!(q16.elements().filter(|&g| q16.element_order(g) == 2).count(), 1);
    }

    #[test]
    fn dihedral_structure() {
        let d4 = dihedral(4);
        let involutions = d4.elements().filter(|&g| d4.element_order(g) == 2).count();
        assert_eq!(involutions, 5);
        assert_eq!(d4.label(5), "rs");
    }

    #[test]
    fn group_spec_sources() {
        let named: GroupSpec = serde_json::from_str("\"D4\"").unwrap();
        assert_eq!(named.build().unwrap().order(), 8);
        let table: GroupSpec = serde_json::from_str(r#"{"table": [[0, 1], [1, 0]]}"#).unwrap();
        assert_eq!(table.build().unwrap().order(), 2);
        let perm: GroupSpec = serde_json::from_str(r#"{"degree": 4, "permutations": ["(1 2 3)", "(1 2)(3 4)"]}"#).unwrap();
        assert_eq!(perm.build().unwrap().order(), 12);
        let uni: GroupSpec = serde_json::from_str(r#"{"n": 2, "p": 3}"#).unwrap();
        assert_eq!(uni.build().unwrap().order(), 27);
        let sub: GroupSpec = serde_json::from_str(r#"{"n": 2, "p": 2, "generators": [[[1, 2, 1]], [[2, 3, 1]]]}"#).unwrap();
        assert_eq!(sub.build().unwrap().order(), 8);
        let bad: GroupSpec = serde_json::from_str(r#"{"table": [[0, 1], [0, 1]]}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn unknown_names_rejected() {
        for n in ["Z0", "D1", "Q6", "foo", "Z2x", "Z4096x Z2"] {
            assert!(by_name(n).is_err(), "{n}");
        }
    }
}
