//! Finite groups given by multiplication tables, their subgroups and
//! `Z/m`-valued characters.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::Modulus;
use crate::unitri::UniTri;

pub const DEFAULT_CLOSURE_CAP: usize = 4096;

/// A finite group on the ids `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    generators: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates `table` (row-major, `table[a*n+b] = a*b`) as a group law.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("group must have at least one element"));
        }
        if table.len() != order * order {
            return Err(Error::invalid(format!(
                "multiplication table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&x) = table.iter().find(|&&x| x as usize >= order) {
            return Err(Error::invalid(format!("table entry {x} out of range")));
        }
        // Every row and column must be a permutation (Latin square).
        let mut seen = vec![0usize; order];
        for a in 0..order {
            for b in 0..order {
                let x = table[a * order + b] as usize;
                if seen[x] == 2 * a + 1 {
                    return Err(Error::invalid(format!(
                        "row {a} repeats {x}: left multiplication is not injective"
                    )));
                }
                seen[x] = 2 * a + 1;
            }
        }
        for b in 0..order {
            for a in 0..order {
                let x = table[a * order + b] as usize;
                if seen[x] == 2 * b + 2 {
                    return Err(Error::invalid(format!(
                        "column {b} repeats {x}: right multiplication is not injective"
                    )));
                }
                seen[x] = 2 * b + 2;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] as usize == a && table[a * order + e] as usize == a))
            .ok_or_else(|| Error::invalid("table has no identity element"))? as u32;
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| table[a * order + b] == identity)
                .expect("Latin square row contains identity");
            inverse[a] = b as u32;
        }
        let mut g = FiniteGroup {
            name: name.into(),
            order,
            table,
            inverse,
            identity,
            generators: Vec::new(),
            labels: None,
        };
        g.generators = g.greedy_generators();
        // Light's test: associativity over a generating set suffices once the
        // table is a Latin square with identity.
        for &s in &g.generators {
            for a in 0..order as u32 {
                let as_ = g.mul(a, s);
                for b in 0..order as u32 {
                    if g.mul(as_, b) != g.mul(a, g.mul(s, b)) {
                        return Err(Error::invalid(format!(
                            "table is not associative at ({a}, {s}, {b})"
                        )));
                    }
                }
            }
        }
        for a in 0..order as u32 {
            if g.mul(g.inverse[a as usize], a) != identity {
                return Err(Error::invalid(format!("element {a} has no two-sided inverse")));
            }
        }
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[self.identity as usize] = true;
        let mut members = vec![self.identity];
        for g in 0..self.order as u32 {
            if inside[g as usize] {
                continue;
            }
            gens.push(g);
            members = self.closure_from(&members, &gens);
            inside.iter_mut().for_each(|x| *x = false);
            for &x in &members {
                inside[x as usize] = true;
            }
        }
        gens
    }

    /// Closure of `start ∪ gens` (start must be closed or empty).
    fn closure_from(&self, start: &[u32], gens: &[u32]) -> Vec<u32> {
        let mut inside = vec![false; self.order];
        let mut out = Vec::new();
        let mut queue = vec![self.identity];
        inside[self.identity as usize] = true;
        for &x in start.iter().chain(gens) {
            if !inside[x as usize] {
                inside[x as usize] = true;
                queue.push(x);
            }
        }
        while let Some(x) = queue.pop() {
            out.push(x);
            for &s in start.iter().chain(gens) {
                let y = self.mul(x, s);
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    queue.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn with_generators(mut self, gens: Vec<u32>) -> Result<Self> {
        if gens.iter().any(|&g| g as usize >= self.order) {
            return Err(Error::invalid("generator id out of range"));
        }
        if self.closure_from(&[], &gens).len() != self.order {
            return Err(Error::invalid("supplied generators do not generate the group"));
        }
        self.generators = gens;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::invalid("label count differs from group order"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: u32) -> String {
        match &self.labels {
            Some(l) => l[g as usize].clone(),
            None => g.to_string(),
        }
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `g h g⁻¹`
    #[inline]
    pub fn conj(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, g: u32, k: u64) -> u32 {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: u32) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|g| self.element_order(g))
            .fold(1, |acc, k| acc / crate::modring::gcd(acc as u64, k as u64) as usize * k)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self, (0..self.order as u32).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self, vec![self.identity])
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &[u32]) -> Subgroup {
        Subgroup::from_sorted(self, self.closure_from(&[], gens))
    }

    /// Direct product with ids `(a, b) ↦ a * |H| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, k) = (self.order, other.order);
        let mut table = vec![0u32; n * k * n * k];
        for a in 0..n {
            for b in 0..k {
                for c in 0..n {
                    for d in 0..k {
                        let x = a * k + b;
                        let y = c * k + d;
                        table[x * n * k + y] =
                            (self.mul(a as u32, c as u32) as usize * k + other.mul(b as u32, d as u32) as usize) as u32;
                    }
                }
            }
        }
        let name = format!("{}x{}", self.name, other.name);
        let g = FiniteGroup::from_table(name, n * k, table).expect("product of groups is a group");
        let labels = (0..n * k)
            .map(|x| format!("({},{})", self.label((x / k) as u32), other.label((x % k) as u32)))
            .collect();
        g.with_labels(labels).expect("label count matches")
    }
}

/// Elements that can be multiplied and compared, for generator closure.
pub trait GroupElement: Clone + Eq + Hash {
    fn op(&self, other: &Self) -> Self;
    fn identity_like(&self) -> Self;
    fn render(&self) -> String;
}

impl GroupElement for UniTri {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn identity_like(&self) -> Self {
        UniTri::identity(self.n(), self.modulus())
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// A permutation of `{1..degree}` in image form, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x as usize >= images.len() || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::invalid("image list is not a permutation"));
            }
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation over points `1..=degree`, e.g. `(1 2 3)(4 5)`.
    /// Commas may separate points.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Permutation(images));
        }
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::invalid(format!("expected '(' in cycle notation: {s}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::invalid(format!("unclosed cycle in {s}")))?;
            let points: Vec<u32> = open[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .ok()
                        .filter(|&p| p >= 1 && p as usize <= degree)
                        .map(|p| p - 1)
                        .ok_or_else(|| Error::invalid(format!("bad point '{t}' in {s}")))
                })
                .collect::<Result<_>>()?;
            let mut uniq = points.clone();
            uniq.sort_unstable();
            uniq.dedup();
            if uniq.len() != points.len() {
                return Err(Error::invalid(format!("repeated point in cycle of {s}")));
            }
            // Cycles compose right to left, as functions.
            let mut cycle = vec![0u32; degree];
            for (i, c) in cycle.iter_mut().enumerate() {
                *c = i as u32;
            }
            for (k, &p) in points.iter().enumerate() {
                cycle[p as usize] = points[(k + 1) % points.len()];
            }
            images = images.iter().map(|&x| cycle[x as usize]).collect();
            rest = open[close + 1..].trim_start();
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }
}

impl GroupElement for Permutation {
    /// `(p.op(q))(x) = p(q(x))`.
    fn op(&self, other: &Self) -> Self {
        assert_eq!(self.0.len(), other.0.len(), "permutations of different degree");
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    fn identity_like(&self) -> Self {
        Permutation((0..self.0.len() as u32).collect())
    }

    fn render(&self) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push((x + 1).to_string());
                x = self.0[x] as usize;
            }
            out.push_str(&format!("({})", cyc.join(" ")));
        }
        if out.is_empty() {
            "()".into()
        } else {
            out
        }
    }
}

/// Breadth-first closure of `gens`; ids follow discovery order with the
/// identity first. Returns the group and the element behind every id.
pub fn close_generators<E: GroupElement>(
    name: impl Into<String>,
    gens: &[E],
    cap: usize,
) -> Result<(FiniteGroup, Vec<E>)> {
    let first = gens
        .first()
        .ok_or_else(|| Error::invalid("closure needs at least one generator"))?;
    let id = first.identity_like();
    let mut elems = vec![id.clone()];
    let mut index: HashMap<E, u32> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        head += 1;
        for s in gens {
            let y = x.op(s);
            if !index.contains_key(&y) {
                if elems.len() >= cap {
                    return Err(Error::guard("group closure", cap, elems.len() + 1));
                }
                index.insert(y.clone(), elems.len() as u32);
                elems.push(y);
            }
        }
    }
    let n = elems.len();
    let mut table = vec![0u32; n * n];
    for (a, x) in elems.iter().enumerate() {
        for (b, y) in elems.iter().enumerate() {
            table[a * n + b] = *index
                .get(&x.op(y))
                .ok_or_else(|| Error::invalid("generators are not invertible: product escapes closure"))?;
        }
    }
    let gen_ids: Vec<u32> = gens.iter().map(|g| index[g]).collect();
    let labels = elems.iter().map(|e| e.render()).collect();
    let g = FiniteGroup::from_table(name, n, table)?
        .with_generators(gen_ids)?
        .with_labels(labels)?;
    Ok((g, elems))
}

/// A subgroup of a parent group, identified by its sorted member ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<u32>,
    normal: bool,
}

impl Subgroup {
    fn from_sorted(g: &FiniteGroup, members: Vec<u32>) -> Self {
        let mut s = Subgroup {
            members,
            normal: false,
        };
        s.normal = s.check_normal(g);
        s
    }

    /// Validates closure, identity and inverses.
    pub fn from_members(g: &FiniteGroup, ids: &[u32]) -> Result<Self> {
        let mut members = ids.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&x| x as usize >= g.order()) {
            return Err(Error::invalid("subgroup member id out of range"));
        }
        let mut inside = vec![false; g.order()];
        for &x in &members {
            inside[x as usize] = true;
        }
        if !inside[g.identity() as usize] {
            return Err(Error::invalid("subgroup does not contain the identity"));
        }
        for &a in &members {
            if !inside[g.inv(a) as usize] {
                return Err(Error::invalid(format!("subgroup not closed under inverse at {a}")));
            }
            for &b in &members {
                if !inside[g.mul(a, b) as usize] {
                    return Err(Error::invalid(format!(
                        "subgroup not closed under multiplication at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Self::from_sorted(g, members))
    }

    fn check_normal(&self, g: &FiniteGroup) -> bool {
        let inside = self.indicator(g);
        g.generators()
            .iter()
            .all(|&s| self.members.iter().all(|&h| inside[g.conj(s, h) as usize]))
    }

    pub fn indicator(&self, g: &FiniteGroup) -> Vec<bool> {
        let mut v = vec![false; g.order()];
        for &x in &self.members {
            v[x as usize] = true;
        }
        v
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index_in(&self, g: &FiniteGroup) -> usize {
        g.order() / self.order()
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// Position of `x` in the sorted member list: its id in `as_group`.
    pub fn local(&self, x: u32) -> Option<u32> {
        self.members.binary_search(&x).ok().map(|i| i as u32)
    }

    pub fn global(&self, i: u32) -> u32 {
        self.members[i as usize]
    }

    /// The subgroup as a group in its own right; id `i` is `members[i]`.
    pub fn as_group(&self, g: &FiniteGroup) -> FiniteGroup {
        let k = self.order();
        let mut table = vec![0u32; k * k];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                table[i * k + j] = self.local(g.mul(a, b)).expect("subgroup closed");
            }
        }
        let name = format!("{}<{}>", g.name(), k);
        let sub = FiniteGroup::from_table(name, k, table).expect("subgroup of a group is a group");
        let labels = self.members.iter().map(|&x| g.label(x)).collect();
        sub.with_labels(labels).expect("label count matches")
    }

    pub fn intersect(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Subgroup::from_sorted(g, members)
    }

    /// The subgroup generated by both.
    pub fn join(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let gens: Vec<u32> = self.members.iter().chain(&other.members).copied().collect();
        g.subgroup_generated(&gens)
    }

    /// Smallest subgroup containing `self` and `sigma`.
    pub fn generated_with(&self, g: &FiniteGroup, sigma: u32) -> Subgroup {
        let mut gens = self.members.clone();
        gens.push(sigma);
        g.subgroup_generated(&gens)
    }

    /// A left transversal `{r_i}` with `r_0 = 1`, chosen by least id.
    pub fn left_transversal(&self, g: &FiniteGroup) -> Vec<u32> {
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        for r in std::iter::once(g.identity()).chain(g.elements()) {
            if covered[r as usize] {
                continue;
            }
            reps.push(r);
            for &h in &self.members {
                covered[g.mul(r, h) as usize] = true;
            }
        }
        reps
    }

    /// For `M ≤ M'`, representatives of `M'/M` (left cosets) lying in `M'`.
    pub fn coset_reps_in(&self, g: &FiniteGroup, bigger: &Subgroup) -> Vec<u32> {
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        for &r in std::iter::once(&g.identity()).chain(bigger.members()) {
            if covered[r as usize] {
                continue;
            }
            reps.push(r);
            for &h in &self.members {
                covered[g.mul(r, h) as usize] = true;
            }
        }
        reps
    }
}

/// A homomorphism to `Z/m`, stored by its values on every element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub modulus: Modulus,
    pub values: Vec<u32>,
}

impl Character {
    pub fn zero(g: &FiniteGroup, modulus: Modulus) -> Self {
        Character {
            modulus,
            values: vec![0; g.order()],
        }
    }

    /// Validates the homomorphism property on all pairs.
    pub fn new(g: &FiniteGroup, modulus: Modulus, values: Vec<u32>) -> Result<Self> {
        if values.len() != g.order() {
            return Err(Error::invalid(format!(
                "character has {} values for a group of order {}",
                values.len(),
                g.order()
            )));
        }
        let values: Vec<u32> = values.into_iter().map(|v| v % modulus.get()).collect();
        let chi = Character { modulus, values };
        if let Some((a, b)) = chi.violation(g) {
            return Err(Error::invalid(format!(
                "not a homomorphism: χ({}·{}) ≠ χ({}) + χ({})",
                g.label(a),
                g.label(b),
                g.label(a),
                g.label(b)
            )));
        }
        Ok(chi)
    }

    /// Extends generator images to the whole group, if consistent.
    pub fn from_generator_images(g: &FiniteGroup, modulus: Modulus, images: &[i64]) -> Result<Self> {
        if images.len() != g.generators().len() {
            return Err(Error::invalid(format!(
                "{} generator images given, group has {} generators",
                images.len(),
                g.generators().len()
            )));
        }
        let mut values: Vec<Option<u32>> = vec![None; g.order()];
        values[g.identity() as usize] = Some(0);
        let mut queue = vec![g.identity()];
        while let Some(x) = queue.pop() {
            for (&s, &v) in g.generators().iter().zip(images) {
                let y = g.mul(x, s);
                let val = modulus.add(values[x as usize].expect("visited"), modulus.reduce(v));
                match values[y as usize] {
                    None => {
                        values[y as usize] = Some(val);
                        queue.push(y);
                    }
                    Some(old) if old != val => {
                        return Err(Error::invalid(format!(
                            "generator images do not define a homomorphism (conflict at {})",
                            g.label(y)
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let values = values.into_iter().map(|v| v.expect("generators generate")).collect();
        Character::new(g, modulus, values)
    }

    /// First pair `(a, b)` with `χ(ab) ≠ χ(a) + χ(b)`.
    pub fn violation(&self, g: &FiniteGroup) -> Option<(u32, u32)> {
        let m = self.modulus;
        for a in g.elements() {
            for b in g.elements() {
                if self.values[g.mul(a, b) as usize] != m.add(self.values[a as usize], self.values[b as usize]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    #[inline]
    pub fn at(&self, g: u32) -> u32 {
        self.values[g as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Character) -> Character {
        let m = self.modulus;
        Character {
            modulus: m,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| m.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Character {
        let m = self.modulus;
        let c = m.reduce(c);
        Character {
            modulus: m,
            values: self.values.iter().map(|&a| m.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self) -> Character {
        self.scale(-1)
    }

    /// Values on generators.
    pub fn generator_images(&self, g: &FiniteGroup) -> Vec<u32> {
        g.generators().iter().map(|&s| self.at(s)).collect()
    }

    /// Restriction to a subgroup, as a character of `sub.as_group(g)`.
    pub fn restrict(&self, sub: &Subgroup) -> Character {
        Character {
            modulus: self.modulus,
            values: sub.members().iter().map(|&x| self.values[x as usize]).collect(),
        }
    }

    /// Image size, i.e. the order of the character in `Hom(G, Z/m)`'s image.
    pub fn image_order(&self) -> usize {
        let mut img: Vec<u32> = self.values.clone();
        img.sort_unstable();
        img.dedup();
        img.len()
    }
}

pub fn kernel_of(g: &FiniteGroup, chi: &Character) -> Subgroup {
    let members = g.elements().filter(|&x| chi.at(x) == 0).collect();
    Subgroup::from_sorted(g, members)
}

/// Writes `g = h σ^i` with `h ∈ M₁`, `0 <= i < m`.
pub fn sigma_decompose(
    g: &FiniteGroup,
    m1: &Subgroup,
    sigma: u32,
    m: Modulus,
    x: u32,
) -> Result<(u32, u32)> {
    check_sigma_generates(g, m1, sigma, m)?;
    let mut p = g.identity();
    for i in 0..m.get() {
        // x = h σ^i  ⇔  h = x σ^{-i}
        let h = g.mul(x, g.inv(p));
        if m1.contains(h) {
            return Ok((h, i));
        }
        p = g.mul(p, sigma);
    }
    Err(Error::inconsistency("coset decomposition failed after validation"))
}

pub fn check_sigma_generates(g: &FiniteGroup, m1: &Subgroup, sigma: u32, m: Modulus) -> Result<()> {
    let fail = || Error::invalid("σ₁ does not generate G/M₁ of order m");
    if !m1.is_normal() || m1.index_in(g) != m.get() as usize {
        return Err(fail());
    }
    let mut p = sigma;
    for _ in 1..m.get() {
        if m1.contains(p) {
            return Err(fail());
        }
        p = g.mul(p, sigma);
    }
    if !m1.contains(p) {
        return Err(fail());
    }
    Ok(())
}

/// `G/M₁ ≅ G/M₃ ≅ Z/m` and `G/(M₁∩M₃) → G/M₁ × G/M₃` bijective.
pub fn is_m_independent(g: &FiniteGroup, m1: &Subgroup, m3: &Subgroup, m: Modulus) -> Result<bool> {
    if !m1.is_normal() || !m3.is_normal() {
        return Err(Error::invalid("m-independence needs normal subgroups"));
    }
    let mm = m.get() as usize;
    let cyclic_quotient = |s: &Subgroup| {
        s.index_in(g) == mm
            && g.elements().any(|x| {
                // x generates G/S iff x^k ∉ S for 0 < k < m.
                let mut p = x;
                (1..mm).all(|_| {
                    let ok = !s.contains(p);
                    p = g.mul(p, x);
                    ok
                })
            })
    };
    if !cyclic_quotient(m1) || !cyclic_quotient(m3) {
        return Ok(false);
    }
    // The joint map is injective on G/(M₁∩M₃); bijective iff the index is m².
    let m13 = m1.intersect(g, m3);
    Ok(m13.index_in(g) == mm * mm)
}
