//! Checkers for KF1–KF4, surjectivity and equivariance of `κ`.

use serde::{Deserialize, Serialize};

use super::{combine_chars, cor_local, res_local, Formation};
use crate::cohom::{conj_act, cor1, cup_chars, Cochain2, Cohomology};
use crate::error::{Error, Result};
use crate::groups::{kernel_of, Character, FiniteGroup, Subgroup};
use crate::modring::{Modulus, RowSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomOptions {
    /// Largest `|M|` for which the `H²` half of KF1 is checked.
    pub h2_max_order: usize,
    /// Cap on `|Hom(M, Z/m)|` enumerated for KF1.
    pub char_cap: usize,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            h2_max_order: 16,
            char_cap: 1 << 12,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Member list of the violating `M`.
    pub subgroup: Vec<u32>,
    /// Member list of `M′` for pair axioms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub supergroup: Option<Vec<u32>>,
    /// A character (values on the members of `M`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<Vec<u32>>,
    /// An element of `A`, a character or a cochain, per `detail`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<u32>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub holds: bool,
    /// Number of instances checked.
    pub checked: usize,
    pub witness: Option<Witness>,
    /// Instances not checked (guards).
    pub skipped: Vec<String>,
}

impl AxiomVerdict {
    fn new() -> Self {
        AxiomVerdict {
            holds: true,
            checked: 0,
            witness: None,
            skipped: Vec::new(),
        }
    }

    fn fail(&mut self, w: Witness) {
        if self.holds {
            self.holds = false;
            self.witness = Some(w);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub kf1: AxiomVerdict,
    pub kf2: AxiomVerdict,
    pub kf3: AxiomVerdict,
    pub kf4: AxiomVerdict,
    pub epimorphism: AxiomVerdict,
    pub equivariance: AxiomVerdict,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.kf1.holds && self.kf2.holds && self.kf3.holds && self.kf4.holds && self.epimorphism.holds && self.equivariance.holds
    }

    /// Names of the failing conditions.
    pub fn failing(&self) -> Vec<&'static str> {
        [
            ("KF1", &self.kf1),
            ("KF2", &self.kf2),
            ("KF3", &self.kf3),
            ("KF4", &self.kf4),
            ("epimorphism", &self.epimorphism),
            ("equivariance", &self.equivariance),
        ]
        .into_iter()
        .filter(|(_, v)| !v.holds)
        .map(|(n, _)| n)
        .collect()
    }
}

/// Outcome of KF1 for one `(M, χ)`; `None` parts were not checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kf1Instance {
    /// Exactness at `H¹(M)`; on failure, the offending character.
    pub h1: std::result::Result<(), (String, Vec<u32>)>,
    /// Exactness at `H²(M)`; on failure, the offending cocycle.
    pub h2: Option<std::result::Result<(), (String, Vec<u32>)>>,
}

impl Kf1Instance {
    pub fn holds(&self) -> bool {
        self.h1.is_ok() && self.h2.as_ref().is_none_or(|r| r.is_ok())
    }
}

fn span_of(m: Modulus, width: usize, rows: impl IntoIterator<Item = Vec<u32>>) -> RowSpan {
    RowSpan::from_rows(m, width, rows.into_iter().collect())
}

/// KF1 for the group `mg` (with cohomology `cm`) and `χ ∈ Hom(mg, Z/m)`.
/// `cocycles` are generators of `Z²(mg)`, needed for the `H²` half.
pub fn kf1_instance(cm: &Cohomology, chi: &Character, cocycles: Option<&[Cochain2]>) -> Result<Kf1Instance> {
    let mg = cm.group();
    let m = cm.modulus();
    let n = mg.order();
    let k = kernel_of(mg, chi);
    let kg = k.as_group(mg);
    let ck = Cohomology::new(&kg, m);
    let homs = cm.hom_generators();

    // H¹: Cor(H¹(Ker χ)) = Ker(∪χ).
    let image = span_of(m, n, ck.hom_generators().iter().map(|h| cor1(mg, &k, h).values));
    let cups: Vec<Cochain2> = homs.iter().map(|h| cup_chars(h, chi)).collect();
    let kernel: Vec<Vec<u32>> = cm
        .coboundary_relations(&cups)
        .iter()
        .map(|c| combine_chars(m, &homs, c, n))
        .collect();
    let mut h1 = Ok(());
    if let Some(v) = kernel.iter().find(|v| !image.contains(v)) {
        h1 = Err(("ψ∪χ = 0 but ψ is not a corestriction from Ker χ".to_string(), v.clone()));
    } else {
        let kspan = span_of(m, n, kernel.clone());
        if let Some(v) = image.rows().find(|v| !kspan.contains(v)) {
            h1 = Err(("a corestriction from Ker χ has nonzero cup product with χ".to_string(), v.to_vec()));
        }
    }

    // H²: (H¹ ∪ χ) = Ker(Res to Ker χ).
    let h2 = match cocycles {
        None => None,
        Some(zs) => {
            let image = cm.boundaries().extend(cups.iter().map(|z| z.values.clone()));
            let restricted: Vec<Cochain2> = zs.iter().map(|z| z.restrict(&k)).collect();
            let mut out = Ok(());
            for c in ck.coboundary_relations(&restricted) {
                let z = zs
                    .iter()
                    .zip(&c)
                    .fold(Cochain2::zero(n, m), |acc, (z, &a)| acc.add(&z.scale(a as i64)));
                if !image.contains(&z.values) {
                    out = Err((
                        "a class restricting to 0 on Ker χ is not of the form ψ∪χ".to_string(),
                        z.values,
                    ));
                    break;
                }
            }
            if out.is_ok() {
                for z in &cups {
                    if ck.coboundary_witness(&z.restrict(&k))?.is_none() {
                        out = Err(("ψ∪χ does not restrict to 0 on Ker χ".to_string(), z.values.clone()));
                        break;
                    }
                }
            }
            Some(out)
        }
    };
    Ok(Kf1Instance { h1, h2 })
}

fn is_cyclic_quotient(g: &FiniteGroup, small: &Subgroup, big: &Subgroup, m: usize) -> bool {
    big.order() == small.order() * m
        && big.members().iter().any(|&x| {
            let mut p = x;
            (1..m).all(|_| {
                let ok = !small.contains(p);
                p = g.mul(p, x);
                ok
            })
        })
}

fn kf1(f: &Formation, opts: &AxiomOptions) -> Result<AxiomVerdict> {
    let g = f.group();
    let m = f.modulus();
    let mut v = AxiomVerdict::new();
    for s in f.lattice() {
        let mg = s.as_group(g);
        let cm = Cohomology::new(&mg, m);
        let chars = match cm.h1_enumerate(opts.char_cap) {
            Ok(c) => c,
            Err(Error::GuardExceeded { .. }) => {
                v.skipped.push(format!("KF1 at M of order {}: Hom(M, Z/m) too large", s.order()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let cocycles = if s.order() <= opts.h2_max_order {
            Some(cm.cocycle_generators())
        } else {
            v.skipped.push(format!(
                "KF1 at H²(M) for M of order {} (guard {})",
                s.order(),
                opts.h2_max_order
            ));
            None
        };
        for chi in &chars {
            let inst = kf1_instance(&cm, chi, cocycles.as_deref())?;
            v.checked += 1;
            let failure = inst.h1.err().or(inst.h2.and_then(|r| r.err()));
            if let Some((detail, elem)) = failure {
                v.fail(Witness {
                    subgroup: s.members().to_vec(),
                    supergroup: None,
                    character: Some(chi.values.clone()),
                    element: Some(elem),
                    detail,
                });
            }
        }
    }
    Ok(v)
}

fn kf2(f: &Formation) -> AxiomVerdict {
    let a = f.module();
    let m = f.modulus();
    let mut v = AxiomVerdict::new();
    for (i, s) in f.lattice().iter().enumerate() {
        v.checked += 1;
        let ker = f.kappa_kernel(i);
        let mam = a.multiple(&a.fixed_submodule(s), m.get() as i64);
        let w = |e: &Vec<u32>, detail: &str| Witness {
            subgroup: s.members().to_vec(),
            element: Some(e.clone()),
            detail: detail.to_string(),
            ..Witness::default()
        };
        if let Some(e) = ker.generators().iter().find(|e| !a.contains(&mam, e)) {
            v.fail(w(e, "element of Ker κ_M outside mA^M"));
        } else if let Some(e) = mam.generators().iter().find(|e| !a.contains(&ker, e)) {
            v.fail(w(e, "element of mA^M outside Ker κ_M"));
        }
    }
    v
}

fn kf3(f: &Formation) -> Result<AxiomVerdict> {
    let g = f.group();
    let a = f.module();
    let mut v = AxiomVerdict::new();
    let lat = f.lattice();
    for (i, s) in lat.iter().enumerate() {
        for (j, big) in lat.iter().enumerate() {
            if i == j || !s.is_subgroup_of(big) {
                continue;
            }
            v.checked += 1;
            let w = |e: &[u32], detail: &str| Witness {
                subgroup: s.members().to_vec(),
                supergroup: Some(big.members().to_vec()),
                character: None,
                element: Some(e.to_vec()),
                detail: detail.to_string(),
            };
            for e in a.fixed_submodule(big).generators() {
                if f.kappa(i, e) != res_local(s, big, &f.kappa(j, e)) {
                    v.fail(w(e, "κ_M(a) ≠ Res_M κ_M′(a) for a ∈ A^M′"));
                }
            }
            for e in a.fixed_submodule(s).generators() {
                let lhs = f.kappa(j, &a.norm(s, big, e)?);
                if lhs != cor_local(g, s, big, &f.kappa(i, e))? {
                    v.fail(w(e, "κ_M′(N_{M′/M} a) ≠ Cor_M′ κ_M(a)"));
                }
            }
        }
    }
    Ok(v)
}

fn kf4(f: &Formation) -> Result<AxiomVerdict> {
    let g = f.group();
    let a = f.module();
    let m = f.modulus().get() as usize;
    let mut v = AxiomVerdict::new();
    for s in f.lattice() {
        for big in f.lattice() {
            if !s.is_subgroup_of(big) || !is_cyclic_quotient(g, s, big, m) {
                continue;
            }
            v.checked += 1;
            let h = a.h_hat_minus1(s, big)?;
            if !h.is_trivial() {
                let e = h
                    .norm_kernel
                    .generators()
                    .iter()
                    .find(|e| !a.contains(&h.augmentation, e))
                    .cloned();
                v.fail(Witness {
                    subgroup: s.members().to_vec(),
                    supergroup: Some(big.members().to_vec()),
                    character: None,
                    element: e,
                    detail: format!("Ĥ⁻¹(M′/M, A^M) has order {}", h.order),
                });
            }
        }
    }
    Ok(v)
}

fn epimorphism(f: &Formation) -> AxiomVerdict {
    let g = f.group();
    let mut v = AxiomVerdict::new();
    for (i, s) in f.lattice().iter().enumerate() {
        v.checked += 1;
        let image = f.kappa_image(i);
        let cm = Cohomology::new(&s.as_group(g), f.modulus());
        if let Some(h) = cm.hom_generators().iter().find(|h| !image.contains(&h.values)) {
            v.fail(Witness {
                subgroup: s.members().to_vec(),
                character: Some(h.values.clone()),
                detail: "character of M outside κ_M(A^M)".to_string(),
                ..Witness::default()
            });
        }
    }
    v
}

/// `κ_M(g·a) = g·κ_M(a)` with `(g·ω)(h) = ω(g h g⁻¹)`.
fn equivariance(f: &Formation) -> Result<AxiomVerdict> {
    let g = f.group();
    let a = f.module();
    let mut v = AxiomVerdict::new();
    for (i, s) in f.lattice().iter().enumerate() {
        let fixed = a.fixed_submodule(s);
        for &x in g.generators() {
            v.checked += 1;
            for e in fixed.generators() {
                let lhs = f.kappa(i, &a.act(x, e));
                let rhs = conj_act(g, s, x, &f.kappa(i, e))?;
                if lhs != rhs {
                    v.fail(Witness {
                        subgroup: s.members().to_vec(),
                        element: Some(e.clone()),
                        detail: format!("κ_M({}·a) ≠ {}·κ_M(a)", g.label(x), g.label(x)),
                        ..Witness::default()
                    });
                }
            }
        }
    }
    Ok(v)
}

pub fn check_axioms(f: &Formation, opts: &AxiomOptions) -> Result<AxiomReport> {
    Ok(AxiomReport {
        kf1: kf1(f, opts)?,
        kf2: kf2(f),
        kf3: kf3(f)?,
        kf4: kf4(f)?,
        epimorphism: epimorphism(f),
        equivariance: equivariance(f)?,
    })
}
