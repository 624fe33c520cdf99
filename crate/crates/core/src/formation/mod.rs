//! Finite models of `m`-Kummer formations over an explicit lattice of normal
//! subgroups, the axiom checker and the lifting pipeline.

mod axioms;
mod gmodule;
mod pipeline;

pub use axioms::{check_axioms, kf1_instance, AxiomOptions, AxiomReport, AxiomVerdict, Kf1Instance, Witness};
pub use gmodule::{GModule, GModuleSpec, HHatMinus1, Submodule};
pub use pipeline::{
    find_lambda24, find_omega, key_step_t, main_pipeline, pipeline_input, planted_formation, KeyStep, Lambda24,
    OmegaStep, PipelineOptions, PipelineOutcome, PipelineReport, StepLog,
};

use serde::{Deserialize, Serialize};

use crate::cohom::cor1;
use crate::error::{Error, Result};
use crate::fixtures::GroupSpec;
use crate::groups::{Character, FiniteGroup, Subgroup};
use crate::modring::{Modulus, RowSpan};

use gmodule::{combination, lcm, relations};

/// One lattice member `M` with `κ_M` given on generators of `A^M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEntry {
    pub members: Vec<u32>,
    /// Generators of `A^M` on which `κ_M` is given; the basis of `A` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
    /// `kappa[j][i]` is `κ_M(generator j)` at `members[i]`.
    pub kappa: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineSpec {
    /// `χ1, χ2, χ3` by their values on the group generators.
    pub chars: [Vec<i64>; 3],
    /// `ρ̄` by generator images as `{"12": .., "13": .., "23": .., "24": .., "34": ..}`;
    /// built from a defining system when absent.
    #[serde(default)]
    pub rho_bar: Option<Vec<std::collections::BTreeMap<String, i64>>>,
    #[serde(default)]
    pub sigma1: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormationSpec {
    pub name: String,
    pub group: GroupSpec,
    pub modulus: u32,
    pub module: GModuleSpec,
    pub lattice: Vec<LatticeEntry>,
    #[serde(default)]
    pub pipeline: Option<PipelineSpec>,
}

/// `κ_M` for one lattice member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub subgroup: Subgroup,
    /// Elements of `A^M` generating it; `None` means the basis of `A`.
    pub generators: Option<Vec<Vec<u32>>>,
    /// `κ_M` of each generator, as characters of `M` in local ids.
    pub kappa: Vec<Character>,
}

impl Member {
    pub fn on_basis(subgroup: Subgroup, kappa: Vec<Character>) -> Self {
        Member {
            subgroup,
            generators: None,
            kappa,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Formation {
    name: String,
    gmod: GModule,
    m: Modulus,
    /// Common modulus for mixed computations in `A` and `Z/m`.
    l: Modulus,
    lattice: Vec<Subgroup>,
    members: Vec<Member>,
}

impl Formation {
    pub fn new(name: impl Into<String>, gmod: GModule, m: Modulus, members: Vec<Member>) -> Result<Self> {
        let g = gmod.group().clone();
        let r = gmod.rank();
        let l = Modulus::new(lcm(gmod.exponent().get() as u64, m.get() as u64))?;
        if !members.iter().any(|e| e.subgroup.order() == g.order()) {
            return Err(Error::invalid("lattice does not contain G"));
        }
        for e in &members {
            let s = &e.subgroup;
            if !s.is_normal() {
                return Err(Error::invalid(format!("lattice member of order {} is not normal", s.order())));
            }
            let gens: Vec<Vec<u32>> = match &e.generators {
                None => (0..r).map(|i| gmod.basis(i)).collect(),
                Some(gs) => {
                    let fixed = gmod.fixed_submodule(s);
                    let span = gmod.submodule(gs.clone());
                    if gs.iter().any(|x| x.len() != r || !gmod.contains(&fixed, x)) {
                        return Err(Error::invalid(format!(
                            "a κ generator for the member of order {} is not in A^M",
                            s.order()
                        )));
                    }
                    if !gmod.is_contained(&fixed, &span) {
                        return Err(Error::invalid(format!(
                            "the κ generators for the member of order {} do not generate A^M",
                            s.order()
                        )));
                    }
                    gs.clone()
                }
            };
            if e.kappa.len() != gens.len() {
                return Err(Error::invalid(format!(
                    "κ on the member of order {} has {} images for {} generators",
                    s.order(),
                    e.kappa.len(),
                    gens.len()
                )));
            }
            let sg = s.as_group(&g);
            for (j, phi) in e.kappa.iter().enumerate() {
                if phi.modulus != m || phi.values.len() != s.order() {
                    return Err(Error::invalid(format!("κ(generator {j}) is not a Z/{m}-valued function on M")));
                }
                if let Some((a, b)) = phi.violation(&sg) {
                    return Err(Error::invalid(format!(
                        "κ(generator {j}) on the member of order {} is not a homomorphism: fails at ({}, {})",
                        s.order(),
                        sg.label(a),
                        sg.label(b)
                    )));
                }
            }
            // Every relation among the generators must map to 0.
            let embedded: Vec<Vec<u32>> = gens.iter().map(|x| gmod.embed(l, x)).collect();
            for rel in relations(l, r, &embedded) {
                let img = combine_chars(m, &e.kappa, &rel, s.order());
                if img.iter().any(|&v| v != 0) {
                    return Err(Error::invalid(format!(
                        "κ on the member of order {} is not well defined: relation {rel:?} maps to {img:?}",
                        s.order()
                    )));
                }
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.subgroup.members() == b.subgroup.members() {
                    return Err(Error::invalid("lattice lists a subgroup twice"));
                }
                let c = a.subgroup.intersect(&g, &b.subgroup);
                if !members.iter().any(|s| s.subgroup.members() == c.members()) {
                    return Err(Error::invalid(format!(
                        "lattice is not closed under intersection (missing a subgroup of order {})",
                        c.order()
                    )));
                }
            }
        }
        Ok(Formation {
            name: name.into(),
            gmod,
            m,
            l,
            lattice: members.iter().map(|e| e.subgroup.clone()).collect(),
            members,
        })
    }

    pub fn from_spec(spec: &FormationSpec) -> Result<Self> {
        let g = spec.group.build()?;
        let m = Modulus::new(spec.modulus as u64)?;
        let gmod = GModule::from_spec(&g, &spec.module)?;
        let mut members = Vec::with_capacity(spec.lattice.len());
        for entry in &spec.lattice {
            let sub = Subgroup::from_members(&g, &entry.members)?;
            if sub.order() != entry.members.len() {
                return Err(Error::invalid("lattice member lists an element twice"));
            }
            let kappa = entry
                .kappa
                .iter()
                .map(|vals| {
                    if vals.len() != entry.members.len() {
                        return Err(Error::invalid("κ value table length differs from the member list"));
                    }
                    let mut local = vec![0u32; sub.order()];
                    for (&x, &v) in entry.members.iter().zip(vals) {
                        local[sub.local(x).expect("member") as usize] = m.reduce(v as i64);
                    }
                    Ok(Character { modulus: m, values: local })
                })
                .collect::<Result<Vec<_>>>()?;
            let generators = entry
                .generators
                .as_ref()
                .map(|gs| gs.iter().map(|x| gmod.reduce(x)).collect::<Result<Vec<_>>>())
                .transpose()?;
            members.push(Member {
                subgroup: sub,
                generators,
                kappa,
            });
        }
        Self::new(spec.name.clone(), gmod, m, members)
    }

    /// The spec of this formation with `group` as its source.
    pub fn to_spec(&self, group: GroupSpec) -> FormationSpec {
        FormationSpec {
            name: self.name.clone(),
            group,
            modulus: self.m.get(),
            module: self.gmod.to_spec(),
            lattice: self
                .members
                .iter()
                .map(|e| LatticeEntry {
                    members: e.subgroup.members().to_vec(),
                    generators: e
                        .generators
                        .as_ref()
                        .map(|gs| gs.iter().map(|x| x.iter().map(|&v| v as i64).collect()).collect()),
                    kappa: e.kappa.iter().map(|p| p.values.clone()).collect(),
                })
                .collect(),
            pipeline: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &FiniteGroup {
        self.gmod.group()
    }

    pub fn module(&self) -> &GModule {
        &self.gmod
    }

    pub fn modulus(&self) -> Modulus {
        self.m
    }

    pub fn lattice(&self) -> &[Subgroup] {
        &self.lattice
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn lattice_index(&self, s: &Subgroup) -> Option<usize> {
        self.lattice.iter().position(|x| x.members() == s.members())
    }

    fn index_or_step(&self, s: &Subgroup, step: &str, what: &str) -> Result<usize> {
        self.lattice_index(s)
            .ok_or_else(|| Error::step(step, format!("κ is not given on {what} (not in the lattice)")))
    }

    /// `κ_M(a)` as a character of `M` in local ids.
    ///
    /// # Panics
    /// If `κ_M` is given on generators of `A^M` and `a` is not in their span.
    pub fn kappa(&self, idx: usize, a: &[u32]) -> Character {
        let e = &self.members[idx];
        let coeffs: Vec<u32> = match &e.generators {
            None => a.to_vec(),
            Some(gs) => {
                let images: Vec<Vec<u32>> = gs.iter().map(|x| self.gmod.embed(self.l, x)).collect();
                combination(self.l, self.gmod.rank(), &images, &self.gmod.embed(self.l, a))
                    .expect("moduli agree")
                    .expect("κ_M evaluated outside A^M")
            }
        };
        Character {
            modulus: self.m,
            values: combine_chars(self.m, &e.kappa, &coeffs, e.subgroup.order()),
        }
    }

    pub(crate) fn embed_char(&self, chi: &Character) -> Vec<u32> {
        let s = self.l.get() / self.m.get();
        chi.values.iter().map(|&v| self.l.mul(v, s)).collect()
    }

    /// `Ker κ_M`.
    pub fn kappa_kernel(&self, idx: usize) -> Submodule {
        let fixed = self.gmod.fixed_submodule(&self.lattice[idx]);
        let images: Vec<Vec<u32>> = fixed.generators().iter().map(|a| self.embed_char(&self.kappa(idx, a))).collect();
        self.gmod.kernel_of_map(&fixed, self.l, self.lattice[idx].order(), &images)
    }

    /// Span of `κ_M(A^M)` inside `Hom(M, Z/m)`.
    pub fn kappa_image(&self, idx: usize) -> RowSpan {
        let fixed = self.gmod.fixed_submodule(&self.lattice[idx]);
        RowSpan::from_rows(
            self.m,
            self.lattice[idx].order(),
            fixed.generators().iter().map(|a| self.kappa(idx, a).values).collect(),
        )
    }

    /// Some `y ∈ A^M` with `f(κ_M(y)) = target`, for `f` linear on characters.
    pub fn kappa_preimage<F>(&self, idx: usize, target: &Character, f: F) -> Result<Option<Vec<u32>>>
    where
        F: Fn(&Character) -> Character,
    {
        let fixed = self.gmod.fixed_submodule(&self.lattice[idx]);
        let images: Vec<Vec<u32>> = fixed
            .generators()
            .iter()
            .map(|a| self.embed_char(&f(&self.kappa(idx, a))))
            .collect();
        let width = target.values.len();
        Ok(combination(self.l, width, &images, &self.embed_char(target))?
            .map(|c| self.gmod.combine(fixed.generators(), &c)))
    }
}

/// `Σ c_k φ_k` with the coefficients read mod `m`.
pub(crate) fn combine_chars(m: Modulus, phis: &[Character], coeffs: &[u32], width: usize) -> Vec<u32> {
    let mut out = vec![0u32; width];
    for (phi, &c) in phis.iter().zip(coeffs) {
        let c = c % m.get();
        for (o, &v) in out.iter_mut().zip(&phi.values) {
            *o = m.add(*o, m.mul(v, c));
        }
    }
    out
}

/// `small` as a subgroup of `big.as_group(g)`, together with that group.
pub(crate) fn nested(g: &FiniteGroup, small: &Subgroup, big: &Subgroup) -> Result<(FiniteGroup, Subgroup)> {
    if !small.is_subgroup_of(big) {
        return Err(Error::invalid("expected nested subgroups"));
    }
    let bg = big.as_group(g);
    let local: Vec<u32> = small.members().iter().map(|&x| big.local(x).expect("nested")).collect();
    let s = Subgroup::from_members(&bg, &local)?;
    Ok((bg, s))
}

/// `Res_M χ` for `χ` on `M′` (local ids of `M′`), in local ids of `M`.
pub fn res_local(small: &Subgroup, big: &Subgroup, chi: &Character) -> Character {
    Character {
        modulus: chi.modulus,
        values: small.members().iter().map(|&x| chi.at(big.local(x).expect("nested"))).collect(),
    }
}

/// `Cor_{M′}` from `M` (characters in local ids).
pub fn cor_local(g: &FiniteGroup, small: &Subgroup, big: &Subgroup, phi: &Character) -> Result<Character> {
    let (bg, s) = nested(g, small, big)?;
    Ok(cor1(&bg, &s, phi))
}
