use massey_core::cohom::Cohomology;
use massey_core::fixtures::GroupSpec;
use massey_core::formation::{
    check_axioms, main_pipeline, pipeline_input, AxiomOptions, AxiomReport, Formation as CoreFormation, FormationSpec,
    PipelineOptions, PipelineReport,
};
use massey_core::groups::{Character, FiniteGroup};
use massey_core::massey::{massey_oracle3, massey_set3, MasseyOptions, ORACLE_GUARD};
use massey_core::modring::Modulus;
use massey_core::unitri::{cocycle_identity_check, schreier_iso_check};
use massey_core::Error;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(_native, InvalidInputError, PyValueError);
create_exception!(_native, GuardExceededError, PyException);
create_exception!(_native, InconsistencyError, PyException);
create_exception!(_native, StepFailedError, PyException);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::GuardExceeded { .. } => GuardExceededError::new_err(msg),
        Error::Inconsistency(_) => InconsistencyError::new_err(msg),
        Error::StepFailed { .. } => StepFailedError::new_err(msg),
        _ => InvalidInputError::new_err(msg),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    InvalidInputError::new_err(e.to_string())
}

fn modulus(m: u32) -> PyResult<Modulus> {
    Modulus::new(m as u64).map_err(to_py)
}

/// A finite group from the fixture library or a JSON group spec.
#[pyclass(frozen)]
pub struct Group {
    inner: FiniteGroup,
}

#[pymethods]
impl Group {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        let inner = GroupSpec::Named(name.to_string()).build().map_err(to_py)?;
        Ok(Group { inner })
    }

    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Self> {
        let spec: GroupSpec = serde_json::from_str(spec).map_err(json_err)?;
        Ok(Group {
            inner: spec.build().map_err(to_py)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn generators(&self) -> Vec<u32> {
        self.inner.generators().to_vec()
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        let n = self.inner.order() as u32;
        if a >= n || b >= n {
            return Err(InvalidInputError::new_err("element id out of range"));
        }
        Ok(self.inner.mul(a, b))
    }

    /// Values on every element of the character with the given generator images.
    fn character(&self, modulus: u32, images: Vec<i64>) -> PyResult<Vec<u32>> {
        let m = self::modulus(modulus)?;
        Ok(Character::from_generator_images(&self.inner, m, &images)
            .map_err(to_py)?
            .values)
    }

    /// All of `Hom(G, Z/m)` as generator images.
    fn characters(&self, modulus: u32) -> PyResult<Vec<Vec<u32>>> {
        let m = self::modulus(modulus)?;
        let chars = Cohomology::new(&self.inner, m).h1_enumerate(1 << 16).map_err(to_py)?;
        Ok(chars.iter().map(|c| c.generator_images(&self.inner)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Group({:?}, order={})", self.inner.name(), self.inner.order())
    }
}

/// The triple Massey product `⟨χ1, χ2, χ3⟩`.
#[pyclass(frozen, get_all)]
pub struct MasseyProduct {
    defined: bool,
    contains_zero: bool,
    essential: bool,
    /// Canonical representatives of the classes, when enumerated.
    classes: Option<Vec<Vec<u32>>>,
    /// A lift of a defining system with vanishing product, on the generators.
    witness: Option<Vec<Vec<Vec<u32>>>>,
}

#[pymethods]
impl MasseyProduct {
    fn __repr__(&self) -> String {
        format!(
            "MasseyProduct(defined={}, contains_zero={}, essential={})",
            self.defined, self.contains_zero, self.essential
        )
    }
}

/// `chars` are three lists of generator images.
#[pyfunction]
#[pyo3(signature = (group, modulus, chars, oracle = false))]
fn massey_product(group: &Group, modulus: u32, chars: [Vec<i64>; 3], oracle: bool) -> PyResult<MasseyProduct> {
    let g = &group.inner;
    let m = self::modulus(modulus)?;
    let cs = chars
        .iter()
        .map(|v| Character::from_generator_images(g, m, v))
        .collect::<massey_core::Result<Vec<_>>>()
        .map_err(to_py)?;
    let cohom = Cohomology::new(g, m);
    let tri = [&cs[0], &cs[1], &cs[2]];
    let rep = massey_set3(&cohom, tri, MasseyOptions::default()).map_err(to_py)?;
    if oracle {
        let o = massey_oracle3(&cohom, tri, ORACLE_GUARD).map_err(to_py)?;
        let same = match (&o, &rep.classes) {
            (None, Some(c)) => c.is_empty(),
            (Some(o), Some(c)) => o == c,
            _ => false,
        };
        if !same {
            return Err(InconsistencyError::new_err("solver and brute-force oracle disagree"));
        }
    }
    Ok(MasseyProduct {
        defined: rep.defined,
        contains_zero: rep.contains_zero,
        essential: rep.essential,
        classes: rep.classes.map(|c| c.into_iter().collect()),
        witness: rep
            .witness
            .map(|w| g.generators().iter().map(|&s| w.rep.images()[s as usize].to_rows()).collect()),
    })
}

/// Violation counts for the 2-cocycle identity and the Schreier isomorphism on `Ū_n(Z/m)`.
#[pyfunction]
#[pyo3(signature = (n, modulus, samples = 100_000, triple_limit = 1 << 20, seed = 0))]
fn cocycle_check(n: usize, modulus: u32, samples: u64, triple_limit: usize, seed: u64) -> PyResult<(u64, u64, u64, u64)> {
    if n == 0 {
        return Err(InvalidInputError::new_err("n must be at least 1"));
    }
    let m = self::modulus(modulus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = cocycle_identity_check(n, m, triple_limit, samples, &mut rng);
    let s = schreier_iso_check(n, m, triple_limit, samples, &mut rng);
    Ok((c.triples_checked, c.violations, s.pairs_checked, s.violations + (!s.bijective) as u64))
}

/// Result of `check_axioms`.
#[pyclass(frozen)]
pub struct Axioms {
    inner: AxiomReport,
}

#[pymethods]
impl Axioms {
    #[getter]
    fn all_hold(&self) -> bool {
        self.inner.all_hold()
    }

    #[getter]
    fn failing(&self) -> Vec<&'static str> {
        self.inner.failing()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    fn __repr__(&self) -> String {
        format!("Axioms(failing={:?})", self.inner.failing())
    }
}

/// Result of the lifting pipeline.
#[pyclass(frozen)]
pub struct Pipeline {
    inner: PipelineReport,
}

#[pymethods]
impl Pipeline {
    #[getter]
    fn route(&self) -> String {
        self.inner.route.clone()
    }

    #[getter]
    fn sigma1(&self) -> u32 {
        self.inner.sigma1
    }

    #[getter]
    fn contains_zero(&self) -> bool {
        self.inner.contains_zero
    }

    #[getter]
    fn lambda13(&self) -> Vec<u32> {
        self.inner.lambda13.clone()
    }

    #[getter]
    fn lambda24(&self) -> Vec<u32> {
        self.inner.lambda24.clone()
    }

    #[getter]
    fn steps(&self) -> Vec<(String, String)> {
        self.inner.steps.iter().map(|s| (s.step.clone(), s.detail.clone())).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }
}

/// A finite formation `(G, A, {κ_M})` loaded from a fixture.
#[pyclass(frozen)]
pub struct Formation {
    inner: CoreFormation,
    spec: FormationSpec,
}

#[pymethods]
impl Formation {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec: FormationSpec = serde_json::from_str(text).map_err(json_err)?;
        let inner = CoreFormation::from_spec(&spec).map_err(to_py)?;
        Ok(Formation { inner, spec })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| InvalidInputError::new_err(format!("{path}: {e}")))?;
        Self::from_json(&text)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn modulus(&self) -> u32 {
        self.inner.modulus().get()
    }

    #[getter]
    fn lattice(&self) -> Vec<Vec<u32>> {
        self.inner.lattice().iter().map(|s| s.members().to_vec()).collect()
    }

    #[pyo3(signature = (h2_max_order = 16))]
    fn check_axioms(&self, h2_max_order: usize) -> PyResult<Axioms> {
        let opts = AxiomOptions {
            h2_max_order,
            ..AxiomOptions::default()
        };
        Ok(Axioms {
            inner: check_axioms(&self.inner, &opts).map_err(to_py)?,
        })
    }

    /// Runs the pipeline section of the fixture, or `chars` when given.
    #[pyo3(signature = (chars = None, sigma1 = None))]
    fn pipeline(&self, chars: Option<[Vec<i64>; 3]>, sigma1: Option<u32>) -> PyResult<Pipeline> {
        let mut p = match (&self.spec.pipeline, chars) {
            (_, Some(c)) => massey_core::formation::PipelineSpec {
                chars: c,
                rho_bar: None,
                sigma1: None,
            },
            (Some(p), None) => p.clone(),
            (None, None) => return Err(InvalidInputError::new_err("fixture has no pipeline section")),
        };
        if sigma1.is_some() {
            p.sigma1 = sigma1;
        }
        let rho = pipeline_input(&self.inner, &p).map_err(to_py)?;
        let opts = PipelineOptions {
            sigma1: p.sigma1,
            h2_max_order: None,
        };
        let out = main_pipeline(&self.inner, &rho, opts).map_err(to_py)?;
        Ok(Pipeline { inner: out.report })
    }
}

#[pymodule]
fn _native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Group>()?;
    m.add_class::<MasseyProduct>()?;
    m.add_class::<Formation>()?;
    m.add_class::<Axioms>()?;
    m.add_class::<Pipeline>()?;
    m.add_function(wrap_pyfunction!(massey_product, m)?)?;
    m.add_function(wrap_pyfunction!(cocycle_check, m)?)?;
    m.add("InvalidInputError", py.get_type::<InvalidInputError>())?;
    m.add("GuardExceededError", py.get_type::<GuardExceededError>())?;
    m.add("InconsistencyError", py.get_type::<InconsistencyError>())?;
    m.add("StepFailedError", py.get_type::<StepFailedError>())?;
    Ok(())
}
