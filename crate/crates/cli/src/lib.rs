//! Jobs behind the `massey` binary. Each job returns a JSON report; the binary
//! only handles argument parsing, output and exit codes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use massey_core::cohom::Cohomology;
use massey_core::fixtures::{by_name, small_library, GroupSpec};
use massey_core::formation::{
    check_axioms, main_pipeline, pipeline_input, AxiomOptions, AxiomReport, Formation, FormationSpec, PipelineOptions,
    PipelineReport, PipelineSpec,
};
use massey_core::groups::{Character, FiniteGroup};
use massey_core::massey::{massey_oracle3, massey_set3, MasseyOptions, ORACLE_GUARD};
use massey_core::modring::Modulus;
use massey_core::sweep::{sweep_group, summarize, SweepOptions, SweepReport};
use massey_core::unitri::{cocycle_identity_check, schreier_iso_check};
use massey_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Parse(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
            CliError::Parse(s) => write!(f, "invalid input: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// A failed named step of the pipeline counts as invalid input: the
    /// supplied formation does not satisfy an axiom instance the step needs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::GuardExceeded { .. }) => EXIT_GUARD,
            CliError::Core(Error::Inconsistency(_)) => EXIT_INCONSISTENT,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A finished job: the report plus the exit code it asks for.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
}

impl Outcome {
    fn ok<T: Serialize>(report: &T) -> CliResult<Self> {
        Ok(Outcome {
            report: to_value(report)?,
            exit: EXIT_OK,
        })
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Parse(e.to_string()))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("Value serializes");
    s.push('\n');
    s
}

/// Writes via a sibling temp file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| CliError::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// A library name, inline JSON group spec, or a path to one.
pub fn parse_group(src: &str) -> CliResult<(FiniteGroup, GroupSpec)> {
    let t = src.trim();
    let spec: GroupSpec = if t.starts_with('{') || t.starts_with('"') {
        serde_json::from_str(t).map_err(|e| CliError::Parse(format!("group spec: {e}")))?
    } else if Path::new(t).is_file() {
        read_json(Path::new(t))?
    } else {
        GroupSpec::Named(t.to_string())
    };
    Ok((spec.build()?, spec))
}

pub fn parse_modulus(m: u32) -> CliResult<Modulus> {
    Ok(Modulus::new(m as u64)?)
}

/// `--chars` as a JSON array of three arrays: generator images, or full value
/// tables of length `|G|`.
pub fn parse_chars(g: &FiniteGroup, m: Modulus, src: &str) -> CliResult<[Character; 3]> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(src).map_err(|e| CliError::Parse(format!("--chars: {e}")))?;
    if rows.len() != 3 {
        return Err(CliError::Parse(format!("--chars needs 3 characters, got {}", rows.len())));
    }
    let one = |v: &Vec<i64>| -> CliResult<Character> {
        if v.len() == g.order() && v.len() != g.generators().len() {
            let vals = v.iter().map(|&x| m.reduce(x)).collect();
            Ok(Character::new(g, m, vals)?)
        } else {
            Ok(Character::from_generator_images(g, m, v)?)
        }
    };
    Ok([one(&rows[0])?, one(&rows[1])?, one(&rows[2])?])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub classes: Option<usize>,
    pub equal: bool,
    pub zero_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub f13: Vec<u32>,
    pub f24: Vec<u32>,
    pub f14: Vec<u32>,
    /// The lift on the group generators, as rows.
    pub rho: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasseyJobReport {
    pub group: String,
    pub order: usize,
    pub modulus: u32,
    pub chars: [Vec<u32>; 3],
    pub defined: bool,
    pub contains_zero: bool,
    pub essential: bool,
    pub indeterminacy_generators: usize,
    pub base: Option<Vec<u32>>,
    pub classes: Option<Vec<Vec<u32>>>,
    pub witness: Option<WitnessOut>,
    pub oracle: Option<OracleCheck>,
}

pub fn cmd_massey(group: &str, modulus: u32, chars: &str, oracle: bool, guard: Option<usize>) -> CliResult<Outcome> {
    let (g, _) = parse_group(group)?;
    let m = parse_modulus(modulus)?;
    let chars = parse_chars(&g, m, chars)?;
    let cohom = Cohomology::new(&g, m);
    let tri = [&chars[0], &chars[1], &chars[2]];
    let mut opts = MasseyOptions::default();
    if let Some(cap) = guard {
        opts.enumerate_cap = cap;
    }
    let rep = massey_set3(&cohom, tri, opts)?;
    let oracle = if oracle {
        let o = massey_oracle3(&cohom, tri, guard.unwrap_or(ORACLE_GUARD))?;
        let zero = vec![0u32; g.order() * g.order()];
        let equal = match (&o, &rep.classes) {
            (None, Some(c)) => !rep.defined && c.is_empty(),
            (Some(o), Some(c)) => rep.defined && o == c,
            (_, None) => false,
        };
        let zero_agrees = o.as_ref().is_some_and(|o| o.contains(&zero)) == rep.contains_zero;
        if !equal || !zero_agrees {
            return Err(Error::inconsistency("solver and brute-force oracle disagree").into());
        }
        Some(OracleCheck {
            classes: o.map(|o| o.len()),
            equal,
            zero_agrees,
        })
    } else {
        None
    };
    let report = MasseyJobReport {
        group: g.name().to_string(),
        order: g.order(),
        modulus: m.get(),
        chars: chars.clone().map(|c| c.generator_images(&g)),
        defined: rep.defined,
        contains_zero: rep.contains_zero,
        essential: rep.essential,
        indeterminacy_generators: rep.indeterminacy.len(),
        base: rep.base.map(|b| b.canonical),
        classes: rep.classes.map(|c| c.into_iter().collect()),
        witness: rep.witness.map(|w| WitnessOut {
            f13: w.f13.values,
            f24: w.f24.values,
            f14: w.f14.values,
            rho: g.generators().iter().map(|&s| w.rep.images()[s as usize].to_rows()).collect(),
        }),
        oracle,
    };
    Outcome::ok(&report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleJobReport {
    pub n: usize,
    pub modulus: u32,
    pub seed: u64,
    pub cocycle_exhaustive: bool,
    pub triples_checked: u64,
    pub cocycle_violations: u64,
    pub schreier_exhaustive: bool,
    pub pairs_checked: u64,
    pub schreier_violations: u64,
    pub bijective: bool,
}

pub const DEFAULT_TRIPLE_LIMIT: usize = 1 << 20;
pub const DEFAULT_SAMPLES: u64 = 100_000;

pub fn cmd_cocycle_check(n: usize, modulus: u32, samples: u64, guard: Option<usize>, seed: u64) -> CliResult<Outcome> {
    if n == 0 {
        return Err(CliError::Parse("n must be at least 1".into()));
    }
    let m = parse_modulus(modulus)?;
    let limit = guard.unwrap_or(DEFAULT_TRIPLE_LIMIT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = cocycle_identity_check(n, m, limit, samples, &mut rng);
    let s = schreier_iso_check(n, m, limit, samples, &mut rng);
    let report = CocycleJobReport {
        n,
        modulus: m.get(),
        seed,
        cocycle_exhaustive: c.exhaustive,
        triples_checked: c.triples_checked,
        cocycle_violations: c.violations,
        schreier_exhaustive: s.exhaustive,
        pairs_checked: s.pairs_checked,
        schreier_violations: s.violations,
        bijective: s.bijective,
    };
    let mut out = Outcome::ok(&report)?;
    if c.violations > 0 || !s.passed() {
        out.exit = EXIT_INCONSISTENT;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFailure {
    pub step: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormationJobReport {
    pub formation: String,
    pub axioms: AxiomReport,
    pub all_hold: bool,
    pub failing: Vec<String>,
    pub pipeline: Option<PipelineReport>,
    pub pipeline_failure: Option<StepFailure>,
}

pub fn load_formation(path: &Path) -> CliResult<(Formation, FormationSpec)> {
    let spec: FormationSpec = read_json(path)?;
    Ok((Formation::from_spec(&spec)?, spec))
}

fn pipeline_spec(spec: &FormationSpec, chars: Option<&str>) -> CliResult<Option<PipelineSpec>> {
    let mut p = spec.pipeline.clone();
    if let Some(src) = chars {
        let rows: [Vec<i64>; 3] = serde_json::from_str(src).map_err(|e| CliError::Parse(format!("--chars: {e}")))?;
        p = Some(PipelineSpec {
            chars: rows,
            rho_bar: None,
            sigma1: p.and_then(|p| p.sigma1),
        });
    }
    Ok(p)
}

fn run_pipeline(f: &Formation, p: &PipelineSpec, guard: Option<usize>) -> massey_core::Result<PipelineReport> {
    let rho = pipeline_input(f, p)?;
    let opts = PipelineOptions {
        sigma1: p.sigma1,
        h2_max_order: guard,
    };
    Ok(main_pipeline(f, &rho, opts)?.report)
}

pub fn cmd_formation(fixture: &Path, chars: Option<&str>, guard: Option<usize>) -> CliResult<Outcome> {
    let (f, spec) = load_formation(fixture)?;
    let mut opts = AxiomOptions::default();
    if let Some(h) = guard {
        opts.h2_max_order = h;
    }
    let axioms = check_axioms(&f, &opts)?;
    let mut exit = EXIT_OK;
    let (mut pipeline, mut failure) = (None, None);
    if let Some(p) = pipeline_spec(&spec, chars)? {
        match run_pipeline(&f, &p, guard) {
            Ok(r) => pipeline = Some(r),
            Err(Error::StepFailed { step, detail }) => {
                failure = Some(StepFailure { step, detail });
                exit = EXIT_INVALID;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = FormationJobReport {
        formation: f.name().to_string(),
        all_hold: axioms.all_hold(),
        failing: axioms.failing().into_iter().map(String::from).collect(),
        axioms,
        pipeline,
        pipeline_failure: failure,
    };
    Ok(Outcome {
        report: to_value(&report)?,
        exit,
    })
}

pub fn cmd_pipeline(fixture: &Path, chars: Option<&str>, guard: Option<usize>) -> CliResult<Outcome> {
    let (f, spec) = load_formation(fixture)?;
    let p = pipeline_spec(&spec, chars)?
        .ok_or_else(|| CliError::Parse("fixture has no pipeline section and no --chars given".into()))?;
    Outcome::ok(&run_pipeline(&f, &p, guard)?)
}

/// Library groups up to this order are swept when no `--group` is given.
pub const DEFAULT_SWEEP_ORDER: usize = 16;

pub fn cmd_sweep(groups: Option<&str>, moduli: &[u32], oracle: bool, guard: Option<usize>) -> CliResult<Outcome> {
    let gs: Vec<FiniteGroup> = match groups {
        Some(list) => list.split(',').map(|n| by_name(n).map_err(CliError::from)).collect::<CliResult<_>>()?,
        None => small_library()
            .into_iter()
            .filter(|g| g.order() <= DEFAULT_SWEEP_ORDER)
            .collect(),
    };
    let mut opts = SweepOptions {
        oracle,
        ..SweepOptions::default()
    };
    if let Some(gd) = guard {
        opts.guard = gd;
    }
    let mut instances = Vec::new();
    for g in &gs {
        for &m in moduli {
            instances.extend(sweep_group(g, parse_modulus(m)?, &opts)?);
        }
    }
    let report = SweepReport {
        groups: gs.iter().map(|g| g.name().to_string()).collect(),
        moduli: moduli.to_vec(),
        summary: summarize(&instances),
        instances,
    };
    let mut out = Outcome::ok(&report)?;
    if !report.all_passed() {
        out.exit = EXIT_INCONSISTENT;
    }
    Ok(out)
}

/// The error report written when a job fails outright.
pub fn error_report(e: &CliError) -> Value {
    let mut map = BTreeMap::new();
    map.insert("error".to_string(), Value::String(e.to_string()));
    map.insert("exit_code".to_string(), Value::from(e.exit_code()));
    if let CliError::Core(Error::StepFailed { step, .. }) = e {
        map.insert("step".to_string(), Value::String(step.clone()));
    }
    serde_json::to_value(map).expect("map serializes")
}
