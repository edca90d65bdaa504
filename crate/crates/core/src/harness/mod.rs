//! Suite runner: loads a model, runs a named list of numerical checks at
//! seeded sample points and assembles a deterministic report.

mod einstein_suites;
mod galilei_suites;
pub mod orbit;
mod quantum_suites;
pub mod report;
pub mod sampling;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::einstein::{EinsteinError, EinsteinModel};
use crate::galilei::GalileiModel;
use crate::modelspec::{parse_model, ChartBox, Framework, ModelError};
use crate::smooth::EvalError;

pub use orbit::{integrate_einstein, integrate_galilei, OrbitError, OrbitReport, Trajectory};
pub use report::{emit_report, Bound, CheckRecord, ReportFormat, SuiteReport};
pub use sampling::Sampler;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("suite `{suite}` needs a {expected} model, `{model}` is {found}")]
    FrameworkMismatch { suite: String, model: String, expected: Framework, found: Framework },
    #[error("suite `{suite}` has no check named `{check}`")]
    UnknownCheck { suite: String, check: String },
    #[error("bad tolerance override `{0}` (expected name=value)")]
    BadTolerance(String),
    #[error("at least one sample point is required")]
    NoPoints,
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("no {what} found near {point:?}")]
    Sampling { what: &'static str, point: Vec<f64> },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Einstein(#[from] EinsteinError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Sampling parameters and tolerance overrides of a run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub points: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { points: 100, seed: 42, tolerances: BTreeMap::new() }
    }
}

impl RunConfig {
    pub fn new(points: usize, seed: u64) -> Self {
        RunConfig { points, seed, tolerances: BTreeMap::new() }
    }

    /// Adds an override written as `name=value`.
    pub fn with_override(mut self, spec: &str) -> Result<Self, HarnessError> {
        let (name, value) = spec.split_once('=').ok_or_else(|| HarnessError::BadTolerance(spec.into()))?;
        let value: f64 = value.trim().parse().map_err(|_| HarnessError::BadTolerance(spec.into()))?;
        if !value.is_finite() || value < 0.0 {
            return Err(HarnessError::BadTolerance(spec.into()));
        }
        self.tolerances.insert(name.trim().to_string(), value);
        Ok(self)
    }
}

/// A validated model of either framework.
#[derive(Debug, Clone)]
pub enum LoadedModel {
    Galilei(GalileiModel),
    Einstein(EinsteinModel),
}

impl LoadedModel {
    pub fn from_source(src: &str) -> Result<Self, HarnessError> {
        let compiled = parse_model(src)?.compile()?;
        compiled.validate()?;
        Ok(match compiled.framework {
            Framework::Galilei => LoadedModel::Galilei(GalileiModel::from_compiled(compiled)?),
            Framework::Einstein => LoadedModel::Einstein(EinsteinModel::from_compiled(compiled)?),
        })
    }

    pub fn framework(&self) -> Framework {
        match self {
            LoadedModel::Galilei(_) => Framework::Galilei,
            LoadedModel::Einstein(_) => Framework::Einstein,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            LoadedModel::Galilei(m) => &m.name,
            LoadedModel::Einstein(m) => &m.name,
        }
    }

    pub fn chart_box(&self) -> &ChartBox {
        match self {
            LoadedModel::Galilei(m) => &m.chart_box,
            LoadedModel::Einstein(m) => &m.chart_box,
        }
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel, HarnessError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
    LoadedModel::from_source(&src)
}

/// Registry entry: a suite, the framework it needs (if any) and its checks
/// in report order.
#[derive(Debug, Clone, Copy)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub framework: Option<Framework>,
    pub checks: &'static [&'static str],
}

pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo { name: "galilei-core", framework: Some(Framework::Galilei), checks: galilei_suites::CORE },
    SuiteInfo { name: "galilei-brackets", framework: Some(Framework::Galilei), checks: galilei_suites::BRACKETS },
    SuiteInfo { name: "galilei-quantum", framework: Some(Framework::Galilei), checks: quantum_suites::GALILEI },
    SuiteInfo {
        name: "einstein-identities",
        framework: Some(Framework::Einstein),
        checks: einstein_suites::IDENTITIES,
    },
    SuiteInfo { name: "einstein-brackets", framework: Some(Framework::Einstein), checks: einstein_suites::BRACKETS },
    SuiteInfo { name: "einstein-quantum", framework: Some(Framework::Einstein), checks: quantum_suites::EINSTEIN },
    SuiteInfo { name: "section1-general", framework: None, checks: quantum_suites::SECTION1 },
    SuiteInfo { name: "orbits", framework: None, checks: ORBIT_CHECKS },
];

const ORBIT_CHECKS: &[&str] = &["orbit-law-of-motion", "orbit-time-reversal"];

pub fn suite_info(name: &str) -> Result<&'static SuiteInfo, HarnessError> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| HarnessError::UnknownSuite(name.into()))
}

/// Collects check records; each check draws from its own random stream.
pub(crate) struct Runner<'a> {
    cfg: &'a RunConfig,
    sampler: Sampler,
    records: Vec<CheckRecord>,
}

impl<'a> Runner<'a> {
    fn new(cfg: &'a RunConfig) -> Self {
        Runner { cfg, sampler: Sampler::new(cfg.seed), records: Vec::new() }
    }

    pub(crate) fn check(
        &mut self,
        name: &str,
        anchor: &str,
        tolerance: f64,
        bound: Bound,
        body: impl FnOnce(&mut ChaCha8Rng, usize) -> Result<f64, HarnessError>,
    ) -> Result<(), HarnessError> {
        let mut rng = self.sampler.stream(self.records.len() as u64);
        let residual = body(&mut rng, self.cfg.points)?;
        let tolerance = self.cfg.tolerances.get(name).copied().unwrap_or(tolerance);
        self.records.push(CheckRecord::new(name, anchor, residual, tolerance, bound));
        Ok(())
    }
}

/// Runs a suite on an already loaded model.
pub fn run_suite_on(model: &LoadedModel, suite: &str, cfg: &RunConfig) -> Result<SuiteReport, HarnessError> {
    let info = suite_info(suite)?;
    if let Some(expected) = info.framework {
        if expected != model.framework() {
            return Err(HarnessError::FrameworkMismatch {
                suite: suite.into(),
                model: model.name().into(),
                expected,
                found: model.framework(),
            });
        }
    }
    if cfg.points == 0 {
        return Err(HarnessError::NoPoints);
    }
    if let Some(check) = cfg.tolerances.keys().find(|k| !info.checks.contains(&k.as_str())) {
        return Err(HarnessError::UnknownCheck { suite: suite.into(), check: check.clone() });
    }
    let started = Instant::now();
    let mut runner = Runner::new(cfg);
    match (info.name, model) {
        ("galilei-core", LoadedModel::Galilei(m)) => galilei_suites::core(&mut runner, m)?,
        ("galilei-brackets", LoadedModel::Galilei(m)) => galilei_suites::brackets(&mut runner, m)?,
        ("galilei-quantum", LoadedModel::Galilei(m)) => quantum_suites::galilei(&mut runner, m)?,
        ("einstein-identities", LoadedModel::Einstein(m)) => einstein_suites::identities(&mut runner, m)?,
        ("einstein-brackets", LoadedModel::Einstein(m)) => einstein_suites::brackets(&mut runner, m)?,
        ("einstein-quantum", LoadedModel::Einstein(m)) => quantum_suites::einstein(&mut runner, m)?,
        ("section1-general", m) => quantum_suites::section1(&mut runner, m.chart_box())?,
        ("orbits", LoadedModel::Galilei(m)) => galilei_suites::orbits(&mut runner, m)?,
        ("orbits", LoadedModel::Einstein(m)) => einstein_suites::orbits(&mut runner, m)?,
        _ => unreachable!("framework checked above"),
    }
    let checks = runner.records;
    debug_assert_eq!(checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), info.checks);
    Ok(SuiteReport {
        suite: info.name.into(),
        model: model.name().into(),
        seed: cfg.seed,
        points: cfg.points,
        checks,
        wall_time: started.elapsed(),
    })
}

/// Loads the model at `path` and runs `suite` on it.
pub fn run_suite(path: impl AsRef<Path>, suite: &str, cfg: &RunConfig) -> Result<SuiteReport, HarnessError> {
    run_suite_on(&load_model(path)?, suite, cfg)
}

/// Largest value of `f` over `items`.
pub(crate) fn max_over<T>(
    items: impl IntoIterator<Item = T>,
    mut f: impl FnMut(T) -> Result<f64, HarnessError>,
) -> Result<f64, HarnessError> {
    let mut worst: f64 = 0.0;
    for item in items {
        let r = f(item)?;
        if r.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn covered(suites: &[&str]) -> BTreeSet<&'static str> {
        suites.iter().flat_map(|s| suite_info(s).unwrap().checks.iter().copied()).collect()
    }

    #[test]
    fn registry_covers_module_invariants() {
        let pairs: [(&[&str], &[&str]); 3] = [
            (crate::galilei::INVARIANTS, &["galilei-core", "galilei-brackets"]),
            (crate::einstein::INVARIANTS, &["einstein-identities", "einstein-brackets"]),
            (crate::quantum::INVARIANTS, &["section1-general", "galilei-quantum", "einstein-quantum"]),
        ];
        for (invariants, suites) in pairs {
            let have = covered(suites);
            for name in invariants {
                assert!(have.contains(name), "invariant `{name}` has no check in {suites:?}");
            }
        }
    }

    #[test]
    fn suite_names_are_fixed() {
        let names: Vec<_> = SUITES.iter().map(|s| s.name).collect();
        assert_eq!(
            names,
            [
                "galilei-core",
                "galilei-brackets",
                "galilei-quantum",
                "einstein-identities",
                "einstein-brackets",
                "einstein-quantum",
                "section1-general",
                "orbits"
            ]
        );
        for s in SUITES {
            let unique: BTreeSet<_> = s.checks.iter().collect();
            assert_eq!(unique.len(), s.checks.len(), "{}", s.name);
        }
    }

    #[test]
    fn overrides_parse() {
        let cfg = RunConfig::default().with_override("omega-closed=1e-3").unwrap();
        assert_eq!(cfg.tolerances["omega-closed"], 1e-3);
        assert!(RunConfig::default().with_override("omega-closed").is_err());
        assert!(RunConfig::default().with_override("x=abc").is_err());
        assert!(RunConfig::default().with_override("x=-1").is_err());
    }

    #[test]
    fn framework_mismatch_and_unknown_suite() {
        let m = LoadedModel::from_source(include_str!("../../models/minkowski.model")).unwrap();
        let cfg = RunConfig::new(2, 1);
        assert!(matches!(run_suite_on(&m, "galilei-core", &cfg), Err(HarnessError::FrameworkMismatch { .. })));
        assert!(matches!(run_suite_on(&m, "nope", &cfg), Err(HarnessError::UnknownSuite(_))));
        let bad = RunConfig::new(2, 1).with_override("no-such-check=1").unwrap();
        assert!(matches!(run_suite_on(&m, "einstein-identities", &bad), Err(HarnessError::UnknownCheck { .. })));
    }

    #[test]
    fn tolerance_override_flips_a_check() {
        let m = LoadedModel::from_source(include_str!("../../models/flat_galilei.model")).unwrap();
        let cfg = RunConfig::new(3, 5).with_override("cosymplectic-volume=1e9").unwrap();
        let r = run_suite_on(&m, "galilei-core", &cfg).unwrap();
        let bad: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(bad, ["cosymplectic-volume"]);
        assert_eq!(r.exit_code(), 1);
    }
}
