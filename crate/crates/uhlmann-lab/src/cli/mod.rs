//! Seeded scenario runner behind the `uhlmann-lab` binary.

mod report;
mod scenarios;

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

pub use report::{matrix_value, Check, Relation, Report};

use serde::Serialize;
use serde_json::{json, Value};

use qcore::Seed;

/// Every scenario the runner knows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Uhlmann,
    Szk,
    Qip,
    Amplify,
    Commit,
    Channel,
    Compress,
    Blackhole,
    Interfere,
    Entropy,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Scenario::Uhlmann,
        Scenario::Szk,
        Scenario::Qip,
        Scenario::Amplify,
        Scenario::Commit,
        Scenario::Channel,
        Scenario::Compress,
        Scenario::Blackhole,
        Scenario::Interfere,
        Scenario::Entropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Uhlmann => "uhlmann",
            Scenario::Szk => "szk",
            Scenario::Qip => "qip",
            Scenario::Amplify => "amplify",
            Scenario::Commit => "commit",
            Scenario::Channel => "channel",
            Scenario::Compress => "compress",
            Scenario::Blackhole => "blackhole",
            Scenario::Interfere => "interfere",
            Scenario::Entropy => "entropy",
        }
    }
}

impl FromStr for Scenario {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Scenario::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or inputs.
    Usage(String),
    Io(String),
    Lib(qcore::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage: {s}"),
            CliError::Io(s) => write!(f, "i/o: {s}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qcore::Error> for CliError {
    fn from(e: qcore::Error) -> Self {
        CliError::Lib(e)
    }
}

/// One run: scenario, inputs, parameters, seed and tolerance overrides.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub inputs: Vec<PathBuf>,
    pub params: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
    /// Adds wall-clock time to the report, which then differs run to run.
    pub timing: bool,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self { scenario, inputs: Vec::new(), params: BTreeMap::new(), seed: None, tol: None, trials: None, timing: false }
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = Some(s);
        self
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn input(mut self, p: impl Into<PathBuf>) -> Self {
        self.inputs.push(p.into());
        self
    }

    pub fn trials(mut self, n: usize) -> Self {
        self.trials = Some(n);
        self
    }
}

/// Parses `key=value`.
pub fn parse_param(s: &str) -> Result<(String, String), CliError> {
    let (k, v) = s.split_once('=').ok_or_else(|| CliError::Usage(format!("parameter '{s}' is not key=value")))?;
    if k.is_empty() {
        return Err(CliError::Usage(format!("parameter '{s}' has an empty key")));
    }
    Ok((k.to_string(), v.to_string()))
}

/// Typed parameter access that records which keys a scenario consumed.
pub(crate) struct Ctx<'a> {
    cfg: &'a ScenarioConfig,
    /// Resolved value of every parameter read so far.
    used: RefCell<BTreeMap<String, Value>>,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a ScenarioConfig) -> Self {
        Self { cfg, used: RefCell::new(BTreeMap::new()) }
    }

    pub fn get<T: FromStr + Serialize>(&self, key: &str, default: T) -> Result<T, CliError> {
        let v = self.get_opt(key)?.unwrap_or(default);
        self.used.borrow_mut().insert(key.into(), json!(v));
        Ok(v)
    }

    pub fn get_opt<T: FromStr + Serialize>(&self, key: &str) -> Result<Option<T>, CliError> {
        let v = self
            .cfg
            .params
            .get(key)
            .map(|v| v.parse().map_err(|_| CliError::Usage(format!("parameter {key}={v} does not parse"))))
            .transpose()?;
        self.used.borrow_mut().insert(key.into(), json!(v));
        Ok(v)
    }

    /// The seed, required whenever the scenario samples.
    pub fn seed(&self) -> Result<Seed, CliError> {
        self.cfg
            .seed
            .map(Seed)
            .ok_or_else(|| CliError::Usage(format!("scenario '{}' samples randomness and needs --seed", self.cfg.scenario.name())))
    }

    pub fn trials(&self, default: usize) -> usize {
        let n = self.cfg.trials.unwrap_or(default);
        self.used.borrow_mut().insert("trials".into(), json!(n));
        n
    }

    pub fn tol(&self, default: f64) -> f64 {
        let t = self.cfg.tol.unwrap_or(default);
        self.used.borrow_mut().insert("tol".into(), json!(t));
        t
    }

    pub fn inputs(&self, max: usize) -> Result<&[PathBuf], CliError> {
        if self.cfg.inputs.len() > max {
            return Err(CliError::Usage(format!(
                "scenario '{}' takes at most {max} input(s), got {}",
                self.cfg.scenario.name(),
                self.cfg.inputs.len()
            )));
        }
        Ok(&self.cfg.inputs)
    }

    pub fn read(&self, p: &PathBuf) -> Result<String, CliError> {
        std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
    }

    fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.cfg.params.keys().filter(|k| !used.contains_key(*k)).cloned().collect()
    }
}

/// Runs a scenario and returns its report.
pub fn run(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let ctx = Ctx::new(cfg);
    let mut report = Report::new(cfg.scenario.name());
    report.seed = cfg.seed;
    report.inputs = cfg.inputs.iter().map(|p| p.display().to_string()).collect();
    match cfg.scenario {
        Scenario::Uhlmann => scenarios::uhlmann(&ctx, &mut report),
        Scenario::Szk => scenarios::szk(&ctx, &mut report),
        Scenario::Qip => scenarios::qip(&ctx, &mut report),
        Scenario::Amplify => scenarios::amplify(&ctx, &mut report),
        Scenario::Commit => scenarios::commit(&ctx, &mut report),
        Scenario::Channel => scenarios::channel(&ctx, &mut report),
        Scenario::Compress => scenarios::compress(&ctx, &mut report),
        Scenario::Blackhole => scenarios::blackhole(&ctx, &mut report),
        Scenario::Interfere => scenarios::interfere(&ctx, &mut report),
        Scenario::Entropy => scenarios::entropy(&ctx, &mut report),
    }?;
    let unused = ctx.unused();
    if !unused.is_empty() {
        return Err(CliError::Usage(format!("unknown parameter(s) for '{}': {}", cfg.scenario.name(), unused.join(", "))));
    }
    report.params = ctx.used.into_inner().into_iter().filter(|(_, v)| !v.is_null()).collect();
    if cfg.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}
