//! Run configuration: a JSON file, optionally a previous run's manifest,
//! with command-line overrides applied on top.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tvha_core::{Algorithm, OneBodyMode, OptimizerConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    Tvha,
    Uccsd,
    Hea,
}

impl AnsatzKind {
    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::Tvha => "tvha",
            AnsatzKind::Uccsd => "uccsd",
            AnsatzKind::Hea => "hea",
        }
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnsatzKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tvha" => Ok(AnsatzKind::Tvha),
            "uccsd" => Ok(AnsatzKind::Uccsd),
            "hea" => Ok(AnsatzKind::Hea),
            other => Err(format!("unknown ansatz '{other}' (expected tvha, uccsd or hea)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyMode {
    #[default]
    Diagonal,
    Full,
}

impl From<BodyMode> for OneBodyMode {
    fn from(m: BodyMode) -> Self {
        match m {
            BodyMode::Diagonal => OneBodyMode::Diagonal,
            BodyMode::Full => OneBodyMode::Full,
        }
    }
}

impl FromStr for BodyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "diagonal" => Ok(BodyMode::Diagonal),
            "full" => Ok(BodyMode::Full),
            other => Err(format!("unknown one-body mode '{other}' (expected diagonal or full)")),
        }
    }
}

/// Truncation targets: explicit values, or `auto` for the downsampled
/// admissible grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum PTargets {
    #[default]
    Auto,
    List(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawTargets {
    Word(String),
    List(Vec<f64>),
}

impl Serialize for PTargets {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PTargets::Auto => RawTargets::Word("auto".into()).serialize(s),
            PTargets::List(v) => RawTargets::List(v.clone()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for PTargets {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawTargets::deserialize(d)? {
            RawTargets::Word(w) if w == "auto" => Ok(PTargets::Auto),
            RawTargets::Word(w) => {
                Err(serde::de::Error::custom(format!("p_targets must be \"auto\" or a list, got \"{w}\"")))
            }
            RawTargets::List(v) => Ok(PTargets::List(v)),
        }
    }
}

impl FromStr for PTargets {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(PTargets::Auto);
        }
        parse_list(s).map(PTargets::List)
    }
}

/// Comma-separated list, as used by `--trotter 1,2,5`.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',').map(|part| part.trim().parse::<T>().map_err(|_| format!("cannot parse '{part}'"))).collect()
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<AnsatzKind>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        One(AnsatzKind),
        Many(Vec<AnsatzKind>),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::One(a) => vec![a],
        Raw::Many(v) => v,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub max_evals: usize,
    pub algorithm: String,
    pub initial_step: f64,
    pub xtol: f64,
    pub ftol: f64,
    pub seed: u64,
    /// Start tVHA from a seeded uniform draw instead of the adiabatic ramp.
    pub random_init: bool,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        let d = OptimizerConfig::default();
        Self {
            max_evals: d.max_evals,
            algorithm: d.algorithm.name().into(),
            initial_step: d.initial_step,
            xtol: d.xtol,
            ftol: d.ftol,
            seed: d.seed,
            random_init: false,
        }
    }
}

impl OptimizerSettings {
    pub fn to_core(&self) -> Result<OptimizerConfig> {
        let algorithm = Algorithm::from_str(&self.algorithm).map_err(|e| CliError::Config(e.to_string()))?;
        let cfg = OptimizerConfig {
            max_evals: self.max_evals,
            algorithm,
            initial_step: self.initial_step,
            xtol: self.xtol,
            ftol: self.ftol,
            seed: self.seed,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

fn default_ansatz() -> Vec<AnsatzKind> {
    vec![AnsatzKind::Tvha]
}

fn default_trotter() -> Vec<usize> {
    vec![1]
}

fn default_hea_layers() -> usize {
    3
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_jobs() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub fixture: PathBuf,
    #[serde(default = "default_ansatz", deserialize_with = "one_or_many")]
    pub ansatz: Vec<AnsatzKind>,
    #[serde(default = "default_trotter")]
    pub trotter_steps: Vec<usize>,
    #[serde(default)]
    pub p_targets: PTargets,
    #[serde(default)]
    pub one_body_mode: BodyMode,
    #[serde(default = "default_hea_layers")]
    pub hea_layers: usize,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("every field has a default")
    }
}

/// Command-line values that replace config keys when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub fixture: Option<PathBuf>,
    pub ansatz: Option<Vec<AnsatzKind>>,
    pub trotter_steps: Option<Vec<usize>>,
    pub p_targets: Option<PTargets>,
    pub one_body_mode: Option<BodyMode>,
    pub hea_layers: Option<usize>,
    pub algorithm: Option<String>,
    pub max_evals: Option<usize>,
    pub seed: Option<u64>,
    pub random_init: bool,
    pub jobs: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Reads a config file. A run manifest is accepted too: its `config`
    /// entry is the resolved configuration of that run.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.fixture {
            self.fixture = v;
        }
        if let Some(v) = o.ansatz {
            self.ansatz = v;
        }
        if let Some(v) = o.trotter_steps {
            self.trotter_steps = v;
        }
        if let Some(v) = o.p_targets {
            self.p_targets = v;
        }
        if let Some(v) = o.one_body_mode {
            self.one_body_mode = v;
        }
        if let Some(v) = o.hea_layers {
            self.hea_layers = v;
        }
        if let Some(v) = o.algorithm {
            self.optimizer.algorithm = v;
        }
        if let Some(v) = o.max_evals {
            self.optimizer.max_evals = v;
        }
        if let Some(v) = o.seed {
            self.optimizer.seed = v;
        }
        if o.random_init {
            self.optimizer.random_init = true;
        }
        if let Some(v) = o.jobs {
            self.jobs = v;
        }
        if let Some(v) = o.out_dir {
            self.out_dir = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CliError::Config(msg.into()));
        if self.fixture.as_os_str().is_empty() {
            return bad("no fixture given (set \"fixture\" or pass --fixture)");
        }
        if self.ansatz.is_empty() {
            return bad("ansatz list is empty");
        }
        if self.trotter_steps.is_empty() || self.trotter_steps.contains(&0) {
            return bad("trotter_steps must be a non-empty list of positive integers");
        }
        if let PTargets::List(v) = &self.p_targets {
            if v.is_empty() {
                return bad("p_targets list is empty");
            }
            if !v.iter().all(|p| (0.0..=1.0).contains(p)) {
                return bad("p_targets must lie in [0, 1]");
            }
        }
        if self.hea_layers == 0 {
            return bad("hea_layers must be at least 1");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        self.optimizer.to_core()?;
        Ok(())
    }

    /// Validates and makes the fixture path absolute so the config can be
    /// replayed from any directory.
    pub fn resolve(mut self) -> Result<Self> {
        self.validate()?;
        self.fixture = std::fs::canonicalize(&self.fixture)
            .map_err(|source| CliError::Fixture(tvha_core::Error::Io { path: self.fixture.clone(), source }))?;
        Ok(self)
    }

    pub fn sha256(&self) -> String {
        hex(&Sha256::digest(serde_json::to_vec(self).expect("config serializes")))
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
