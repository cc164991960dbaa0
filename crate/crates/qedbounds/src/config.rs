//! Run configuration: a single JSON document, no environment variables
//! except `QEDBOUNDS_OUT_DIR` (output directory override, applied by the
//! binary to relative output paths).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use selfenergy::bounds::ConstantsSet;
use serde::Deserialize;

/// Harness error carrying the process exit contract: configuration problems
/// exit 2, numerical or module failures exit 1 (success exits 0).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<selfenergy::Error> for CliError {
    // library errors surface during computation, never during config parsing
    fn from(e: selfenergy::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// Constant names accepted in the `constants` override map. The first four
/// have library defaults; the rest parameterize the scaling-only families and
/// must be supplied before those rows are emitted.
pub const KNOWN_CONSTANTS: [&str; 10] = [
    "c_nonrel_lower",
    "c_nonrel_upper",
    "c_rel_upper",
    "c_lt",
    "c_pauli_upper",
    "c_pauli_lower_small",
    "c_pauli_lower_large",
    "c_rel_fermion_upper",
    "c_rel_fermion_lower_small",
    "c_rel_fermion_lower_large",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Bounds,
    A2,
    Oracle,
    Rel,
    Lt,
    Fit,
    Accept,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Bounds => "bounds",
            Task::A2 => "a2",
            Task::Oracle => "oracle",
            Task::Rel => "rel",
            Task::Lt => "lt",
            Task::Fit => "fit",
            Task::Accept => "accept",
        }
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bounds" => Ok(Task::Bounds),
            "a2" => Ok(Task::A2),
            "oracle" => Ok(Task::Oracle),
            "rel" => Ok(Task::Rel),
            "lt" => Ok(Task::Lt),
            "fit" => Ok(Task::Fit),
            "accept" => Ok(Task::Accept),
            other => Err(format!(
                "unknown task {other:?}; expected one of bounds, a2, oracle, rel, lt, fit, accept"
            )),
        }
    }
}

fn default_alpha() -> Vec<f64> {
    vec![1.0]
}
fn default_lambda() -> Vec<f64> {
    vec![1.0]
}
fn default_box_side() -> Vec<f64> {
    vec![2.0 * std::f64::consts::PI]
}
fn default_n() -> Vec<u64> {
    vec![1]
}

/// Parameter grids. Omitted axes get a one-point default; an axis written as
/// an explicitly empty list is a configuration error.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: Vec<f64>,
    #[serde(default = "default_box_side")]
    pub box_side: Vec<f64>,
    #[serde(default = "default_n")]
    pub n: Vec<u64>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            alpha: default_alpha(),
            lambda: default_lambda(),
            box_side: default_box_side(),
            n: default_n(),
        }
    }
}

fn default_quadrature() -> f64 {
    1e-9
}
fn default_eig() -> f64 {
    1e-10
}
fn default_fit() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_quadrature")]
    pub quadrature: f64,
    #[serde(default = "default_eig")]
    pub eig: f64,
    #[serde(default = "default_fit")]
    pub fit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quadrature: default_quadrature(),
            eig: default_eig(),
            fit: default_fit(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub task: Task,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// Output path; `--out` on the command line wins over this.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: SweepConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid config JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |msg: String| Err(CliError::Config(msg));
        if self.grid.alpha.is_empty()
            || self.grid.lambda.is_empty()
            || self.grid.box_side.is_empty()
            || self.grid.n.is_empty()
        {
            return err("empty grid: every grid axis must have at least one entry".into());
        }
        for &a in &self.grid.alpha {
            if !a.is_finite() || a < 0.0 {
                return err(format!("grid.alpha entry {a} must be finite and >= 0"));
            }
        }
        for &l in &self.grid.lambda {
            if !l.is_finite() || l <= 0.0 {
                return err(format!("grid.lambda entry {l} must be finite and > 0"));
            }
        }
        for &b in &self.grid.box_side {
            if !b.is_finite() || b <= 0.0 {
                return err(format!("grid.box_side entry {b} must be finite and > 0"));
            }
        }
        for &n in &self.grid.n {
            if n == 0 {
                return err("grid.n entry 0: particle counts start at 1".into());
            }
        }
        for (name, &value) in &self.constants {
            if !KNOWN_CONSTANTS.contains(&name.as_str()) {
                return err(format!(
                    "unknown constant {name:?}; known constants: {}",
                    KNOWN_CONSTANTS.join(", ")
                ));
            }
            if !value.is_finite() || value <= 0.0 {
                return err(format!("constant {name} = {value} must be finite and > 0"));
            }
        }
        for (label, tol) in [
            ("quadrature", self.tolerances.quadrature),
            ("eig", self.tolerances.eig),
            ("fit", self.tolerances.fit),
        ] {
            if !tol.is_finite() || tol <= 0.0 {
                return err(format!("tolerances.{label} = {tol} must be finite and > 0"));
            }
        }
        Ok(())
    }

    /// Library defaults with the config overrides applied on top.
    pub fn constants_set(&self) -> Result<ConstantsSet, CliError> {
        let mut set = ConstantsSet::defaults();
        for (name, &value) in &self.constants {
            set.set_user(name, value)?;
        }
        Ok(set)
    }

    /// True when the override map defines every name in `names`.
    pub fn has_constants(&self, names: &[&str]) -> bool {
        names.iter().all(|n| self.constants.contains_key(*n))
    }
}
