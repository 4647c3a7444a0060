use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sctk_core::mink::{SearchBudget, Shape};
use sctk_core::surface::parse_surface_config;
use sctk_core::zexp::Direction;
use sctk_core::SurfaceModel;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Expand,
    Enumerate,
    Mink,
    Verify,
    Growth,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Expand => "expand",
            Command::Enumerate => "enumerate",
            Command::Mink => "mink",
            Command::Verify => "verify",
            Command::Growth => "growth",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Minkowski search effort.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    pub shapes: Vec<Shape>,
    pub grid: usize,
    pub log_a_max: f64,
    pub b_max: f64,
    pub refine_steps: usize,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let b = SearchBudget::default();
        BudgetConfig { shapes: b.shapes, grid: b.grid, log_a_max: b.log_a_max, b_max: b.b_max, refine_steps: b.refine_steps }
    }
}

impl BudgetConfig {
    pub fn to_budget(&self) -> SearchBudget {
        SearchBudget {
            shapes: self.shapes.clone(),
            grid: self.grid,
            log_a_max: self.log_a_max,
            b_max: self.b_max,
            refine_steps: self.refine_steps,
        }
    }
}

/// Everything one run needs. Also readable from a JSON run file, where
/// omitted fields take the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Surface config file; relative paths in a run file resolve against
    /// the run file's directory.
    pub surface: PathBuf,
    #[serde(default = "defaults::theta")]
    pub theta: String,
    #[serde(default = "defaults::radius")]
    pub radius: f64,
    #[serde(default = "defaults::terms")]
    pub terms: usize,
    #[serde(default = "defaults::bits")]
    pub bits: u32,
    /// Word-length limit for orbit enumeration.
    #[serde(default = "defaults::depth")]
    pub depth: usize,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default = "defaults::margin")]
    pub margin: f64,
    /// Growth window length; the later half of the sequence when absent.
    #[serde(default)]
    pub tail: Option<usize>,
    #[serde(default = "defaults::holdout")]
    pub holdout: usize,
    #[serde(default = "defaults::word_length")]
    pub word_length: usize,
}

pub mod defaults {
    pub fn theta() -> String {
        "pi".into()
    }
    pub fn radius() -> f64 {
        20.0
    }
    pub fn terms() -> usize {
        10
    }
    pub fn bits() -> u32 {
        128
    }
    pub fn depth() -> usize {
        100_000
    }
    pub fn margin() -> f64 {
        0.05
    }
    pub fn holdout() -> usize {
        3
    }
    pub fn word_length() -> usize {
        6
    }
}

impl RunConfig {
    pub fn new(command: Command, surface: PathBuf) -> Self {
        RunConfig {
            command,
            surface,
            theta: defaults::theta(),
            radius: defaults::radius(),
            terms: defaults::terms(),
            bits: defaults::bits(),
            depth: defaults::depth(),
            budget: BudgetConfig::default(),
            output: None,
            format: OutputFormat::default(),
            margin: defaults::margin(),
            tail: None,
            holdout: defaults::holdout(),
            word_length: defaults::word_length(),
        }
    }

    /// Check every numeric parameter and parse θ.
    pub fn validate(&self) -> CliResult<Direction> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(CliError::Invalid(format!("`{name}` must be positive, got {x}")))
            }
        };
        let nonzero = |name: &str, x: usize| {
            if x > 0 {
                Ok(())
            } else {
                Err(CliError::Invalid(format!("`{name}` must be positive")))
            }
        };
        positive("radius", self.radius)?;
        positive("margin", self.margin)?;
        positive("budget.log_a_max", self.budget.log_a_max)?;
        positive("budget.b_max", self.budget.b_max)?;
        nonzero("terms", self.terms)?;
        nonzero("depth", self.depth)?;
        nonzero("word_length", self.word_length)?;
        nonzero("budget.grid", self.budget.grid)?;
        if self.budget.shapes.is_empty() {
            return Err(CliError::Invalid("`budget.shapes` must not be empty".into()));
        }
        if let Some(t) = self.tail {
            nonzero("tail", t)?;
        }
        if !(16..=1 << 14).contains(&self.bits) {
            return Err(CliError::Invalid(format!("`bits` must lie in 16..=16384, got {}", self.bits)));
        }
        Direction::parse(&self.theta).map_err(|e| CliError::Parse(format!("`theta`: {e}")))
    }
}

/// Read and validate a surface config file.
pub fn load_surface(path: &Path) -> CliResult<SurfaceModel> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_surface_config(&text).map(|(_, m)| m).map_err(|e| {
        let e = CliError::from(e);
        match e {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
            other => other,
        }
    })
}

/// Parse a JSON run file and load the surface it names. `base` is the
/// directory that relative surface paths resolve against.
pub fn parse_config(text: &str, base: &Path) -> CliResult<(RunConfig, SurfaceModel)> {
    let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("run config: {e}")))?;
    cfg.validate()?;
    if cfg.surface.is_relative() {
        cfg.surface = base.join(&cfg.surface);
    }
    let model = load_surface(&cfg.surface)?;
    Ok((cfg, model))
}
