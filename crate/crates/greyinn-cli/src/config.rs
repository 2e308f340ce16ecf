//! Run configuration: defaults, optional TOML config file, CLI flag
//! overrides. Flags win over the config file, which wins over defaults.

use crate::error::{CliError, CliResult};
use clap::Args;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Gm11,
    Tmfgm,
    Mlp,
    Ginn,
    Fginn,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Gm11 => "gm11",
            Model::Tmfgm => "tmfgm",
            Model::Mlp => "mlp",
            Model::Ginn => "ginn",
            Model::Fginn => "fginn",
        }
    }

    /// Fixed comparison order.
    pub const ALL: [Model; 5] = [Model::Gm11, Model::Tmfgm, Model::Mlp, Model::Ginn, Model::Fginn];
}

/// A fractional-order coordinate: an explicit value or "pso" for search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderSpec {
    Pso,
    Fixed(f64),
}

impl std::str::FromStr for OrderSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("pso") {
            return Ok(OrderSpec::Pso);
        }
        s.parse::<f64>()
            .map(OrderSpec::Fixed)
            .map_err(|_| format!("expected a number or \"pso\", got {s:?}"))
    }
}

impl std::fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderSpec::Pso => write!(f, "pso"),
            OrderSpec::Fixed(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GreyTerm {
    Mae,
    Mse,
}

impl GreyTerm {
    pub fn to_lib(self) -> greyinn::GreyTermForm {
        match self {
            GreyTerm::Mae => greyinn::GreyTermForm::Mae,
            GreyTerm::Mse => greyinn::GreyTermForm::Mse,
        }
    }
}

/// Flags shared by the model-running subcommands.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Model to run
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Input CSV (header `label,value`)
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Number of leading points used for fitting/training
    #[arg(long)]
    pub train_split: Option<usize>,
    /// Sliding window size T for neural models
    #[arg(long)]
    pub window: Option<usize>,
    /// Grey-loss weighting coefficient in [0, 1]
    #[arg(long)]
    pub xi: Option<f64>,
    /// Fractional order alpha: a number or "pso"
    #[arg(long)]
    pub alpha: Option<OrderSpec>,
    /// Fractional order beta: a number or "pso"
    #[arg(long)]
    pub beta: Option<OrderSpec>,
    /// Learning rate
    #[arg(long)]
    pub lr: Option<f64>,
    /// Training iterations
    #[arg(long)]
    pub iters: Option<usize>,
    /// Seed for weight init, PSO, and noise
    #[arg(long)]
    pub seed: Option<u64>,
    /// Forecast horizon
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML config file; flags override its keys
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Form of the grey error term
    #[arg(long, value_enum)]
    pub grey_term: Option<GreyTerm>,
    /// PSO swarm size for order selection
    #[arg(long)]
    pub pso_particles: Option<usize>,
    /// PSO iterations for order selection
    #[arg(long)]
    pub pso_iterations: Option<usize>,
}

/// Keys accepted in the TOML config file; every key has a matching flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub data: Option<PathBuf>,
    pub train_split: Option<usize>,
    pub window: Option<usize>,
    pub xi: Option<f64>,
    pub alpha: Option<toml::Value>,
    pub beta: Option<toml::Value>,
    pub lr: Option<f64>,
    pub iters: Option<usize>,
    pub seed: Option<u64>,
    pub horizon: Option<usize>,
    pub out: Option<PathBuf>,
    pub grey_term: Option<GreyTerm>,
    pub pso_particles: Option<usize>,
    pub pso_iterations: Option<usize>,
}

fn parse_order_value(v: &toml::Value, key: &str) -> CliResult<OrderSpec> {
    match v {
        toml::Value::Float(f) => Ok(OrderSpec::Fixed(*f)),
        toml::Value::Integer(i) => Ok(OrderSpec::Fixed(*i as f64)),
        toml::Value::String(s) => s
            .parse()
            .map_err(|e: String| CliError::Usage(format!("config key {key}: {e}"))),
        _ => Err(CliError::Usage(format!(
            "config key {key}: expected a number or \"pso\""
        ))),
    }
}

/// Fully resolved run settings. Defaults mirror the standard protocol:
/// T = 2, xi = 0.1, lr = 0.001, 2000 iterations, MAE grey term.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<Model>,
    pub data: Option<PathBuf>,
    pub train_split: Option<usize>,
    pub window: usize,
    pub xi: f64,
    pub alpha: OrderSpec,
    pub beta: OrderSpec,
    pub lr: f64,
    pub iters: usize,
    pub seed: u64,
    pub horizon: Option<usize>,
    pub out: PathBuf,
    pub grey_term: GreyTerm,
    pub pso_particles: usize,
    pub pso_iterations: usize,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> CliResult<Self> {
        let file = match &args.config {
            None => FileConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
        };
        let file_model = match &file.model {
            None => None,
            Some(name) => Some(
                clap::ValueEnum::from_str(name, true)
                    .map_err(|_| CliError::Usage(format!("config: unknown model {name:?}")))?,
            ),
        };
        let file_alpha = file
            .alpha
            .as_ref()
            .map(|v| parse_order_value(v, "alpha"))
            .transpose()?;
        let file_beta = file
            .beta
            .as_ref()
            .map(|v| parse_order_value(v, "beta"))
            .transpose()?;

        let cfg = Self {
            model: args.model.or(file_model),
            data: args.data.clone().or(file.data),
            train_split: args.train_split.or(file.train_split),
            window: args.window.or(file.window).unwrap_or(2),
            xi: args.xi.or(file.xi).unwrap_or(0.1),
            alpha: args.alpha.or(file_alpha).unwrap_or(OrderSpec::Pso),
            beta: args.beta.or(file_beta).unwrap_or(OrderSpec::Pso),
            lr: args.lr.or(file.lr).unwrap_or(0.001),
            iters: args.iters.or(file.iters).unwrap_or(2000),
            seed: args.seed.or(file.seed).unwrap_or(0),
            horizon: args.horizon.or(file.horizon),
            out: args
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("out")),
            grey_term: args.grey_term.or(file.grey_term).unwrap_or(GreyTerm::Mae),
            pso_particles: args.pso_particles.or(file.pso_particles).unwrap_or(30),
            pso_iterations: args.pso_iterations.or(file.pso_iterations).unwrap_or(100),
        };
        if cfg.window < 1 {
            return Err(CliError::Usage("window must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&cfg.xi) {
            return Err(CliError::Usage(format!("xi must lie in [0, 1], got {}", cfg.xi)));
        }
        Ok(cfg)
    }

    pub fn require_model(&self) -> CliResult<Model> {
        self.model
            .ok_or_else(|| CliError::Usage("--model is required".into()))
    }

    pub fn require_data(&self) -> CliResult<&Path> {
        self.data
            .as_deref()
            .ok_or_else(|| CliError::Usage("--data is required".into()))
    }
}
