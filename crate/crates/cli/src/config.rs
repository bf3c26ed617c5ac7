//! Flat `key = value` run configuration.
//!
//! ```text
//! # model
//! lambda = 1
//! p = 0.05
//! alpha = 4
//! beta = 1
//! antennas = 1
//! noise = 0
//! # window: either nodes or side
//! boundary = torus            # torus | torus_far_field | guard
//! guard_fraction = 0.5        # guard only
//! nodes = 1000
//! # experiment
//! trials = 1000
//! seed = 1
//! schemes = nfp,msr           # nfp, msr, modified_msr or all
//! sweep = p                   # p | lambda | alpha | beta | antennas | noise
//! values = 0.01,0.02,0.05
//! # validate
//! criteria = all              # comma list of A1..A9
//! capture_trials = 10000
//! scaling_grid_trials = 500
//! # output
//! format = csv                # csv | json
//! out = results.csv
//! ```

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use adhoc_progress::analytic::ModelParams;
use adhoc_progress::experiments::{ExperimentPlan, Scheme, SweepAxis, SweepField, WindowSpec};
use adhoc_progress::simcore::Boundary;
use adhoc_progress::validation::{Criterion, ValidationConfig};

const DEFAULT_GUARD_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn new(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self {
                line: Some(n),
                message,
            } => write!(f, "line {n}: {message}"),
            Self {
                line: None,
                message,
            } => f.write_str(message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("expected csv or json, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum WindowSize {
    Nodes(f64),
    Side(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    boundary: String,
    guard_fraction: Option<f64>,
    size: WindowSize,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    pub sweep: Option<SweepAxis>,
    pub criteria: Vec<Criterion>,
    pub capture_trials: usize,
    pub scaling_grid_trials: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let validation = ValidationConfig::default();
        Self {
            params: ModelParams::default(),
            boundary: "torus".into(),
            guard_fraction: None,
            size: WindowSize::Nodes(1000.0),
            trials: 1000,
            seed: 1,
            schemes: vec![Scheme::Nfp, Scheme::Msr],
            sweep: None,
            criteria: Criterion::ALL.to_vec(),
            capture_trials: validation.capture_trials,
            scaling_grid_trials: validation.scaling_grid_trials,
            format: Format::Csv,
            out: None,
        }
    }
}

fn parse_number<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| format!("invalid value `{value}` for `{key}`: {e}"))
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl RunConfig {
    /// Parses configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen = HashSet::new();
        let mut sweep_field: Option<(usize, SweepField)> = None;
        let mut sweep_values: Option<(usize, Vec<f64>)> = None;
        let mut size_keys = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let n = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::at(n, format!("expected `key = value`, got `{line}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::at(n, format!("duplicate key `{key}`")));
            }
            let res: Result<(), String> = (|| {
                match key {
                    "lambda" => cfg.params.lambda = parse_number(key, value)?,
                    "p" => cfg.params.p = parse_number(key, value)?,
                    "alpha" => cfg.params.alpha = parse_number(key, value)?,
                    "beta" => cfg.params.beta = parse_number(key, value)?,
                    "antennas" => cfg.params.antennas = parse_number(key, value)?,
                    "noise" => cfg.params.noise = parse_number(key, value)?,
                    "boundary" => cfg.boundary = value.to_string(),
                    "guard_fraction" => cfg.guard_fraction = Some(parse_number(key, value)?),
                    "nodes" => {
                        cfg.size = WindowSize::Nodes(parse_number(key, value)?);
                        size_keys.push(key);
                    }
                    "side" => {
                        cfg.size = WindowSize::Side(parse_number(key, value)?);
                        size_keys.push(key);
                    }
                    "trials" => cfg.trials = parse_number(key, value)?,
                    "seed" => cfg.seed = parse_number(key, value)?,
                    "capture_trials" => cfg.capture_trials = parse_number(key, value)?,
                    "scaling_grid_trials" => cfg.scaling_grid_trials = parse_number(key, value)?,
                    "schemes" => cfg.schemes = parse_schemes(value)?,
                    "criteria" => cfg.criteria = parse_criteria(value)?,
                    "sweep" => {
                        let field = SweepField::parse(value)
                            .ok_or_else(|| format!("unknown sweep field `{value}`"))?;
                        sweep_field = Some((n, field));
                    }
                    "values" => {
                        let values = split_list(value)
                            .map(|v| parse_number::<f64>(key, v))
                            .collect::<Result<Vec<_>, _>>()?;
                        sweep_values = Some((n, values));
                    }
                    "format" => cfg.format = value.parse()?,
                    "out" => cfg.out = Some(PathBuf::from(value)),
                    _ => return Err(format!("unknown key `{key}`")),
                }
                Ok(())
            })();
            res.map_err(|m| ConfigError::at(n, m))?;
        }
        if size_keys.len() > 1 {
            return Err(ConfigError::new("set either `nodes` or `side`, not both"));
        }
        cfg.sweep = match (sweep_field, sweep_values) {
            (None, None) => None,
            (Some((_, field)), Some((_, values))) => Some(SweepAxis { field, values }),
            (None, Some((n, _))) => {
                return Err(ConfigError::at(n, "`values` given without `sweep`"))
            }
            (Some((n, _)), None) => {
                return Err(ConfigError::at(n, "`sweep` given without `values`"))
            }
        };
        cfg.window()?;
        Ok(cfg)
    }

    pub fn window(&self) -> Result<WindowSpec, ConfigError> {
        let boundary = match self.boundary.as_str() {
            "torus" => Boundary::Torus,
            "torus_far_field" => Boundary::TorusFarField,
            "guard" => Boundary::Guard {
                fraction: self.guard_fraction.unwrap_or(DEFAULT_GUARD_FRACTION),
            },
            other => {
                return Err(ConfigError::new(format!(
                "invalid value `{other}` for `boundary`: expected torus, torus_far_field or guard"
            )))
            }
        };
        if self.guard_fraction.is_some() && !matches!(boundary, Boundary::Guard { .. }) {
            return Err(ConfigError::new(
                "`guard_fraction` requires `boundary = guard`",
            ));
        }
        Ok(match self.size {
            WindowSize::Nodes(nodes) => WindowSpec::ExpectedNodes { nodes, boundary },
            WindowSize::Side(side) => WindowSpec::Side { side, boundary },
        })
    }

    /// Experiment plan, checked for validity.
    pub fn plan(&self) -> Result<ExperimentPlan, ConfigError> {
        let plan = ExperimentPlan {
            params: self.params,
            window: self.window()?,
            trials: self.trials,
            master_seed: self.seed,
            sweep: self.sweep.clone(),
            schemes: self.schemes.clone(),
        };
        plan.validate()
            .map_err(|e| ConfigError::new(e.to_string()))?;
        Ok(plan)
    }

    pub fn validation(&self) -> Result<ValidationConfig, ConfigError> {
        let nodes = match self.size {
            WindowSize::Nodes(nodes) => nodes,
            WindowSize::Side(_) => {
                return Err(ConfigError::new(
                    "validate sizes windows by `nodes`, not `side`",
                ))
            }
        };
        let cfg = ValidationConfig {
            master_seed: self.seed,
            trials: self.trials,
            capture_trials: self.capture_trials,
            scaling_grid_trials: self.scaling_grid_trials,
            nodes,
        };
        cfg.validate()
            .map_err(|e| ConfigError::new(e.to_string()))?;
        Ok(cfg)
    }
}

fn parse_schemes(value: &str) -> Result<Vec<Scheme>, String> {
    if value == "all" {
        return Ok(Scheme::ALL.to_vec());
    }
    let schemes = split_list(value)
        .map(|s| Scheme::parse(s).ok_or_else(|| format!("unknown scheme `{s}`")))
        .collect::<Result<Vec<_>, _>>()?;
    if schemes.is_empty() {
        return Err("`schemes` is empty".into());
    }
    Ok(schemes)
}

fn parse_criteria(value: &str) -> Result<Vec<Criterion>, String> {
    if value == "all" {
        return Ok(Criterion::ALL.to_vec());
    }
    let criteria = split_list(value)
        .map(|s| Criterion::parse(s).ok_or_else(|| format!("unknown criterion `{s}`")))
        .collect::<Result<Vec<_>, _>>()?;
    if criteria.is_empty() {
        return Err("`criteria` is empty".into());
    }
    Ok(criteria)
}
