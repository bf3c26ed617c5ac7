use crate::analytic::ModelParams;
use crate::error::{invalid, Result};
use crate::simcore::{Boundary, SimWindow};

/// Smallest trial count for which a confidence interval is reported.
pub const MIN_TRIALS: usize = 30;

/// How the simulation window is sized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowSpec {
    /// Side chosen so that `λ·side²` equals `nodes`.
    ExpectedNodes { nodes: f64, boundary: Boundary },
    /// Fixed side length.
    Side { side: f64, boundary: Boundary },
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec::ExpectedNodes {
            nodes: 1000.0,
            boundary: Boundary::Torus,
        }
    }
}

impl WindowSpec {
    pub fn resolve(&self, lambda: f64) -> Result<SimWindow> {
        let window = match *self {
            WindowSpec::ExpectedNodes { nodes, boundary } => {
                if !(nodes > 0.0 && nodes.is_finite()) {
                    return Err(invalid("nodes", format!("must be > 0, got {nodes}")));
                }
                SimWindow::for_expected_nodes(lambda, nodes, boundary)
            }
            WindowSpec::Side { side, boundary } => SimWindow { side, boundary },
        };
        window.validate()?;
        Ok(window)
    }

    pub fn boundary(&self) -> Boundary {
        match *self {
            WindowSpec::ExpectedNodes { boundary, .. } | WindowSpec::Side { boundary, .. } => {
                boundary
            }
        }
    }
}

/// Relay selection rule measured by an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Nfp,
    Msr,
    ModifiedMsr,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Nfp, Scheme::Msr, Scheme::ModifiedMsr];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Nfp => "nfp",
            Scheme::Msr => "msr",
            Scheme::ModifiedMsr => "modified_msr",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Scheme::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Model field that a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepField {
    P,
    Lambda,
    Alpha,
    Beta,
    Antennas,
    Noise,
}

impl SweepField {
    pub fn name(self) -> &'static str {
        match self {
            SweepField::P => "p",
            SweepField::Lambda => "lambda",
            SweepField::Alpha => "alpha",
            SweepField::Beta => "beta",
            SweepField::Antennas => "antennas",
            SweepField::Noise => "noise",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            SweepField::P,
            SweepField::Lambda,
            SweepField::Alpha,
            SweepField::Beta,
            SweepField::Antennas,
            SweepField::Noise,
        ]
        .into_iter()
        .find(|f| f.name() == s)
    }

    /// `params` with this field set to `value`, validated.
    pub fn apply(self, params: &ModelParams, value: f64) -> Result<ModelParams> {
        let mut out = *params;
        match self {
            SweepField::P => out.p = value,
            SweepField::Lambda => out.lambda = value,
            SweepField::Alpha => out.alpha = value,
            SweepField::Beta => out.beta = value,
            SweepField::Noise => out.noise = value,
            SweepField::Antennas => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(invalid(
                        "antennas",
                        format!("must be a positive integer, got {value}"),
                    ));
                }
                out.antennas = value as usize;
            }
        }
        out.validate()?;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub field: SweepField,
    pub values: Vec<f64>,
}

/// Everything needed to reproduce a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub params: ModelParams,
    pub window: WindowSpec,
    pub trials: usize,
    pub master_seed: u64,
    pub sweep: Option<SweepAxis>,
    pub schemes: Vec<Scheme>,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            window: WindowSpec::default(),
            trials: 1000,
            master_seed: 1,
            sweep: None,
            schemes: vec![Scheme::Nfp, Scheme::Msr],
        }
    }
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.window.resolve(self.params.lambda)?;
        if self.trials < MIN_TRIALS {
            return Err(invalid(
                "trials",
                format!("must be >= {MIN_TRIALS}, got {}", self.trials),
            ));
        }
        if self.schemes.is_empty() {
            return Err(invalid("schemes", "at least one scheme is required"));
        }
        if let Some(axis) = &self.sweep {
            for &v in &axis.values {
                axis.field.apply(&self.params, v)?;
            }
        }
        Ok(())
    }

    pub fn with_params(&self, params: ModelParams) -> Self {
        Self {
            params,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_window_holds_thousand_nodes() {
        let w = WindowSpec::default().resolve(1e-3).unwrap();
        assert!((w.side - 1000.0).abs() < 1e-9);
        assert_eq!(w.boundary, Boundary::Torus);
    }

    #[test]
    fn sweep_field_application() {
        let base = ModelParams::default();
        assert_eq!(SweepField::Antennas.apply(&base, 3.0).unwrap().antennas, 3);
        assert!(SweepField::Antennas.apply(&base, 2.5).is_err());
        assert!(SweepField::P.apply(&base, 1.0).is_err());
        assert_eq!(SweepField::parse("beta"), Some(SweepField::Beta));
        assert_eq!(Scheme::parse("modified_msr"), Some(Scheme::ModifiedMsr));
    }

    #[test]
    fn plan_validation() {
        let plan = ExperimentPlan::default();
        assert!(plan.validate().is_ok());
        assert!(ExperimentPlan {
            trials: 10,
            ..plan.clone()
        }
        .validate()
        .is_err());
        assert!(ExperimentPlan {
            schemes: vec![],
            ..plan.clone()
        }
        .validate()
        .is_err());
        let bad_sweep = ExperimentPlan {
            sweep: Some(SweepAxis {
                field: SweepField::Alpha,
                values: vec![3.0, 2.0],
            }),
            ..plan
        };
        assert!(bad_sweep.validate().is_err());
    }
}
