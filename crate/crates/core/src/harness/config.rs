use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{ParamSpec, SimConfig};
use crate::strategies::{SeederKind, ViewMode};

pub const MAX_SOCIAL_DEPTH: u8 = 2;

/// Experiment configuration as read from JSON. Missing keys take the
/// baseline values (f_init 200, budget 200, theta 5, p_max 0.5, t_inf 50).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Dataset name or path to an edge-list file.
    pub network: String,
    pub sample_size: Option<usize>,
    pub f_init: usize,
    pub budget: usize,
    pub m_s: usize,
    pub t_inf: u32,
    pub theta_mean: f64,
    pub theta_std_true: f64,
    pub pmax_mean: f64,
    pub pmax_std_true: f64,
    pub p_min: f64,
    pub view: ViewMode,
    pub method: String,
    pub social_depth: u8,
    pub replications: usize,
    pub seed: u64,
    pub rescore_each_attempt: bool,
    pub redraw_view_each_period: bool,
    pub dimension: Option<String>,
    pub values: Option<Vec<f64>>,
    pub methods: Option<Vec<String>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let sim = SimConfig::default();
        ExperimentConfig {
            network: "wiki-vote".into(),
            sample_size: None,
            f_init: sim.f_init_size,
            budget: sim.budget,
            m_s: sim.m_s,
            t_inf: sim.t_inf,
            theta_mean: sim.params.theta_mean,
            theta_std_true: sim.params.theta_std,
            pmax_mean: sim.params.pmax_mean,
            pmax_std_true: sim.params.pmax_std,
            p_min: sim.params.p_min,
            view: ViewMode::Known,
            method: "social".into(),
            social_depth: 1,
            replications: 400,
            seed: 0,
            rescore_each_attempt: false,
            redraw_view_each_period: false,
            dimension: None,
            values: None,
            methods: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolves a method name; a bare `social` takes `social_depth`.
    /// Depths above [`MAX_SOCIAL_DEPTH`] are rejected.
    pub fn resolve_method(&self, name: &str) -> Result<SeederKind> {
        let kind = if name.trim().eq_ignore_ascii_case("social")
            || name.trim().eq_ignore_ascii_case("picky_social")
        {
            SeederKind::Social(self.social_depth)
        } else {
            name.parse()?
        };
        match kind {
            SeederKind::Social(k) if k > MAX_SOCIAL_DEPTH => Err(Error::invalid(format!(
                "social depth {k} is not supported (0 to {MAX_SOCIAL_DEPTH})"
            ))),
            k => Ok(k),
        }
    }

    pub fn seeder(&self) -> Result<SeederKind> {
        self.resolve_method(&self.method)
    }

    /// Methods of a sweep; all seven when unspecified.
    pub fn sweep_methods(&self) -> Result<Vec<SeederKind>> {
        match &self.methods {
            None => Ok(SeederKind::ALL.to_vec()),
            Some(names) if names.is_empty() => Err(Error::invalid("methods list is empty")),
            Some(names) => names.iter().map(|m| self.resolve_method(m)).collect(),
        }
    }

    /// Simulation template (seed left at 0; replications set their own).
    pub fn sim_config(&self, seeder: SeederKind) -> SimConfig {
        SimConfig {
            seeder,
            budget: self.budget,
            m_s: self.m_s,
            f_init_size: self.f_init,
            t_inf: self.t_inf,
            params: ParamSpec {
                theta_mean: self.theta_mean,
                theta_std: self.theta_std_true,
                pmax_mean: self.pmax_mean,
                pmax_std: self.pmax_std_true,
                p_min: self.p_min,
            },
            view: self.view,
            rng_seed: self.seed,
            rescore_each_attempt: self.rescore_each_attempt,
            redraw_view_each_period: self.redraw_view_each_period,
        }
    }

    /// Copy with the swept `dimension` set to `value`.
    pub fn with_dimension(&self, dimension: &str, value: f64) -> Result<Self> {
        let mut cfg = self.clone();
        let count = |what: &str| -> Result<usize> {
            if value >= 0.0 && value.fract() == 0.0 && value.is_finite() {
                Ok(value as usize)
            } else {
                Err(Error::invalid(format!("{what} must be a non-negative integer, got {value}")))
            }
        };
        match dimension {
            "f_init" => cfg.f_init = count(dimension)?,
            "budget" => cfg.budget = count(dimension)?,
            "m_s" => cfg.m_s = count(dimension)?,
            "t_inf" => cfg.t_inf = count(dimension)? as u32,
            "sample_size" => cfg.sample_size = Some(count(dimension)?),
            "social_depth" => cfg.social_depth = count(dimension)? as u8,
            "theta_mean" => cfg.theta_mean = value,
            "theta_std_true" => cfg.theta_std_true = value,
            "pmax_mean" => cfg.pmax_mean = value,
            "pmax_std_true" => cfg.pmax_std_true = value,
            "p_min" => cfg.p_min = value,
            // spread of the estimate only
            "view_theta_std" | "view_pmax_std" => {
                let (mut theta_std, mut pmax_std) = match cfg.view {
                    ViewMode::Estimated {
                        theta_std,
                        pmax_std,
                    } => (theta_std, pmax_std),
                    ViewMode::Known => (0.0, 0.0),
                };
                if dimension == "view_theta_std" {
                    theta_std = value;
                } else {
                    pmax_std = value;
                }
                cfg.view = ViewMode::Estimated {
                    theta_std,
                    pmax_std,
                };
            }
            // same spread for the true values and for the seeder's estimate
            "theta_std" => {
                cfg.theta_std_true = value;
                cfg.view = estimated_with(cfg.view, Some(value), None);
            }
            "pmax_std" => {
                cfg.pmax_std_true = value;
                cfg.view = estimated_with(cfg.view, None, Some(value));
            }
            other => return Err(Error::invalid(format!("unknown sweep dimension {other:?}"))),
        }
        Ok(cfg)
    }
}

fn estimated_with(view: ViewMode, theta: Option<f64>, pmax: Option<f64>) -> ViewMode {
    let (t, p) = match view {
        ViewMode::Estimated {
            theta_std,
            pmax_std,
        } => (theta_std, pmax_std),
        ViewMode::Known => (0.0, 0.0),
    };
    ViewMode::Estimated {
        theta_std: theta.unwrap_or(t),
        pmax_std: pmax.unwrap_or(p),
    }
}

pub const SWEEP_DIMENSIONS: &[&str] = &[
    "f_init",
    "budget",
    "m_s",
    "t_inf",
    "sample_size",
    "social_depth",
    "theta_mean",
    "theta_std_true",
    "pmax_mean",
    "pmax_std_true",
    "p_min",
    "view_theta_std",
    "view_pmax_std",
    "theta_std",
    "pmax_std",
];
