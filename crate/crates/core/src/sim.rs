//! One seeding campaign: pre-seed, then period by period expire timers,
//! pick seeds, and offer each one until the budget runs out.

use std::ops::RangeInclusive;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diffusion::{infection_probability, DiffusionState, NodeParams};
use crate::error::{Error, Result};
use crate::graph::{CentralityVector, Graph, NodeId};
use crate::rng::{stream, Stream};
use crate::strategies::{draw_estimates, ParamDistribution, ParamView, SeederKind, Seeder, ViewMode};

/// Distribution of the true per-node acceptance parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub theta_mean: f64,
    pub theta_std: f64,
    pub pmax_mean: f64,
    pub pmax_std: f64,
    pub p_min: f64,
}

impl ParamSpec {
    pub fn distribution(&self) -> ParamDistribution {
        ParamDistribution {
            theta_mean: self.theta_mean,
            theta_std: self.theta_std,
            pmax_mean: self.pmax_mean,
            pmax_std: self.pmax_std,
        }
    }
}

impl Default for ParamSpec {
    fn default() -> Self {
        ParamSpec {
            theta_mean: 5.0,
            theta_std: 0.0,
            pmax_mean: 0.5,
            pmax_std: 0.0,
            p_min: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seeder: SeederKind,
    pub budget: usize,
    /// Seeds offered per period.
    pub m_s: usize,
    pub f_init_size: usize,
    pub t_inf: u32,
    pub params: ParamSpec,
    pub view: ViewMode,
    pub rng_seed: u64,
    /// Rescore after every attempt instead of once per period.
    pub rescore_each_attempt: bool,
    /// Redraw estimated parameters every period instead of once per run.
    pub redraw_view_each_period: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            seeder: SeederKind::Social(1),
            budget: 200,
            m_s: 1,
            f_init_size: 200,
            t_inf: 50,
            params: ParamSpec::default(),
            view: ViewMode::Known,
            rng_seed: 0,
            rescore_each_attempt: false,
            redraw_view_each_period: false,
        }
    }
}

impl SimConfig {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::invalid("budget must be at least 1"));
        }
        if self.m_s == 0 {
            return Err(Error::invalid("m_s must be at least 1"));
        }
        if self.t_inf == 0 {
            return Err(Error::invalid("t_inf must be at least 1"));
        }
        if self.f_init_size > g.node_count() {
            return Err(Error::invalid(format!(
                "f_init {} exceeds node count {}",
                self.f_init_size,
                g.node_count()
            )));
        }
        self.params.distribution().validate()?;
        if !(0.0..=1.0).contains(&self.params.p_min) {
            return Err(Error::invalid(format!(
                "p_min {} outside [0, 1]",
                self.params.p_min
            )));
        }
        if let ViewMode::Estimated {
            theta_std,
            pmax_std,
        } = self.view
        {
            if !(theta_std >= 0.0 && pmax_std >= 0.0) {
                return Err(Error::invalid("estimate spreads must be non-negative"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub period: i64,
    pub node: NodeId,
    pub n_plus_at_attempt: usize,
    pub probability_used: f64,
    pub success: bool,
    pub node_centrality: f64,
    pub fallback: bool,
    /// Seeder's ranking score (0 for random picks).
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    BudgetExhausted,
    NoUninfectedLeft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    pub attempts: Vec<AttemptRecord>,
    pub successes: usize,
    pub failures: usize,
    pub success_ratio: f64,
    pub periods_elapsed: i64,
    pub terminated_by: Termination,
    /// Pre-seeded nodes, ascending.
    pub pre_seeded: Vec<NodeId>,
    /// FNV-1a digest of the true per-node parameters.
    pub params_fingerprint: u64,
}

impl SimTrace {
    pub fn fallback_rate(&self) -> f64 {
        if self.attempts.is_empty() {
            0.0
        } else {
            self.attempts.iter().filter(|a| a.fallback).count() as f64 / self.attempts.len() as f64
        }
    }
}

/// Draws the true per-node parameters of a run.
pub fn draw_true_params(spec: &ParamSpec, n: usize, seed: u64) -> Result<Vec<NodeParams>> {
    draw_estimates(
        &spec.distribution(),
        spec.p_min,
        n,
        &mut stream(seed, Stream::TrueParams),
    )
}

fn build_view<R: Rng + ?Sized>(
    cfg: &SimConfig,
    true_params: &[NodeParams],
    rng: &mut R,
) -> Result<ParamView> {
    match cfg.view {
        ViewMode::Known => Ok(ParamView::known(true_params)),
        ViewMode::Estimated {
            theta_std,
            pmax_std,
        } => ParamView::estimated(
            &cfg.params.distribution(),
            theta_std,
            pmax_std,
            cfg.params.p_min,
            true_params.len(),
            rng,
        ),
    }
}

pub fn run_simulation(cfg: &SimConfig, g: &Graph, centrality: &CentralityVector) -> Result<SimTrace> {
    cfg.validate(g)?;
    if centrality.scores.len() != g.node_count() {
        return Err(Error::invalid("centrality vector does not match graph"));
    }
    let n = g.node_count();
    let true_params = draw_true_params(&cfg.params, n, cfg.rng_seed)?;
    let mut view_rng = stream(cfg.rng_seed, Stream::View);
    let mut view = build_view(cfg, &true_params, &mut view_rng)?;
    let mut tie_rng = stream(cfg.rng_seed, Stream::TieBreak);
    let mut outcome_rng = stream(cfg.rng_seed, Stream::Outcomes);

    let mut ds = DiffusionState::new(g, cfg.t_inf)?;
    let pre_seeded = ds.pre_seed(g, cfg.f_init_size, &mut stream(cfg.rng_seed, Stream::PreSeed))?;
    let mut seeder = Seeder::new(cfg.seeder, n);

    let mut attempts = Vec::with_capacity(cfg.budget.min(n));
    let mut budget = cfg.budget;
    let mut successes = 0;
    let terminated_by = loop {
        if budget == 0 {
            break Termination::BudgetExhausted;
        }
        if ds.non_infected_count() == 0 {
            break Termination::NoUninfectedLeft;
        }
        ds.advance_period(g);
        if cfg.redraw_view_each_period && matches!(cfg.view, ViewMode::Estimated { .. }) {
            view = build_view(cfg, &true_params, &mut view_rng)?;
        }
        let quota = cfg.m_s.min(budget);
        let rounds = if cfg.rescore_each_attempt { quota } else { 1 };
        let per_round = if cfg.rescore_each_attempt { 1 } else { quota };
        for _ in 0..rounds {
            let picks = seeder.select(per_round, &ds, g, &view, centrality, &mut tie_rng);
            if picks.is_empty() {
                break;
            }
            for pick in picks {
                let v = pick.node;
                let n_plus = ds.infectious_count(v);
                let p = infection_probability(&true_params[v.index()], n_plus);
                let success = outcome_rng.random::<f64>() < p;
                ds.record_attempt(g, v, success)?;
                budget -= 1;
                successes += success as usize;
                attempts.push(AttemptRecord {
                    period: ds.current_period(),
                    node: v,
                    n_plus_at_attempt: n_plus,
                    probability_used: p,
                    success,
                    node_centrality: centrality.score(v),
                    fallback: pick.fallback,
                    score: pick.score,
                });
            }
        }
    };

    let total = attempts.len();
    Ok(SimTrace {
        successes,
        failures: total - successes,
        success_ratio: if total == 0 {
            0.0
        } else {
            successes as f64 / total as f64
        },
        periods_elapsed: ds.current_period(),
        terminated_by,
        pre_seeded,
        params_fingerprint: fingerprint(&true_params),
        attempts,
    })
}

fn fingerprint(params: &[NodeParams]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0100_0000_01b3;
    let mut h = OFFSET;
    for p in params {
        for word in [p.p_max.to_bits(), p.theta as u64, p.p_min.to_bits()] {
            for byte in word.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        }
    }
    h
}

/// Mean centrality of the nodes attempted in periods `window`.
pub fn mean_seeded_centrality(trace: &SimTrace, window: RangeInclusive<i64>) -> Result<f64> {
    let (sum, count) = trace
        .attempts
        .iter()
        .filter(|a| window.contains(&a.period))
        .fold((0.0, 0usize), |(s, c), a| (s + a.node_centrality, c + 1));
    if count == 0 {
        return Err(Error::Empty(format!(
            "no attempts in periods {}..={}",
            window.start(),
            window.end()
        )));
    }
    Ok(sum / count as f64)
}

/// Cumulative success ratio at the end of every period with attempts.
pub fn cumulative_success_curve(trace: &SimTrace) -> Vec<(i64, f64)> {
    let mut curve: Vec<(i64, f64)> = Vec::new();
    let (mut tried, mut won) = (0usize, 0usize);
    for a in &trace.attempts {
        tried += 1;
        won += a.success as usize;
        let ratio = won as f64 / tried as f64;
        match curve.last_mut() {
            Some(last) if last.0 == a.period => last.1 = ratio,
            _ => curve.push((a.period, ratio)),
        }
    }
    curve
}
