//! Per-node adoption lifecycle and the acceptance probability of a seeding
//! offer.
//!
//! States and legal transitions:
//!
//! ```text
//!   NonInfected ──seed accepted──▶ InfectedInfectious ──t_inf elapsed──▶ InfectedNonInfectious
//!        │
//!        └──────seed rejected───▶ SeedingFailed
//! ```
//!
//! `InfectedNonInfectious` and `SeedingFailed` are absorbing.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum NodeState {
    NonInfected = 0,
    InfectedInfectious = 1,
    InfectedNonInfectious = 2,
    SeedingFailed = 3,
}

impl NodeState {
    /// Whether `self -> to` is a transition of the lifecycle.
    pub fn can_transition_to(self, to: NodeState) -> bool {
        use NodeState::*;
        matches!(
            (self, to),
            (NonInfected, InfectedInfectious)
                | (NonInfected, SeedingFailed)
                | (InfectedInfectious, InfectedNonInfectious)
        )
    }
}

/// Acceptance parameters of one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeParams {
    /// Acceptance probability once `theta` neighbors are infectious.
    pub p_max: f64,
    /// Number of infectious neighbors at which acceptance saturates.
    pub theta: u32,
    /// Acceptance probability with no infectious neighbors.
    pub p_min: f64,
}

impl NodeParams {
    pub fn new(p_max: f64, theta: u32, p_min: f64) -> Result<Self> {
        let params = NodeParams { p_max, theta, p_min };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta < 1 {
            return Err(Error::invalid("theta must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.p_max) {
            return Err(Error::invalid(format!("p_max {} outside [0, 1]", self.p_max)));
        }
        if !(0.0..=1.0).contains(&self.p_min) {
            return Err(Error::invalid(format!("p_min {} outside [0, 1]", self.p_min)));
        }
        Ok(())
    }
}

/// Probability that a node accepts an offer while `n_plus` of its neighbors
/// are infectious: `p_min + (1 - p_min) * p_max * min(theta, n_plus) / theta`.
#[inline]
pub fn infection_probability(params: &NodeParams, n_plus: usize) -> f64 {
    let social = params.p_max * (n_plus.min(params.theta as usize) as f64) / params.theta as f64;
    params.p_min + (1.0 - params.p_min) * social
}

/// Mutable lifecycle state of one simulation run.
///
/// Also tracks, per node, how many neighbors are currently infectious, so
/// that `N_v^+` lookups are O(1).
#[derive(Debug, Clone)]
pub struct DiffusionState {
    states: Vec<NodeState>,
    infected_at: Vec<Option<i64>>,
    infectious_neighbors: Vec<u32>,
    current_period: i64,
    t_inf: u32,
    non_infected: usize,
    expiry: BinaryHeap<Reverse<(i64, NodeId)>>,
}

impl DiffusionState {
    pub fn new(g: &Graph, t_inf: u32) -> Result<Self> {
        if t_inf == 0 {
            return Err(Error::invalid("t_inf must be at least 1"));
        }
        let n = g.node_count();
        Ok(DiffusionState {
            states: vec![NodeState::NonInfected; n],
            infected_at: vec![None; n],
            infectious_neighbors: vec![0; n],
            current_period: 0,
            t_inf,
            non_infected: n,
            expiry: BinaryHeap::new(),
        })
    }

    #[inline]
    pub fn state(&self, v: NodeId) -> NodeState {
        self.states[v.index()]
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    #[inline]
    pub fn infected_at(&self, v: NodeId) -> Option<i64> {
        self.infected_at[v.index()]
    }

    #[inline]
    pub fn current_period(&self) -> i64 {
        self.current_period
    }

    #[inline]
    pub fn t_inf(&self) -> u32 {
        self.t_inf
    }

    /// Number of nodes still in `NonInfected`.
    #[inline]
    pub fn non_infected_count(&self) -> usize {
        self.non_infected
    }

    /// Infectious neighbors of `v` in the current state.
    #[inline]
    pub fn infectious_count(&self, v: NodeId) -> usize {
        self.infectious_neighbors[v.index()] as usize
    }

    /// `|N_v^+|` where nodes in `hypothetical` also count as infectious.
    pub fn infectious_neighbor_count(&self, g: &Graph, v: NodeId, hypothetical: &[NodeId]) -> usize {
        let extra = hypothetical
            .iter()
            .enumerate()
            .filter(|&(i, &h)| {
                self.state(h) != NodeState::InfectedInfectious
                    && !hypothetical[..i].contains(&h)
                    && g.has_edge(v, h)
            })
            .count();
        self.infectious_count(v) + extra
    }

    /// Infects `f_init_size` uniformly chosen nodes with infection times drawn
    /// uniformly from `[-(t_inf - 1), 0]`. Returns the chosen nodes in
    /// ascending order.
    pub fn pre_seed<R: Rng + ?Sized>(
        &mut self,
        g: &Graph,
        f_init_size: usize,
        rng: &mut R,
    ) -> Result<Vec<NodeId>> {
        let n = g.node_count();
        if f_init_size > n {
            return Err(Error::invalid(format!(
                "pre-seed size {f_init_size} exceeds node count {n}"
            )));
        }
        if f_init_size > self.non_infected || self.non_infected != n {
            return Err(Error::invalid("pre-seeding requires a fresh state"));
        }
        let mut chosen: Vec<NodeId> = rand::seq::index::sample(rng, n, f_init_size)
            .into_iter()
            .map(NodeId::from)
            .collect();
        chosen.sort_unstable();
        let window = self.t_inf as i64;
        for &v in &chosen {
            let at = self.current_period - rng.random_range(0..window);
            self.infect(g, v, at);
        }
        Ok(chosen)
    }

    /// Records the outcome of a seeding offer to `v`.
    pub fn record_attempt(&mut self, g: &Graph, v: NodeId, success: bool) -> Result<()> {
        let state = self.state(v);
        if state != NodeState::NonInfected {
            return Err(Error::IllegalAttempt { node: v, state });
        }
        if success {
            self.infect(g, v, self.current_period);
        } else {
            self.states[v.index()] = NodeState::SeedingFailed;
            self.non_infected -= 1;
        }
        Ok(())
    }

    /// Moves to the next period, then expires every infectious node whose
    /// infection is at least `t_inf` periods old. Returns the expired nodes.
    pub fn advance_period(&mut self, g: &Graph) -> Vec<NodeId> {
        self.current_period += 1;
        let mut expired = Vec::new();
        while let Some(&Reverse((due, v))) = self.expiry.peek() {
            if due > self.current_period {
                break;
            }
            self.expiry.pop();
            self.states[v.index()] = NodeState::InfectedNonInfectious;
            for u in g.neighbors(v) {
                self.infectious_neighbors[u.index()] -= 1;
            }
            expired.push(v);
        }
        expired
    }

    fn infect(&mut self, g: &Graph, v: NodeId, at: i64) {
        self.states[v.index()] = NodeState::InfectedInfectious;
        self.infected_at[v.index()] = Some(at);
        self.non_infected -= 1;
        for u in g.neighbors(v) {
            self.infectious_neighbors[u.index()] += 1;
        }
        self.expiry.push(Reverse((at + self.t_inf as i64, v)));
    }
}
