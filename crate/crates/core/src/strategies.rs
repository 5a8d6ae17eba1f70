//! Seed-selection policies.
//!
//! Benchmarks rank candidates at random or by static eigenvector
//! centrality; the "picky" variants only consider nodes with at least one
//! infectious neighbor. The social policies rank picky candidates by a
//! depth-limited expected number of adoptions: the probability that `v`
//! accepts, times one plus the conditional scores of its seedable neighbors
//! assuming `v` (and every node above it in the recursion) has adopted.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::diffusion::{infection_probability, DiffusionState, NodeParams, NodeState};
use crate::error::{Error, Result};
use crate::graph::{CentralityVector, Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeederKind {
    Random,
    Gec,
    PickyRandom,
    PickyGec,
    /// Social scheduling score with the given recursion depth.
    Social(u8),
}

impl SeederKind {
    pub const ALL: [SeederKind; 7] = [
        SeederKind::Random,
        SeederKind::Gec,
        SeederKind::PickyRandom,
        SeederKind::PickyGec,
        SeederKind::Social(0),
        SeederKind::Social(1),
        SeederKind::Social(2),
    ];

    pub fn is_picky(self) -> bool {
        !matches!(self, SeederKind::Random | SeederKind::Gec)
    }

    pub fn is_social(self) -> bool {
        matches!(self, SeederKind::Social(_))
    }
}

impl fmt::Display for SeederKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeederKind::Random => f.write_str("random"),
            SeederKind::Gec => f.write_str("gec"),
            SeederKind::PickyRandom => f.write_str("picky_random"),
            SeederKind::PickyGec => f.write_str("picky_gec"),
            SeederKind::Social(k) => write!(f, "social_{k}"),
        }
    }
}

impl FromStr for SeederKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let kind = match norm.as_str() {
            "random" => SeederKind::Random,
            "gec" => SeederKind::Gec,
            "picky_random" => SeederKind::PickyRandom,
            "picky_gec" => SeederKind::PickyGec,
            other => {
                let depth = other
                    .strip_prefix("picky_social_")
                    .or_else(|| other.strip_prefix("social_"))
                    .and_then(|d| d.parse::<u8>().ok())
                    .ok_or_else(|| Error::invalid(format!("unknown seeding method {s:?}")))?;
                SeederKind::Social(depth)
            }
        };
        Ok(kind)
    }
}

/// Mean and standard deviation of the per-node acceptance parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamDistribution {
    pub theta_mean: f64,
    pub theta_std: f64,
    pub pmax_mean: f64,
    pub pmax_std: f64,
}

impl ParamDistribution {
    pub fn validate(&self) -> Result<()> {
        if self.theta_mean.is_nan() || self.theta_mean < 1.0 {
            return Err(Error::invalid(format!(
                "theta mean {} must be at least 1",
                self.theta_mean
            )));
        }
        if !(0.0..=1.0).contains(&self.pmax_mean) {
            return Err(Error::invalid(format!(
                "p_max mean {} outside [0, 1]",
                self.pmax_mean
            )));
        }
        if self.theta_std.is_nan() || self.pmax_std.is_nan() || self.theta_std < 0.0 || self.pmax_std < 0.0 {
            return Err(Error::invalid("standard deviations must be non-negative"));
        }
        if !self.theta_std.is_finite() || !self.pmax_std.is_finite() {
            return Err(Error::invalid("standard deviations must be finite"));
        }
        Ok(())
    }

    pub fn is_degenerate(&self) -> bool {
        self.theta_std == 0.0 && self.pmax_std == 0.0
    }
}

/// One draw per node: `theta` is rounded half-up and clamped to at least 1,
/// `p_max` is clamped to `[0, 1]`. `p_min` is copied as given.
pub fn draw_estimates<R: Rng + ?Sized>(
    dist: &ParamDistribution,
    p_min: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<NodeParams>> {
    dist.validate()?;
    if !(0.0..=1.0).contains(&p_min) {
        return Err(Error::invalid(format!("p_min {p_min} outside [0, 1]")));
    }
    let theta_dist = Normal::new(dist.theta_mean, dist.theta_std)
        .map_err(|e| Error::invalid(e.to_string()))?;
    let pmax_dist =
        Normal::new(dist.pmax_mean, dist.pmax_std).map_err(|e| Error::invalid(e.to_string()))?;
    Ok((0..n)
        .map(|_| {
            let theta = (theta_dist.sample(rng) + 0.5).floor().clamp(1.0, u32::MAX as f64) as u32;
            let p_max = pmax_dist.sample(rng).clamp(0.0, 1.0);
            NodeParams { p_max, theta, p_min }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ViewMode {
    Known,
    Estimated { theta_std: f64, pmax_std: f64 },
}

/// Per-node parameters as the seeder sees them.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamView {
    pub mode: ViewMode,
    params: Vec<NodeParams>,
}

impl ParamView {
    pub fn known(true_params: &[NodeParams]) -> Self {
        ParamView {
            mode: ViewMode::Known,
            params: true_params.to_vec(),
        }
    }

    /// Independent draws from the same means as the true parameters, with
    /// the estimate spreads given by `mode`.
    pub fn estimated<R: Rng + ?Sized>(
        true_dist: &ParamDistribution,
        theta_std: f64,
        pmax_std: f64,
        p_min: f64,
        n: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let dist = ParamDistribution {
            theta_std,
            pmax_std,
            ..*true_dist
        };
        Ok(ParamView {
            mode: ViewMode::Estimated {
                theta_std,
                pmax_std,
            },
            params: draw_estimates(&dist, p_min, n, rng)?,
        })
    }

    #[inline]
    pub fn params(&self, v: NodeId) -> &NodeParams {
        &self.params[v.index()]
    }

    pub fn all(&self) -> &[NodeParams] {
        &self.params
    }
}

/// Nodes a policy may seed this period.
pub fn candidate_set(kind: SeederKind, ds: &DiffusionState, g: &Graph) -> Vec<NodeId> {
    g.nodes()
        .filter(|&v| {
            ds.state(v) == NodeState::NonInfected && (!kind.is_picky() || ds.infectious_count(v) > 0)
        })
        .collect()
}

/// Recursive social score of `v` at depth `k`, counting `hypothetical`
/// nodes as already infectious.
pub fn social_score(
    v: NodeId,
    k: u32,
    ds: &DiffusionState,
    g: &Graph,
    view: &ParamView,
    hypothetical: &[NodeId],
) -> Result<f64> {
    let state = ds.state(v);
    if state != NodeState::NonInfected {
        return Err(Error::IllegalAttempt { node: v, state });
    }
    if hypothetical.contains(&v) {
        return Err(Error::invalid(format!("node {v} is in its own hypothetical set")));
    }
    let mut hyp = hypothetical.to_vec();
    Ok(score_recursive(v, k, ds, g, view, &mut hyp))
}

fn score_recursive(
    v: NodeId,
    k: u32,
    ds: &DiffusionState,
    g: &Graph,
    view: &ParamView,
    hyp: &mut Vec<NodeId>,
) -> f64 {
    let p = infection_probability(view.params(v), ds.infectious_neighbor_count(g, v, hyp));
    if k == 0 {
        return p;
    }
    let depth = hyp.len();
    let mut total = 1.0;
    for &u in g.neighbors(v) {
        if ds.state(u) == NodeState::NonInfected && !hyp.contains(&u) {
            hyp.push(v);
            total += score_recursive(u, k - 1, ds, g, view, hyp);
            hyp.truncate(depth);
        }
    }
    p * total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredCandidate {
    pub node: NodeId,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub node: NodeId,
    pub score: f64,
    /// Chosen uniformly because the policy had no candidates.
    pub fallback: bool,
}

/// Reusable per-run scoring buffers.
///
/// Depth 0-2 social scores use a closed form over precomputed per-node
/// terms; deeper scores go through [`social_score`].
#[derive(Debug, Clone)]
pub struct Seeder {
    kind: SeederKind,
    q1: Vec<f64>,
    q2_gain: Vec<f64>,
    q1_sum: Vec<f64>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl Seeder {
    pub fn new(kind: SeederKind, n: usize) -> Self {
        let social2 = matches!(kind, SeederKind::Social(2));
        let social = kind.is_social();
        Seeder {
            kind,
            q1: if social { vec![0.0; n] } else { Vec::new() },
            q2_gain: if social2 { vec![0.0; n] } else { Vec::new() },
            q1_sum: if social2 { vec![0.0; n] } else { Vec::new() },
            stamp: if social2 { vec![0; n] } else { Vec::new() },
            epoch: 0,
        }
    }

    pub fn kind(&self) -> SeederKind {
        self.kind
    }

    /// Scores every candidate of a social policy.
    pub fn social_scores(
        &mut self,
        candidates: &[NodeId],
        ds: &DiffusionState,
        g: &Graph,
        view: &ParamView,
    ) -> Vec<ScoredCandidate> {
        let SeederKind::Social(depth) = self.kind else {
            panic!("social_scores called for {}", self.kind);
        };
        let p_at = |v: NodeId, extra: usize| {
            infection_probability(view.params(v), ds.infectious_count(v) + extra)
        };
        match depth {
            0 => candidates
                .iter()
                .map(|&v| ScoredCandidate {
                    node: v,
                    score: p_at(v, 0),
                })
                .collect(),
            1 | 2 => {
                // q1(u) = p(u | one more infectious neighbor), the conditional
                // probability of a seedable neighbor once its parent adopted.
                for v in g.nodes() {
                    if ds.state(v) == NodeState::NonInfected {
                        self.q1[v.index()] = p_at(v, 1);
                    }
                }
                if depth == 2 {
                    self.prepare_level2(ds, g, view);
                }
                candidates
                    .iter()
                    .map(|&v| {
                        let p = p_at(v, 0);
                        let score = if p == 0.0 {
                            0.0
                        } else if depth == 1 {
                            p * (1.0 + self.level1_sum(v, ds, g))
                        } else {
                            p * (1.0 + self.level2_sum(v, ds, g))
                        };
                        ScoredCandidate { node: v, score }
                    })
                    .collect()
            }
            k => candidates
                .iter()
                .map(|&v| ScoredCandidate {
                    node: v,
                    score: social_score(v, k as u32, ds, g, view, &[])
                        .expect("candidates are non-infected"),
                })
                .collect(),
        }
    }

    fn prepare_level2(&mut self, ds: &DiffusionState, g: &Graph, view: &ParamView) {
        for v in g.nodes() {
            if ds.state(v) == NodeState::NonInfected {
                let b = ds.infectious_count(v);
                self.q2_gain[v.index()] =
                    infection_probability(view.params(v), b + 2) - self.q1[v.index()];
                self.q1_sum[v.index()] = g
                    .neighbors(v)
                    .iter()
                    .filter(|u| ds.state(**u) == NodeState::NonInfected)
                    .map(|u| self.q1[u.index()])
                    .sum();
            }
        }
    }

    /// Depth-2 scores of every candidate that can reach the top `m`.
    ///
    /// Replacing the common-neighbor gain of each pair by the gain over all
    /// of `u`'s seedable neighbors gives a cheap upper bound; exact scores
    /// are computed in bound order until the next bound falls below the
    /// `m`-th best exact score. Survivors keep candidate order.
    fn social2_top(
        &mut self,
        candidates: &[NodeId],
        m: usize,
        ds: &DiffusionState,
        g: &Graph,
        view: &ParamView,
    ) -> Vec<ScoredCandidate> {
        for v in g.nodes() {
            if ds.state(v) == NodeState::NonInfected {
                self.q1[v.index()] =
                    infection_probability(view.params(v), ds.infectious_count(v) + 1);
            }
        }
        self.prepare_level2(ds, g, view);
        let seedable = |u: &&NodeId| ds.state(**u) == NodeState::NonInfected;
        // per-node gain over all seedable neighbors
        let gain_all: Vec<f64> = g
            .nodes()
            .map(|u| {
                if ds.state(u) != NodeState::NonInfected {
                    return 0.0;
                }
                g.neighbors(u)
                    .iter()
                    .filter(seedable)
                    .map(|w| self.q2_gain[w.index()])
                    .sum()
            })
            .collect();
        let mut bounded: Vec<(f64, usize)> = candidates
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let p = infection_probability(view.params(v), ds.infectious_count(v));
                if p == 0.0 {
                    return (0.0, i);
                }
                let (q1_v, gain_v) = (self.q1[v.index()], self.q2_gain[v.index()]);
                let sum: f64 = g
                    .neighbors(v)
                    .iter()
                    .filter(seedable)
                    .map(|u| {
                        let u = u.index();
                        let inner = self.q1_sum[u] - q1_v + (gain_all[u] - gain_v).max(0.0);
                        self.q1[u] * (1.0 + inner)
                    })
                    .sum();
                (p * (1.0 + sum), i)
            })
            .collect();
        bounded.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut exact: Vec<(usize, f64)> = Vec::new();
        // ascending buffer of the best `m` exact scores
        let mut best: Vec<f64> = Vec::with_capacity(m + 1);
        for &(bound, i) in &bounded {
            if best.len() == m {
                let threshold = best[0];
                if bound < threshold - 1e-9 * (1.0 + threshold.abs()) {
                    break;
                }
            }
            let v = candidates[i];
            let score = if bound == 0.0 {
                0.0
            } else {
                let p = infection_probability(view.params(v), ds.infectious_count(v));
                p * (1.0 + self.level2_sum(v, ds, g))
            };
            exact.push((i, score));
            let pos = best.partition_point(|&x| x < score);
            best.insert(pos, score);
            if best.len() > m {
                best.remove(0);
            }
        }
        let threshold = best.first().copied().unwrap_or(f64::NEG_INFINITY);
        exact.retain(|&(_, s)| s >= threshold);
        exact.sort_by_key(|&(i, _)| i);
        exact
            .into_iter()
            .map(|(i, score)| ScoredCandidate {
                node: candidates[i],
                score,
            })
            .collect()
    }

    fn level1_sum(&self, v: NodeId, ds: &DiffusionState, g: &Graph) -> f64 {
        g.neighbors(v)
            .iter()
            .filter(|u| ds.state(**u) == NodeState::NonInfected)
            .map(|u| self.q1[u.index()])
            .sum()
    }

    // Sum over seedable u ~ v of q1(u) * (1 + sum over seedable w ~ u, w != v
    // of p(w | u, v)). p(w | u, v) is q1(w) plus the q2 gain when w also
    // neighbors v, so the inner sum is q1_sum(u) - q1(v) + gains on the
    // common seedable neighbors of u and v.
    fn level2_sum(&mut self, v: NodeId, ds: &DiffusionState, g: &Graph) -> f64 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let nv = g.neighbors(v);
        for w in nv {
            self.stamp[w.index()] = self.epoch;
        }
        let q1_v = self.q1[v.index()];
        let mut total = 0.0;
        for &u in nv {
            if ds.state(u) != NodeState::NonInfected {
                continue;
            }
            let nu = g.neighbors(u);
            let mut gain = 0.0;
            if nu.len() <= nv.len() {
                for w in nu {
                    if self.stamp[w.index()] == self.epoch
                        && ds.state(*w) == NodeState::NonInfected
                    {
                        gain += self.q2_gain[w.index()];
                    }
                }
            } else {
                for w in nv {
                    if *w != u
                        && ds.state(*w) == NodeState::NonInfected
                        && nu.binary_search(w).is_ok()
                    {
                        gain += self.q2_gain[w.index()];
                    }
                }
            }
            let inner = self.q1_sum[u.index()] - q1_v + gain;
            total += self.q1[u.index()] * (1.0 + inner);
        }
        total
    }

    /// Picks up to `m_s` nodes to seed this period, best first.
    pub fn select<R: Rng + ?Sized>(
        &mut self,
        m_s: usize,
        ds: &DiffusionState,
        g: &Graph,
        view: &ParamView,
        centrality: &CentralityVector,
        rng: &mut R,
    ) -> Vec<Selection> {
        if m_s == 0 || ds.non_infected_count() == 0 {
            return Vec::new();
        }
        let candidates = candidate_set(self.kind, ds, g);
        if candidates.is_empty() {
            let pool = candidate_set(SeederKind::Random, ds, g);
            return uniform_pick(&pool, m_s, rng)
                .into_iter()
                .map(|node| Selection {
                    node,
                    score: 0.0,
                    fallback: true,
                })
                .collect();
        }
        let ranked: Vec<ScoredCandidate> = match self.kind {
            SeederKind::Random | SeederKind::PickyRandom => {
                return uniform_pick(&candidates, m_s, rng)
                    .into_iter()
                    .map(|node| Selection {
                        node,
                        score: 0.0,
                        fallback: false,
                    })
                    .collect();
            }
            SeederKind::Gec | SeederKind::PickyGec => candidates
                .iter()
                .map(|&v| ScoredCandidate {
                    node: v,
                    score: centrality.score(v),
                })
                .collect(),
            SeederKind::Social(2) => self.social2_top(&candidates, m_s, ds, g, view),
            SeederKind::Social(_) => self.social_scores(&candidates, ds, g, view),
        };
        top_with_random_ties(ranked, m_s, rng)
            .into_iter()
            .map(|c| Selection {
                node: c.node,
                score: c.score,
                fallback: false,
            })
            .collect()
    }
}

/// One-shot selection with fresh buffers.
pub fn select<R: Rng + ?Sized>(
    kind: SeederKind,
    m_s: usize,
    ds: &DiffusionState,
    g: &Graph,
    view: &ParamView,
    centrality: &CentralityVector,
    rng: &mut R,
) -> Vec<Selection> {
    Seeder::new(kind, g.node_count()).select(m_s, ds, g, view, centrality, rng)
}

fn uniform_pick<R: Rng + ?Sized>(pool: &[NodeId], m: usize, rng: &mut R) -> Vec<NodeId> {
    let m = m.min(pool.len());
    rand::seq::index::sample(rng, pool.len(), m)
        .into_iter()
        .map(|i| pool[i])
        .collect()
}

/// The `m` highest-scoring candidates in descending order; equal scores are
/// ordered uniformly at random, including at the cut-off.
pub fn top_with_random_ties<R: Rng + ?Sized>(
    mut scored: Vec<ScoredCandidate>,
    m: usize,
    rng: &mut R,
) -> Vec<ScoredCandidate> {
    if m == 0 || scored.is_empty() {
        return Vec::new();
    }
    if m == 1 {
        // reservoir sample over the maxima
        let mut best = scored[0];
        let mut ties = 1u32;
        for &c in &scored[1..] {
            if c.score > best.score {
                best = c;
                ties = 1;
            } else if c.score == best.score {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = c;
                }
            }
        }
        return vec![best];
    }
    scored.shuffle(rng);
    scored.sort_by(|a, b| b.score.total_cmp(&a.score));
    scored.truncate(m);
    scored
}
