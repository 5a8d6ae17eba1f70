//! Brute-force reference for the social score, used to check the recursive
//! and closed-form scorers. Enumerates every chain `v, u, w, ...` of distinct
//! seedable nodes and sums the product of conditional acceptance
//! probabilities along each chain.

use crate::diffusion::{infection_probability, DiffusionState, NodeState};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::strategies::ParamView;

pub const ORACLE_MAX_NODES: usize = 12;

pub fn brute_force_expected_value(
    v: NodeId,
    k: u32,
    ds: &DiffusionState,
    g: &Graph,
    view: &ParamView,
) -> Result<f64> {
    if g.node_count() > ORACLE_MAX_NODES {
        return Err(Error::GraphTooLarge {
            nodes: g.node_count(),
            limit: ORACLE_MAX_NODES,
        });
    }
    let state = ds.state(v);
    if state != NodeState::NonInfected {
        return Err(Error::IllegalAttempt { node: v, state });
    }
    let mut chains: Vec<Vec<NodeId>> = vec![vec![v]];
    let mut frontier = chains.clone();
    for _ in 0..k {
        let mut next = Vec::new();
        for chain in &frontier {
            let last = *chain.last().unwrap();
            for u in g.nodes() {
                if is_adjacent(g, last, u)
                    && ds.state(u) == NodeState::NonInfected
                    && !chain.contains(&u)
                {
                    let mut extended = chain.clone();
                    extended.push(u);
                    next.push(extended);
                }
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(chains
        .iter()
        .map(|chain| {
            (0..chain.len())
                .map(|i| {
                    let node = chain[i];
                    let earlier = &chain[..i];
                    let n_plus = g
                        .nodes()
                        .filter(|&x| {
                            is_adjacent(g, node, x)
                                && (ds.state(x) == NodeState::InfectedInfectious
                                    || earlier.contains(&x))
                        })
                        .count();
                    infection_probability(view.params(node), n_plus)
                })
                .product::<f64>()
        })
        .sum())
}

fn is_adjacent(g: &Graph, a: NodeId, b: NodeId) -> bool {
    g.neighbors(a).contains(&b)
}
