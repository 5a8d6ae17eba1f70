//! Small deterministic and random graph families for tests, benches and
//! synthetic experiments.

use rand::Rng;

use crate::graph::Graph;

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(
        n,
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))),
    )
}

/// Star with node 0 as the center.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l)))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Chung-Lu graph with power-law expected degrees `w_i ∝ (i + i0)^(-1/(exponent-1))`,
/// scaled to `avg_degree` and capped at `max_degree`.
pub fn chung_lu_power_law<R: Rng + ?Sized>(
    n: usize,
    avg_degree: f64,
    exponent: f64,
    max_degree: usize,
    rng: &mut R,
) -> Graph {
    let alpha = 1.0 / (exponent - 1.0);
    let raw: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-alpha)).collect();
    let scale = avg_degree * n as f64 / raw.iter().sum::<f64>();
    let w: Vec<f64> = raw
        .iter()
        .map(|r| (r * scale).min(max_degree as f64))
        .collect();
    let total: f64 = w.iter().sum();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let p = (w[a] * w[b] / total).min(1.0);
            if rng.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Holme-Kim preferential attachment with triad formation: each new node
/// attaches `m` edges; after every preferential edge, with probability
/// `p_triad` the next edge closes a triangle instead.
pub fn holme_kim<R: Rng + ?Sized>(n: usize, m: usize, p_triad: f64, rng: &mut R) -> Graph {
    assert!(m >= 1 && n > m);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    // endpoint list for degree-proportional sampling
    let mut ends: Vec<usize> = Vec::new();
    let add = |adj: &mut Vec<Vec<usize>>, ends: &mut Vec<usize>, a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
        ends.push(a);
        ends.push(b);
    };
    for a in 0..=m {
        for b in a + 1..=m {
            add(&mut adj, &mut ends, a, b);
        }
    }
    for v in m + 1..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        let mut last: Option<usize> = None;
        while targets.len() < m {
            let candidate = match last {
                Some(t) if rng.random::<f64>() < p_triad => {
                    let nb = &adj[t];
                    nb[rng.random_range(0..nb.len())]
                }
                _ => ends[rng.random_range(0..ends.len())],
            };
            if candidate == v || targets.contains(&candidate) {
                last = None;
                continue;
            }
            targets.push(candidate);
            last = Some(candidate);
        }
        for t in targets {
            add(&mut adj, &mut ends, v, t);
        }
    }
    Graph::from_edges(
        n,
        adj.iter()
            .enumerate()
            .flat_map(|(a, nb)| nb.iter().filter(move |&&b| b > a).map(move |&b| (a, b))),
    )
}
