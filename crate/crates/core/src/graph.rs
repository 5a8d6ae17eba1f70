//! Undirected simple graphs in compressed sparse row form, plus the
//! structural measures used by the seeders (eigenvector centrality) and by
//! dataset validation (average degree, average local clustering).

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index in `[0, n)`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
#[repr(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Immutable undirected simple graph.
///
/// Neighbor lists are sorted and symmetric; there are no self-loops and no
/// parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Graph {
    /// Builds a graph on `n` dense nodes from an arbitrary edge list.
    /// Self-loops are dropped and duplicate or reversed edges merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut undirected: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| {
                assert!(a < n && b < n, "edge ({a}, {b}) out of range for n = {n}");
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                (lo as u32, hi as u32)
            })
            .collect();
        undirected.sort_unstable();
        undirected.dedup();

        let mut degree = vec![0usize; n];
        for &(a, b) in &undirected {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![NodeId(0); offsets[n]];
        for &(a, b) in &undirected {
            targets[cursor[a as usize]] = NodeId(b);
            cursor[a as usize] += 1;
            targets[cursor[b as usize]] = NodeId(a);
            cursor[b as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, targets }
    }

    pub fn empty() -> Self {
        Graph {
            offsets: vec![0],
            targets: Vec::new(),
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v.index() + 1] - self.offsets[v.index()]
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        let (small, other) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.neighbors(small).binary_search(&other).is_ok()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::from)
    }

    /// Each undirected edge once, as `(lo, hi)` with `lo < hi`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |v| {
            self.neighbors(v)
                .iter()
                .copied()
                .filter(move |&u| u > v)
                .map(move |u| (v, u))
        })
    }

    /// Subgraph induced by `keep`, relabelled densely in the order given.
    pub fn induced(&self, keep: &[NodeId]) -> Graph {
        let mut new_id = vec![u32::MAX; self.node_count()];
        for (i, v) in keep.iter().enumerate() {
            new_id[v.index()] = i as u32;
        }
        let edges = keep.iter().enumerate().flat_map(|(i, &v)| {
            let new_id = &new_id;
            self.neighbors(v)
                .iter()
                .filter_map(move |u| match new_id[u.index()] {
                    u32::MAX => None,
                    j if (j as usize) > i => Some((i, j as usize)),
                    _ => None,
                })
        });
        Graph::from_edges(keep.len(), edges.collect::<Vec<_>>())
    }
}

/// Reads a whitespace-separated integer edge list. Lines starting with `#`
/// and blank lines are skipped; CRLF endings are accepted.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<(i64, i64)>> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let mut tokens = line.split_whitespace();
        let mut next = || -> Result<i64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                reason: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("invalid node id {tok:?}"),
            })
        };
        let a = next()?;
        let b = next()?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                reason: "expected exactly two node ids".into(),
            });
        }
        pairs.push((a, b));
    }
    Ok(pairs)
}

/// Builds a graph from raw id pairs, assigning dense ids in ascending
/// raw-id order.
pub fn build_graph(pairs: &[(i64, i64)]) -> Graph {
    let raw = raw_node_ids(pairs);
    let index: HashMap<i64, usize> = raw.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    Graph::from_edges(
        raw.len(),
        pairs.iter().map(|(a, b)| (index[a], index[b])),
    )
}

/// Raw ids in dense-id order: entry `i` is the raw id of `NodeId(i)`.
pub fn raw_node_ids(pairs: &[(i64, i64)]) -> Vec<i64> {
    let mut raw: Vec<i64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    raw.sort_unstable();
    raw.dedup();
    raw
}

/// Uniform node sample of size `target_n` without replacement; returns the
/// induced subgraph. Kept nodes retain their relative order.
pub fn sample_induced<R: Rng + ?Sized>(g: &Graph, target_n: usize, rng: &mut R) -> Result<Graph> {
    if target_n == 0 || target_n > g.node_count() {
        return Err(Error::invalid(format!(
            "sample size {target_n} must be in 1..={}",
            g.node_count()
        )));
    }
    let mut keep: Vec<NodeId> = rand::seq::index::sample(rng, g.node_count(), target_n)
        .into_iter()
        .map(NodeId::from)
        .collect();
    keep.sort_unstable();
    Ok(g.induced(&keep))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub scores: Vec<f64>,
    /// L2 change of the last iteration.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the graph has no edges and the uniform vector is returned.
    pub degenerate: bool,
}

impl CentralityVector {
    #[inline]
    pub fn score(&self, v: NodeId) -> f64 {
        self.scores[v.index()]
    }
}

pub const DEFAULT_CENTRALITY_TOL: f64 = 1e-8;
pub const DEFAULT_CENTRALITY_MAX_ITER: usize = 1000;

/// Eigenvector centrality by power iteration from the uniform vector.
///
/// Iterates with `A + I`, which has the same eigenvectors as `A` but a
/// strictly dominant positive eigenvalue, so bipartite graphs converge
/// instead of oscillating.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iter: usize) -> Result<CentralityVector> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Empty("centrality of an empty graph".into()));
    }
    let uniform = 1.0 / (n as f64).sqrt();
    let mut x = vec![uniform; n];
    if g.edge_count() == 0 {
        return Ok(CentralityVector {
            scores: x,
            residual: 0.0,
            iterations: 0,
            converged: true,
            degenerate: true,
        });
    }

    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        for v in g.nodes() {
            let s: f64 = g.neighbors(v).iter().map(|u| x[u.index()]).sum();
            next[v.index()] = x[v.index()] + s;
        }
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        residual = 0.0;
        for (xi, ni) in x.iter_mut().zip(next.iter()) {
            let updated = ni / norm;
            residual += (updated - *xi) * (updated - *xi);
            *xi = updated;
        }
        residual = residual.sqrt();
        if residual < tol {
            break;
        }
    }
    Ok(CentralityVector {
        scores: x,
        residual,
        iterations,
        converged: residual < tol,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub edge_count: usize,
    pub avg_degree: f64,
    pub avg_clustering: f64,
}

/// Number of triangles through each node.
pub fn triangle_counts(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    let mut marked = vec![false; n];
    let mut tri = vec![0u64; n];
    for v in g.nodes() {
        let nv = g.neighbors(v);
        for u in nv {
            marked[u.index()] = true;
        }
        let mut t = 0u64;
        for &u in nv {
            // each triangle {v, u, w} seen from both u and w
            t += g.neighbors(u).iter().filter(|w| marked[w.index()]).count() as u64;
        }
        tri[v.index()] = t / 2;
        for u in nv {
            marked[u.index()] = false;
        }
    }
    tri
}

pub fn graph_stats(g: &Graph) -> Result<GraphStats> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Empty("statistics of an empty graph".into()));
    }
    let tri = triangle_counts(g);
    let clustering_sum: f64 = g
        .nodes()
        .map(|v| {
            let d = g.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * tri[v.index()] as f64 / (d * (d - 1.0))
            }
        })
        .sum();
    Ok(GraphStats {
        n,
        edge_count: g.edge_count(),
        avg_degree: 2.0 * g.edge_count() as f64 / n as f64,
        avg_clustering: clustering_sum / n as f64,
    })
}
