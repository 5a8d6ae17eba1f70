//! Fixtures shared by the benchmarks.

use lvm_core::generators::holme_kim;
use lvm_core::{eigenvector_centrality, CentralityVector, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Roughly the size and density of the Wiki-Vote network: 7115 nodes,
/// average degree near 28, moderate clustering.
pub fn wiki_like() -> (Graph, CentralityVector) {
    sized(7115, 14)
}

pub fn sized(n: usize, m: usize) -> (Graph, CentralityVector) {
    let g = holme_kim(n, m, 0.3, &mut ChaCha8Rng::seed_from_u64(7115));
    let c = eigenvector_centrality(&g, 1e-8, 1000).expect("fixture centrality");
    (g, c)
}
