//! Fixtures shared by the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stepshare::ppsp::{vertices_from_edges, PpspQuery, PpspVertex};
use stepshare::synth::random_graph;
use stepshare::VertexData;

/// A directed random graph with `n` vertices and `degree * n` edges, and
/// `queries` random point-to-point queries over it.
pub fn ppsp_workload(n: usize, degree: usize, queries: usize, seed: u64) -> (Vec<VertexData<PpspVertex>>, Vec<PpspQuery>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_graph(n, n * degree, &mut rng);
    let qs = (0..queries).map(|_| PpspQuery::new(rng.random_range(0..n as u64), rng.random_range(0..n as u64))).collect();
    (vertices_from_edges(&g, true), qs)
}
