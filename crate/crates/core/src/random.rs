//! Seeded random graphs for audits. Same seed, same graph.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::graph::{MetricGraph, VertexCondition};

/// Shape of a random connected graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGraphOptions {
    /// Number of vertices is drawn from `min_vertices..=max_vertices`.
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Cyclomatic number: edges added on top of a spanning tree.
    pub beta: usize,
    /// Lengths are drawn from `[min_length, max_length)`.
    pub min_length: f64,
    pub max_length: f64,
    /// Probability that a leaf is Dirichlet.
    pub dirichlet_leaf: f64,
    /// Probability that a non-leaf vertex carries `Delta(alpha)` with
    /// `alpha` in `(0, 3)`; zero keeps the graph Neumann/Dirichlet.
    pub delta_vertex: f64,
}

impl Default for RandomGraphOptions {
    fn default() -> Self {
        RandomGraphOptions {
            min_vertices: 3,
            max_vertices: 6,
            beta: 0,
            min_length: 0.4,
            max_length: 1.6,
            dirichlet_leaf: 0.5,
            delta_vertex: 0.0,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random tree on `n >= 2` vertices plus `beta` extra edges (which may
/// be loops or parallel edges). Vertices are `v0, v1, ...`, edges `e0, ...`.
pub fn random_graph<R: Rng>(rng: &mut R, opts: &RandomGraphOptions) -> MetricGraph {
    let n = rng.random_range(opts.min_vertices.max(2)..=opts.max_vertices.max(opts.min_vertices.max(2)));
    let mut ends: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    for _ in 0..opts.beta {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        ends.push((u, v));
    }
    let mut degree = vec![0usize; n];
    for &(u, v) in &ends {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut b = MetricGraph::builder();
    for (v, &d) in degree.iter().enumerate() {
        let c = if d == 1 {
            if rng.random_bool(opts.dirichlet_leaf) {
                VertexCondition::Dirichlet
            } else {
                VertexCondition::Neumann
            }
        } else if opts.delta_vertex > 0.0 && rng.random_bool(opts.delta_vertex) {
            VertexCondition::Delta(rng.random_range(0.1..3.0))
        } else {
            VertexCondition::Neumann
        };
        b = b.vertex(format!("v{v}"), c);
    }
    for (i, &(u, v)) in ends.iter().enumerate() {
        let len = rng.random_range(opts.min_length..opts.max_length);
        b = b.edge(format!("e{i}"), format!("v{u}"), format!("v{v}"), len);
    }
    b.build().expect("random graph is well formed")
}

/// Graph with seed-determined shape; convenience for tests.
pub fn seeded_graph(seed: u64, opts: &RandomGraphOptions) -> MetricGraph {
    random_graph(&mut rng(seed), opts)
}
