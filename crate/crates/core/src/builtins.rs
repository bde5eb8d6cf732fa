//! Named test graphs available without external files.

use crate::graph::{GraphError, MetricGraph, VertexCondition};
use VertexCondition::*;

/// Default dihedral parameters `a = 1`, `b = 1/sqrt 2`, `c = 1/sqrt 3`.
pub const DIHEDRAL_DEFAULT: (f64, f64, f64) = (1.0, std::f64::consts::FRAC_1_SQRT_2, 0.577_350_269_189_625_8);

pub const NAMES: [&str; 5] = ["interval", "lasso", "dumbbell", "dihedral", "tree-twin"];

/// Looks up a registry entry; the dihedral pair uses `abc` (or defaults).
pub fn by_name(name: &str, abc: Option<(f64, f64, f64)>) -> Result<MetricGraph, GraphError> {
    let (a, b, c) = abc.unwrap_or(DIHEDRAL_DEFAULT);
    match name {
        "interval" => Ok(interval(1.0, Dirichlet, Dirichlet)),
        "lasso" => Ok(lasso()),
        "dumbbell" => Ok(dumbbell()),
        "dihedral" => dihedral(a, b, c),
        "tree-twin" => tree_twin(a, b, c),
        other => Err(GraphError::Malformed(format!("unknown builtin `{other}` (known: {})", NAMES.join(", ")))),
    }
}

/// Single edge `e` from `l` to `r`.
pub fn interval(length: f64, left: VertexCondition, right: VertexCondition) -> MetricGraph {
    MetricGraph::builder()
        .vertex("l", left)
        .vertex("r", right)
        .edge("e", "l", "r", length)
        .build()
        .expect("valid interval")
}

/// Self-loop `c` of the given length on a Neumann vertex `o`.
pub fn circle(length: f64) -> MetricGraph {
    MetricGraph::builder().vertex("o", Neumann).edge("c", "o", "o", length).build().expect("valid circle")
}

/// Loop `loop` of length 1 at `a`, pendant `tail` of length `1/sqrt 3` to `b`; all Neumann.
pub fn lasso() -> MetricGraph {
    lasso_with(1.0, 1.0 / 3f64.sqrt(), Neumann)
}

pub fn lasso_with(loop_length: f64, tail_length: f64, tip: VertexCondition) -> MetricGraph {
    MetricGraph::builder()
        .vertex("a", Neumann)
        .vertex("b", tip)
        .edge("loop", "a", "a", loop_length)
        .edge("tail", "a", "b", tail_length)
        .build()
        .expect("valid lasso")
}

/// Two loops (`la` at `a`, `lb` at `b`) joined by the bridge `ab`; all Neumann.
pub fn dumbbell() -> MetricGraph {
    MetricGraph::builder()
        .vertex("a", Neumann)
        .vertex("b", Neumann)
        .edge("la", "a", "a", 1.0)
        .edge("ab", "a", "b", 1.0 / 3f64.sqrt())
        .edge("lb", "b", "b", 2f64.sqrt())
        .build()
        .expect("valid dumbbell")
}

/// The dihedral graph: a cycle of two edges (`b2` of length `2b`, `c2` of
/// length `2c`) between `p` and `q`, a pendant `pa` of length `a` from `p`
/// to the Dirichlet vertex `d`, and a pendant `qa` of length `a` from `q`
/// to the Neumann vertex `n`.
pub fn dihedral(a: f64, b: f64, c: f64) -> Result<MetricGraph, GraphError> {
    MetricGraph::builder()
        .vertex("p", Neumann)
        .vertex("q", Neumann)
        .vertex("d", Dirichlet)
        .vertex("n", Neumann)
        .edge("pa", "p", "d", a)
        .edge("b2", "p", "q", 2.0 * b)
        .edge("c2", "p", "q", 2.0 * c)
        .edge("qa", "q", "n", a)
        .build()
}

/// The cycle of the dihedral graph alone (leads attach at `p` and `q`).
pub fn dihedral_cycle(b: f64, c: f64) -> Result<MetricGraph, GraphError> {
    MetricGraph::builder()
        .vertex("p", Neumann)
        .vertex("q", Neumann)
        .edge("b2", "p", "q", 2.0 * b)
        .edge("c2", "p", "q", 2.0 * c)
        .build()
}

/// Tree isospectral to [`dihedral`]: stars at `p1` (Neumann tips) and
/// `p2` (Dirichlet tips), each with arms `b` and `c`, joined by an edge `2a`.
pub fn tree_twin(a: f64, b: f64, c: f64) -> Result<MetricGraph, GraphError> {
    MetricGraph::builder()
        .vertex("p1", Neumann)
        .vertex("p2", Neumann)
        .vertex("b1", Neumann)
        .vertex("c1", Neumann)
        .vertex("b2", Dirichlet)
        .vertex("c2", Dirichlet)
        .edge("arm-b1", "p1", "b1", b)
        .edge("arm-c1", "p1", "c1", c)
        .edge("bridge", "p1", "p2", 2.0 * a)
        .edge("arm-b2", "p2", "b2", b)
        .edge("arm-c2", "p2", "c2", c)
        .build()
}

/// Star with centre `o` and arms `arm{i}` to tips `t{i}`.
pub fn star(lengths: &[f64], center: VertexCondition, tips: VertexCondition) -> MetricGraph {
    let mut b = MetricGraph::builder().vertex("o", center);
    for (i, &l) in lengths.iter().enumerate() {
        b = b.vertex(format!("t{i}"), tips).edge(format!("arm{i}"), "o", format!("t{i}"), l);
    }
    b.build().expect("valid star")
}

/// Three two-edge cycles in a row joined by bridges, Neumann pendants at both ends.
pub fn cycle_chain() -> MetricGraph {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let r5 = 5f64.sqrt();
    MetricGraph::builder()
        .vertex("s", Neumann)
        .vertex("u0", Neumann)
        .vertex("w0", Neumann)
        .vertex("u1", Neumann)
        .vertex("w1", Neumann)
        .vertex("u2", Neumann)
        .vertex("w2", Neumann)
        .vertex("t", Dirichlet)
        .edge("head", "s", "u0", 0.3 * r3)
        .edge("c0a", "u0", "w0", 0.5 * r2)
        .edge("c0b", "u0", "w0", 0.4 * r5)
        .edge("br0", "w0", "u1", 0.2 * r3 + 0.1)
        .edge("c1a", "u1", "w1", 0.37 * r2 + 0.2)
        .edge("c1b", "u1", "w1", 0.61 * r3)
        .edge("br1", "w1", "u2", 0.29 * r5)
        .edge("c2a", "u2", "w2", 0.45 * r3)
        .edge("c2b", "u2", "w2", 0.3 * r5 + 0.17)
        .edge("tail", "w2", "t", 0.41 * r2)
        .build()
        .expect("valid chain")
}
