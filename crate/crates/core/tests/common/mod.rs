//! Oracles shared by the integration tests. None of them goes through the
//! evolution map: spectra come from the vertex (Kirchhoff) matrix, which
//! uses vertex values as unknowns and standing waves on the edges.
#![allow(dead_code)]

use nalgebra::DMatrix;
use nodalscope::{MetricGraph, VertexCondition};

/// Indices of vertices carrying an unknown value (all but Dirichlet).
fn free_vertices(g: &MetricGraph) -> Vec<Option<usize>> {
    let mut next = 0;
    g.vertices()
        .iter()
        .map(|v| {
            if v.condition.is_dirichlet() {
                None
            } else {
                next += 1;
                Some(next - 1)
            }
        })
        .collect()
}

/// Symmetric matrix `A(k)` with `A(k) f = 0` exactly when the vertex
/// values `f` extend to an eigenfunction (for `sin(k L_e) != 0`).
///
/// On an edge `u -> v` the standing wave is
/// `[f_u sin(k(L - x)) + f_v sin(k x)] / sin(k L)`, whose outgoing
/// derivative at `u` is `k (f_v - f_u cos kL) / sin kL`. A loop at `u`
/// contributes `2 k tan(kL/2) f_u`.
pub fn vertex_matrix(g: &MetricGraph, k: f64) -> DMatrix<f64> {
    let free = free_vertices(g);
    let n = free.iter().flatten().count();
    let mut a = DMatrix::zeros(n, n);
    for e in g.edges() {
        let (s, c) = (k * e.length).sin_cos();
        if e.from == e.to {
            if let Some(i) = free[e.from] {
                a[(i, i)] += 2.0 * k * (1.0 - c) / s;
            }
            continue;
        }
        for (u, v) in [(e.from, e.to), (e.to, e.from)] {
            if let Some(i) = free[u] {
                a[(i, i)] -= k * c / s;
                if let Some(j) = free[v] {
                    a[(i, j)] += k / s;
                }
            }
        }
    }
    for (v, vert) in g.vertices().iter().enumerate() {
        if let (Some(i), VertexCondition::Delta(alpha)) = (free[v], vert.condition) {
            a[(i, i)] -= alpha;
        }
    }
    a
}

/// Entire secular function `det A(k) * prod_e sin(k L_e)`.
pub fn secular(g: &MetricGraph, k: f64) -> f64 {
    let prod: f64 = g.edges().iter().map(|e| (k * e.length).sin()).product();
    vertex_matrix(g, k).determinant() * prod
}

/// Positive zeros of [`secular`] up to `k_max`, from a sign scan with
/// `per_unit` samples per unit of `k` refined by bisection. Only odd
/// multiplicities are visible, so callers use generic lengths.
pub fn secular_roots(g: &MetricGraph, k_max: f64, per_unit: usize) -> Vec<f64> {
    let steps = (k_max * per_unit as f64).ceil() as usize;
    let h = k_max / steps as f64;
    let mut roots = Vec::new();
    let mut prev = (1e-7, secular(g, 1e-7));
    for i in 1..=steps {
        let k = i as f64 * h;
        let v = secular(g, k);
        if v == 0.0 {
            roots.push(k);
        } else if prev.1 != 0.0 && v.signum() != prev.1.signum() {
            let (mut lo, mut hi, mut flo) = (prev.0, k, prev.1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = secular(g, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = (k, v);
    }
    roots
}

/// Zero modes of a connected graph: one if every vertex is Neumann.
pub fn zero_modes(g: &MetricGraph) -> usize {
    usize::from(g.vertices().iter().all(|v| v.condition.is_neumann()))
}

/// Largest pairwise deviation of two sorted lists, or `None` if their
/// lengths differ.
pub fn max_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    (a.len() == b.len()).then(|| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// `sin(n pi x)`: eigenfunctions of the unit Dirichlet interval.
pub fn dirichlet_mode(n: usize, x: f64) -> f64 {
    (n as f64 * std::f64::consts::PI * x).sin()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}
