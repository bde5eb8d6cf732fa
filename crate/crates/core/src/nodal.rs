//! Zeros and nodal domains of eigenfunctions, the a priori bounds, the
//! cycle-removal nodal formulas and entrance events of a single lead.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dsu, MetricGraph};
use crate::scattering::{self, attach_leads};
use crate::spectral::{self, Eigenpair};

/// Vertex values below this fraction of `sup |f|` count as vanishing.
pub const VANISHING_TOL: f64 = 1e-7;
/// Phase guard keeping zeros strictly inside an edge.
const ZERO_GUARD: f64 = 1e-9;

/// Nodal data of one simple, vertex-nonvanishing eigenfunction.
///
/// `mu` counts interior zeros; `mu_with_boundary` adds one zero per
/// degree-1 Dirichlet vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalRecord {
    pub n: usize,
    pub k: f64,
    pub mu: usize,
    pub mu_with_boundary: usize,
    pub nu: usize,
    pub beta: usize,
    pub per_edge_zeros: BTreeMap<String, usize>,
    /// Zero count on each fundamental cycle.
    pub cycle_zeros: Vec<usize>,
    pub vertex_nonvanishing: bool,
    pub simple: bool,
}

impl NodalRecord {
    /// `n - 1 <= mu <= n - 1 + beta`.
    pub fn zeros_bound_holds(&self) -> bool {
        self.n - 1 <= self.mu && self.mu <= self.n - 1 + self.beta
    }

    /// `n - beta <= nu <= n`.
    pub fn domains_bound_holds(&self) -> bool {
        self.n <= self.nu + self.beta && self.nu <= self.n
    }

    /// `mu - beta + 1 <= nu <= mu + 1`.
    pub fn zeros_domains_relation_holds(&self) -> bool {
        self.mu + 1 <= self.nu + self.beta && self.nu <= self.mu + 1
    }

    pub fn cycle_parity_holds(&self) -> bool {
        self.cycle_zeros.iter().all(|z| z % 2 == 0)
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.zeros_bound_holds()
            && self.domains_bound_holds()
            && self.zeros_domains_relation_holds()
            && self.cycle_parity_holds()
    }
}

/// Outcome of examining one index.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NodalOutcome {
    Record(NodalRecord),
    Skipped { n: usize, k: f64, reason: String },
}

impl NodalOutcome {
    pub fn n(&self) -> usize {
        match self {
            NodalOutcome::Record(r) => r.n,
            NodalOutcome::Skipped { n, .. } => *n,
        }
    }

    pub fn record(&self) -> Option<&NodalRecord> {
        match self {
            NodalOutcome::Record(r) => Some(r),
            NodalOutcome::Skipped { .. } => None,
        }
    }
}

/// Zeros of `f` on an edge from the endpoint signs:
/// `floor(kL/pi) + (1 - (-1)^floor(kL/pi) s_u s_v) / 2`.
pub fn zeros_on_edge_formula(k: f64, length: f64, sign_u: i8, sign_v: i8) -> Result<usize> {
    let q = k * length / PI;
    if (q - q.round()).abs() < 1e-9 {
        return Err(Error::BoundaryDegenerate(q));
    }
    let m = q.floor() as usize;
    let parity: i64 = if m % 2 == 0 { 1 } else { -1 };
    let extra = (1 - parity * i64::from(sign_u) * i64::from(sign_v)) / 2;
    Ok(m + extra as usize)
}

/// Interior zeros of a simple eigenfunction, located in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub mu: usize,
    pub mu_with_boundary: usize,
    pub per_edge: Vec<usize>,
    pub positions: Vec<Vec<f64>>,
}

fn filled(g: &MetricGraph, pair: &Eigenpair) -> Result<Eigenpair> {
    if !pair.is_simple() {
        return Err(Error::Degenerate { k: pair.k, multiplicity: pair.multiplicity });
    }
    if pair.amplitudes.is_some() {
        Ok(pair.clone())
    } else {
        spectral::eigenfunction(g, pair)
    }
}

/// Degree-1 Dirichlet vertices: zeros of `f` that are not interior.
fn boundary_dirichlet(g: &MetricGraph) -> Vec<bool> {
    (0..g.num_vertices()).map(|v| g.vertices()[v].condition.is_dirichlet() && g.degree(v) == 1).collect()
}

fn check_vertices(g: &MetricGraph, pair: &Eigenpair) -> Result<()> {
    let sup = spectral::sup_norm(g, pair);
    let exempt = boundary_dirichlet(g);
    for (v, val) in spectral::vertex_values(g, pair).into_iter().enumerate() {
        if !exempt[v] && val.abs() <= VANISHING_TOL * sup {
            return Err(Error::VertexVanishing { k: pair.k, vertex: g.vertices()[v].id.clone() });
        }
    }
    Ok(())
}

/// Whether every vertex other than a degree-1 Dirichlet one carries a
/// nonzero value. `pair` must carry amplitudes.
pub fn vertex_nonvanishing(g: &MetricGraph, pair: &Eigenpair) -> bool {
    check_vertices(g, pair).is_ok()
}

pub fn zeros_direct(g: &MetricGraph, pair: &Eigenpair) -> Result<ZeroSet> {
    let pair = filled(g, pair)?;
    check_vertices(g, &pair)?;
    let mut per_edge = Vec::with_capacity(g.num_edges());
    let mut positions = Vec::with_capacity(g.num_edges());
    for i in 0..g.num_edges() {
        let w = spectral::edge_wave(g, &pair, i);
        let mut xs = Vec::new();
        if w.k > 0.0 {
            // zeros where k x + shift = pi/2 + m pi
            let lo = w.shift + ZERO_GUARD;
            let hi = w.k * w.length + w.shift - ZERO_GUARD;
            let mut m = ((lo - PI / 2.0) / PI).ceil();
            while PI / 2.0 + m * PI < hi {
                xs.push((PI / 2.0 + m * PI - w.shift) / w.k);
                m += 1.0;
            }
        }
        per_edge.push(xs.len());
        positions.push(xs);
    }
    let mu = per_edge.iter().sum();
    let boundary = boundary_dirichlet(g).into_iter().filter(|&b| b).count();
    Ok(ZeroSet { mu, mu_with_boundary: mu + boundary, per_edge, positions })
}

/// Number of nodal domains: edge pieces between zeros, joined at every
/// vertex where `f` is nonzero.
pub fn domains_direct(g: &MetricGraph, pair: &Eigenpair) -> Result<usize> {
    let zs = zeros_direct(g, pair)?;
    Ok(count_domains(g, &zs.per_edge))
}

fn count_domains(g: &MetricGraph, per_edge: &[usize]) -> usize {
    let mut offset = Vec::with_capacity(per_edge.len());
    let mut total = 0;
    for &z in per_edge {
        offset.push(total);
        total += z + 1;
    }
    let piece_at = |j: usize| {
        let i = j / 2;
        if j % 2 == 0 {
            offset[i]
        } else {
            offset[i] + per_edge[i]
        }
    };
    let mut dsu = Dsu::new(total);
    let exempt = boundary_dirichlet(g);
    for v in 0..g.num_vertices() {
        if exempt[v] {
            continue;
        }
        let ends = g.ends(v);
        for &j in &ends[1..] {
            dsu.union(piece_at(ends[0]), piece_at(j));
        }
    }
    (0..total).filter(|&p| dsu.find(p) == p).count()
}

/// Full nodal record of a simple eigenpair.
pub fn nodal_record(g: &MetricGraph, n: usize, pair: &Eigenpair) -> Result<NodalRecord> {
    let pair = filled(g, pair)?;
    let zs = zeros_direct(g, &pair)?;
    let nu = count_domains(g, &zs.per_edge);
    let cycle_zeros = g
        .fundamental_cycles()
        .iter()
        .map(|(edges, _)| edges.iter().map(|e| zs.per_edge[g.edge_idx(e).expect("own edge")]).sum())
        .collect();
    Ok(NodalRecord {
        n,
        k: pair.k,
        mu: zs.mu,
        mu_with_boundary: zs.mu_with_boundary,
        nu,
        beta: g.cyclomatic_number(),
        per_edge_zeros: g.edges().iter().zip(&zs.per_edge).map(|(e, &z)| (e.id.clone(), z)).collect(),
        cycle_zeros,
        vertex_nonvanishing: true,
        simple: true,
    })
}

/// Nodal outcomes for indices `1..=n_max`; degenerate or vertex-vanishing
/// indices are skipped with a reason.
pub fn nodal_records(g: &MetricGraph, n_max: usize) -> Result<Vec<NodalOutcome>> {
    let spec = spectral::first_eigenvalues(g, n_max)?;
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let pair = spec.pair_for_index(n).expect("spectrum covers n_max");
            match nodal_record(g, n, pair) {
                Ok(r) => Ok(NodalOutcome::Record(r)),
                Err(e @ (Error::Degenerate { .. } | Error::VertexVanishing { .. } | Error::NotReal(_))) => {
                    Ok(NodalOutcome::Skipped { n, k: pair.k, reason: e.to_string() })
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// `n - 1 + mod2(n - 1 + N_empty)`.
pub fn formula_single_cycle(n: usize, n_empty: usize) -> usize {
    formula_disjoint_cycles(n, &[n_empty])
}

/// `n - 1 + sum_j mod2(n - 1 + N_{j,empty})`.
pub fn formula_disjoint_cycles(n: usize, n_empty_per_cycle: &[usize]) -> usize {
    n - 1 + n_empty_per_cycle.iter().map(|&c| (n - 1 + c) % 2).sum::<usize>()
}

/// `N_{j,empty}(k)` for each cycle: the count of the graph with that cycle
/// removed and Dirichlet imposed where it was attached.
pub fn cycle_removed_counts(g: &MetricGraph, cycles: &[Vec<String>], k: f64) -> Result<Vec<usize>> {
    cycles
        .iter()
        .map(|c| {
            let rest = g.remove_cycle_dirichlet(c)?;
            if k == 0.0 {
                return Ok(rest.neumann_components());
            }
            spectral::counting_function(&rest, k)
        })
        .collect()
}

/// Interior zero count predicted by the disjoint-cycle formula at the
/// `n`-th eigenvalue `k`, or `None` when cycles share vertices.
pub fn formula_mu(g: &MetricGraph, n: usize, k: f64) -> Result<Option<usize>> {
    let cycles = match g.find_cycles() {
        Ok(c) => c,
        Err(crate::graph::GraphError::CyclesNotDisjoint(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let counts = cycle_removed_counts(g, &cycles, k)?;
    Ok(Some(formula_disjoint_cycles(n, &counts)))
}

/// Wave numbers in `(0, k_max]` at which the scattering phase of a single
/// lead at `lead_vertex` equals `pi` modulo `2 pi`.
pub fn entrance_events_single_lead(g: &MetricGraph, lead_vertex: &str, k_max: f64) -> Result<Vec<f64>> {
    spectral::check_k(k_max)?;
    let og = attach_leads(g, &[lead_vertex])?;
    let singular = scattering::delta_set(&og, k_max)?;
    if !singular.is_empty() {
        return Err(Error::DeltaNonEmpty(singular.iter().map(|d| d.0).collect()));
    }
    let events = scattering::phase_crossings(&og, PI, &[], k_max)?;
    Ok(events.into_iter().flat_map(|(k, c)| std::iter::repeat(k).take(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::graph::VertexCondition::*;

    #[test]
    fn edge_formula_cases() {
        assert_eq!(zeros_on_edge_formula(0.4 * PI, 1.0, 1, 1).unwrap(), 0);
        assert_eq!(zeros_on_edge_formula(2.3 * PI, 1.0, 1, 1).unwrap(), 2);
        assert_eq!(zeros_on_edge_formula(2.3 * PI, 1.0, 1, -1).unwrap(), 3);
        assert!(matches!(zeros_on_edge_formula(2.0 * PI, 1.0, 1, 1), Err(Error::BoundaryDegenerate(_))));
    }

    #[test]
    fn interval_zeros_and_domains() {
        let g = builtins::interval(1.5, Dirichlet, Dirichlet);
        let spec = spectral::first_eigenvalues(&g, 5).unwrap();
        let pair = spec.pair_for_index(3).unwrap();
        let zs = zeros_direct(&g, pair).unwrap();
        assert_eq!(zs.mu, 2);
        assert_eq!(zs.mu_with_boundary, 4);
        assert!((zs.positions[0][0] - 0.5).abs() < 1e-9 && (zs.positions[0][1] - 1.0).abs() < 1e-9);
        for n in 1..=5 {
            assert_eq!(domains_direct(&g, spec.pair_for_index(n).unwrap()).unwrap(), n);
        }
    }

    #[test]
    fn formulas_are_parity_arithmetic() {
        assert_eq!(formula_single_cycle(1, 0), 0);
        assert_eq!(formula_single_cycle(4, 2), 4);
        assert_eq!(formula_single_cycle(4, 3), 3);
        assert_eq!(formula_disjoint_cycles(5, &[0, 2, 4]), 4);
        assert_eq!(formula_disjoint_cycles(5, &[1, 0]), 5);
    }

    #[test]
    fn lasso_records_satisfy_bounds() {
        let g = builtins::lasso();
        for o in nodal_records(&g, 12).unwrap() {
            if let NodalOutcome::Record(r) = o {
                assert!(r.all_bounds_hold(), "{r:?}");
            }
        }
    }

    #[test]
    fn interval_entrance_events_sit_between_eigenvalues() {
        let g = builtins::interval(1.0, Neumann, Dirichlet);
        let ev = entrance_events_single_lead(&g, "l", 10.0).unwrap();
        assert_eq!(ev.len(), 3);
        for (m, k) in ev.iter().enumerate() {
            assert!((k - PI * (m + 1) as f64).abs() < 1e-9);
        }
    }
}
