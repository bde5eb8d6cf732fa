//! Verification suites with JSON-ready summaries: randomized surgery
//! interlacing and the dihedral formula suite.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::dihedral::{self, ContraPhasalSolver, DihedralParams};
use crate::error::{Error, Result};
use crate::graph::{GraphPoint, MetricGraph, VertexCondition};
use crate::nodal::{self, NodalOutcome};
use crate::random;
use crate::spectral::{self, Spectrum};

/// Slack on interlacing inequalities, in `k`.
pub const INTERLACING_SLACK: f64 = 1e-8;
/// Margin demanded by strict interlacing, in `k`.
pub const STRICT_MARGIN: f64 = 1e-10;
/// Eigenvalues compared per surgery.
pub const INTERLACING_DEPTH: usize = 30;

/// Counts of one suite; `first_failure` names the first violated check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub name: String,
    pub checked: usize,
    pub passed: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
    pub notes: Vec<String>,
}

impl Summary {
    pub fn new(name: impl Into<String>) -> Self {
        Summary { name: name.into(), checked: 0, passed: 0, skipped: 0, first_failure: None, notes: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(detail());
        }
    }

    pub fn skip(&mut self, note: impl Into<String>) {
        self.skipped += 1;
        self.notes.push(note.into());
    }

    pub fn failures(&self) -> usize {
        self.checked - self.passed
    }

    pub fn ok(&self) -> bool {
        self.failures() == 0
    }
}

/// A random surgery on a base graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Surgery {
    /// Raise the coefficient at `vertex` (possibly to Dirichlet).
    Parameter { vertex: String, from: VertexCondition, to: VertexCondition },
    /// Glue two vertices of the graph.
    Glue { v0: String, v1: String },
    /// Cut an edge at a point with Neumann ends, then glue it back.
    CutReglue { point: GraphPoint },
}

impl fmt::Display for Surgery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surgery::Parameter { vertex, from, to } => write!(f, "parameter at {vertex}: {from:?} -> {to:?}"),
            Surgery::Glue { v0, v1 } => write!(f, "glue {v0} + {v1}"),
            Surgery::CutReglue { point } => write!(f, "cut and reglue at {point}"),
        }
    }
}

/// The smaller graph, the surgered graph, and the glued pair if any.
struct SurgeryPair {
    lower: MetricGraph,
    upper: MetricGraph,
    glued: Option<(String, String)>,
}

fn draw_surgery<R: Rng>(g: &MetricGraph, rng: &mut R) -> Result<Option<(Surgery, SurgeryPair)>> {
    let free: Vec<&str> =
        g.vertices().iter().filter(|v| !v.condition.is_dirichlet()).map(|v| v.id.as_str()).collect();
    let mut kind = rng.random_range(0..3u8);
    if kind == 1 && free.len() < 2 {
        kind = 2;
    }
    if kind == 0 && free.is_empty() {
        kind = 2;
    }
    match kind {
        0 => {
            let vertex = free[rng.random_range(0..free.len())].to_string();
            let from = g.vertex(&vertex)?.condition;
            let alpha = from.alpha().expect("free vertices are not Dirichlet");
            let to = if rng.random_bool(0.25) {
                VertexCondition::Dirichlet
            } else {
                VertexCondition::Delta(alpha + rng.random_range(0.5..5.0))
            };
            let upper = g.change_vertex_parameter(&vertex, to)?;
            Ok(Some((Surgery::Parameter { vertex, from, to }, SurgeryPair { lower: g.clone(), upper, glued: None })))
        }
        1 => {
            let i = rng.random_range(0..free.len());
            let mut j = rng.random_range(0..free.len() - 1);
            if j >= i {
                j += 1;
            }
            let (v0, v1) = (free[i].to_string(), free[j].to_string());
            let upper = g.glue_vertices(&v0, &v1)?;
            let pair = SurgeryPair { lower: g.clone(), upper, glued: Some((v0.clone(), v1.clone())) };
            Ok(Some((Surgery::Glue { v0, v1 }, pair)))
        }
        _ => {
            let e = &g.edges()[rng.random_range(0..g.num_edges())];
            let point = GraphPoint::new(e.id.clone(), e.length * rng.random_range(0.25..0.75));
            let lower = g.cut_at_point(&point, 0.0, 0.0)?;
            let (l, r) = (format!("{}#l", e.id), format!("{}#r", e.id));
            let upper = lower.glue_vertices(&l, &r)?;
            Ok(Some((Surgery::CutReglue { point }, SurgeryPair { lower, upper, glued: Some((l, r)) })))
        }
    }
}

/// Whether the `n`-th eigenpair of the surgered graph meets the hypotheses
/// under which both inequalities are strict.
fn strictness_applies(pair: &SurgeryPair, upper_spec: &Spectrum, n: usize) -> Result<bool> {
    let Some(p) = upper_spec.pair_for_index(n) else {
        return Ok(false);
    };
    if !p.is_simple() {
        return Ok(false);
    }
    let f = match spectral::eigenfunction(&pair.upper, p) {
        Ok(f) => f,
        Err(Error::NotReal(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    if !nodal::vertex_nonvanishing(&pair.upper, &f) {
        return Ok(false);
    }
    let Some((v0, _)) = &pair.glued else {
        return Ok(true);
    };
    // The glued function is an eigenfunction of the smaller graph exactly
    // when the delta condition already holds on the v0 side alone.
    let lower_v0 = pair.lower.vertex_idx(v0)?;
    let alpha0 = pair.lower.vertices()[lower_v0].condition.alpha().unwrap_or(0.0);
    let v = pair.upper.vertex_idx(v0)?;
    let value = spectral::vertex_values(&pair.upper, &f)[v];
    let split: f64 = pair
        .upper
        .ends(v)
        .iter()
        .filter(|&&j| pair.lower.end_vertex(j) == lower_v0)
        .map(|&j| spectral::outgoing_derivative(&pair.upper, &f, j))
        .sum();
    let scale = spectral::sup_norm(&pair.upper, &f) * f.k.max(1.0);
    Ok((split - alpha0 * value).abs() > 1e-6 * scale)
}

/// Report of [`verify_interlacing`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    pub inequalities: Summary,
    pub strictness: Summary,
    pub surgeries: Vec<String>,
}

impl InterlacingReport {
    pub fn ok(&self) -> bool {
        self.inequalities.ok() && self.strictness.ok()
    }
}

/// Random surgeries with `lambda_n(lower) <= lambda_n(upper) <= lambda_{n+1}(lower)`
/// checked on the first [`INTERLACING_DEPTH`] eigenvalues.
pub fn verify_interlacing(g: &MetricGraph, trials: usize, seed: u64) -> Result<InterlacingReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rng = random::rng(seed);
    let mut report = InterlacingReport {
        inequalities: Summary::new("interlacing inequalities"),
        strictness: Summary::new("strict interlacing"),
        surgeries: Vec::new(),
    };
    for t in 0..trials {
        let Some((surgery, pair)) = draw_surgery(g, &mut rng)? else {
            report.inequalities.skip(format!("trial {t}: no admissible surgery"));
            continue;
        };
        report.surgeries.push(surgery.to_string());
        let lower = spectral::first_eigenvalues(&pair.lower, INTERLACING_DEPTH + 1)?.expanded();
        let upper_spec = spectral::first_eigenvalues(&pair.upper, INTERLACING_DEPTH)?;
        let upper = upper_spec.expanded();
        for n in 1..=INTERLACING_DEPTH {
            let (lo, mid, hi) = (lower[n - 1], upper[n - 1], lower[n]);
            let where_ = || format!("trial {t} ({surgery}), n = {n}: {lo} <= {mid} <= {hi}");
            report.inequalities.check(lo <= mid + INTERLACING_SLACK, where_);
            report.inequalities.check(mid <= hi + INTERLACING_SLACK, where_);
            if strictness_applies(&pair, &upper_spec, n)? {
                report.strictness.check(lo < mid - STRICT_MARGIN && mid < hi - STRICT_MARGIN, where_);
            } else {
                report.strictness.skipped += 1;
            }
        }
    }
    Ok(report)
}

/// Report of [`verify_dihedral`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DihedralReport {
    pub params: DihedralParams,
    pub warnings: Vec<String>,
    pub suites: Vec<Summary>,
    /// Indices at which the floor identity fails (diagnostic only).
    pub identity_violations: Vec<usize>,
}

impl DihedralReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(Summary::ok)
    }
}

/// Events checked by the dihedral suite.
pub const DIHEDRAL_EVENTS: usize = 30;
/// Wave numbers sampled for the contra-phasal properties.
pub const CONTRA_PHASAL_SAMPLES: usize = 100;
/// Terms of the periodic-orbit partial sum.
pub const PERIODIC_ORBIT_TERMS: usize = 100_000;

/// Exact formulas against direct counts for `n <= n_max`, the event
/// bookkeeping, the contra-phasal properties and the periodic-orbit sums.
pub fn verify_dihedral(params: &DihedralParams, n_max: usize) -> Result<DihedralReport> {
    let g = params.graph();
    let mut mu = Summary::new("dihedral zero count");
    let mut nu = Summary::new("dihedral domain count");
    let mut old = Summary::new("earlier domain formula above threshold");
    for o in nodal::nodal_records(&g, n_max)? {
        match o {
            NodalOutcome::Record(r) => {
                let (m, d) = (dihedral::dihedral_mu(params, r.n), dihedral::dihedral_nu(params, r.n));
                mu.check(r.mu_with_boundary == m, || format!("n = {}: direct {} vs formula {m}", r.n, r.mu_with_boundary));
                nu.check(r.nu == d, || format!("n = {}: direct {} vs formula {d}", r.n, r.nu));
                if r.n > params.threshold_index() {
                    let f = dihedral::dihedral_old_formula(params, r.n);
                    old.check(f == r.nu as f64, || format!("n = {}: direct {} vs formula {f}", r.n, r.nu));
                }
            }
            NodalOutcome::Skipped { n, reason, .. } => {
                mu.skip(format!("n = {n}: {reason}"));
                nu.skipped += 1;
            }
        }
    }

    let mut events = Summary::new("event bookkeeping");
    let evs = dihedral::dihedral_events(params, DIHEDRAL_EVENTS);
    let k_top = evs.last().map_or(1.0, |e| e.k);
    let spectrum = spectral::eigenvalues_up_to(&g, k_top + 1.0)?.expanded();
    let mut partial = 0;
    for e in &evs {
        partial += e.d;
        let gap = spectrum.iter().map(|k| (k - e.k).abs()).fold(f64::INFINITY, f64::min);
        events.check(gap >= 1e-8, || format!("p = {}: eigenvalue within {gap:e} of k_p", e.p));
        let count = spectrum.iter().filter(|&&k| k <= e.k).count();
        events.check(partial == count, || format!("p = {}: sum d_p = {partial} vs N(k_p) = {count}", e.p));
    }

    let mut contra = Summary::new("contra-phasal properties");
    let solver = ContraPhasalSolver::new(params)?;
    for i in 0..CONTRA_PHASAL_SAMPLES {
        let k = k_top * (i as f64 + 0.5) / CONTRA_PHASAL_SAMPLES as f64;
        let d = solver.at(k)?.defects();
        contra.check(d.realness < 1e-8 && d.d1_n2 < 1e-8 && d.d2_n1 < 1e-8, || format!("k = {k}: {d:?}"));
    }

    let mut orbit = Summary::new("periodic-orbit partial sums");
    for n in 1..=n_max {
        if dihedral::discontinuity_distance(params, n) <= 0.01 {
            orbit.skipped += 1;
            continue;
        }
        let s = dihedral::periodic_orbit_mu(params, n, PERIODIC_ORBIT_TERMS);
        let m = dihedral::dihedral_mu(params, n) as f64;
        orbit.check((s - m).abs() < 1e-3, || format!("n = {n}: partial sum {s} vs {m}"));
    }

    let identity_violations = dihedral::spectral_identity_check(params, n_max)?
        .into_iter()
        .filter(|r| !r.equal)
        .map(|r| r.n)
        .collect();

    Ok(DihedralReport {
        params: *params,
        warnings: params.irrationality_warnings(),
        suites: vec![mu, nu, old, events, contra, orbit],
        identity_violations,
    })
}
