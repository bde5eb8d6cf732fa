//! Exact nodal counts of the dihedral graph and their diagnostics: split
//! and merge events at the cycle, contra-phasal lead solutions, the Weyl
//! inversion, the spectral floor identity and the periodic-orbit series.

use std::f64::consts::PI;

use serde::Serialize;

use crate::builtins;
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::linalg::{self, cis, CMat, CVec, C64, I};
use crate::scattering::{self, attach_leads, HalfPhase, OpenGraph};
use crate::spectral::{self, Eigenpair};

/// Pendant length `a`, half cycle lengths `b` and `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DihedralParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for DihedralParams {
    fn default() -> Self {
        let (a, b, c) = builtins::DIHEDRAL_DEFAULT;
        DihedralParams { a, b, c }
    }
}

impl DihedralParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(DihedralParams { a, b, c })
    }

    /// `(b + c) / (a + b + c)`.
    pub fn alpha(&self) -> f64 {
        (self.b + self.c) / (self.a + self.b + self.c)
    }

    /// Last index at which every eigenfunction keeps `n` domains.
    pub fn threshold_index(&self) -> usize {
        (self.a / (self.b + self.c)).floor() as usize + 1
    }

    pub fn total_length(&self) -> f64 {
        2.0 * (self.a + self.b + self.c)
    }

    pub fn graph(&self) -> MetricGraph {
        builtins::dihedral(self.a, self.b, self.c).expect("validated lengths")
    }

    pub fn cycle(&self) -> MetricGraph {
        builtins::dihedral_cycle(self.b, self.c).expect("validated lengths")
    }

    /// Advisory: ratios that sit on a rational with denominator up to 1e6.
    /// Empty for the default parameters.
    pub fn irrationality_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, x) in [("b/c", self.b / self.c), ("a/(b+c)", self.a / (self.b + self.c))] {
            if let Some((p, q)) = rational_match(x, 1_000_000, 1e-12) {
                out.push(format!("{name} = {x} is within 1e-12 of {p}/{q}"));
            }
        }
        out
    }
}

/// First continued-fraction convergent `p/q` with `q <= max_den` lying
/// within `min(tol, 1e-3 / q^2)` of `x`. Every irrational has convergents
/// within `1 / q^2`, so only anomalously close ones count as a match.
fn rational_match(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e12 {
            return None;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            return None;
        }
        let q = q2 as f64;
        if (x - p2 as f64 / q).abs() < tol.min(1e-3 / (q * q)) {
            return Some((p2, q2));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - r.floor();
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

fn floor_parity(x: f64) -> usize {
    (x.floor() as i64).rem_euclid(2) as usize
}

/// `n + mod2(floor(alpha n))`, counting the zero on the Dirichlet vertex.
pub fn dihedral_mu(params: &DihedralParams, n: usize) -> usize {
    n + floor_parity(params.alpha() * n as f64)
}

pub fn dihedral_nu(params: &DihedralParams, n: usize) -> usize {
    if n <= params.threshold_index() {
        n
    } else {
        n - 1 + floor_parity(params.alpha() * n as f64)
    }
}

/// The earlier conjectured domain count `n - 1/2 - (-1)^floor(alpha n) / 2`.
pub fn dihedral_old_formula(params: &DihedralParams, n: usize) -> f64 {
    let sign = if floor_parity(params.alpha() * n as f64) == 0 { 1.0 } else { -1.0 };
    n as f64 - 0.5 - 0.5 * sign
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Split,
    Merge,
}

/// A wave number where the nodal point on the cycle meets a cycle vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DihedralEvent {
    pub p: usize,
    pub k: f64,
    pub kind: EventKind,
    /// Eigenvalues in `(k_{p-1}, k_p)`.
    pub d: usize,
}

pub fn dihedral_events(params: &DihedralParams, p_max: usize) -> Vec<DihedralEvent> {
    let s = params.b + params.c;
    let ratio = params.a / s;
    (1..=p_max)
        .map(|p| DihedralEvent {
            p,
            k: PI * p as f64 / (2.0 * s),
            kind: if p % 2 == 1 { EventKind::Split } else { EventKind::Merge },
            d: ((ratio * p as f64).floor() - (ratio * (p - 1) as f64).floor()) as usize + 1,
        })
        .collect()
}

/// A real wave `amplitude * cos(phase + k x)` on a lead, `x` measured from
/// the attachment vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadWave {
    pub amplitude: f64,
    pub phase: f64,
}

/// A solution on the two-lead cycle whose lead waves are real and
/// quarter-period shifted against each other.
#[derive(Debug, Clone, PartialEq)]
pub struct ContraPhasal {
    pub k: f64,
    /// Continuous branch with `e^{2 i phi} = det S`.
    pub phi: f64,
    pub gamma: f64,
    pub f1: LeadWave,
    pub f2: LeadWave,
    pub c_in: CVec,
    pub s: CMat,
    /// Max deviation of `S` from its symmetric `(gamma, phi)` form.
    pub fit_residual: f64,
}

/// Defects of the contra-phasal properties, read from `c_out = S c_in`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContraPhasalDefects {
    /// `max_j |c_in_j - conj(c_out_j)|` relative to the largest amplitude.
    pub realness: f64,
    /// Offset between zeros of `f1` and critical points of `f2`.
    pub d1_n2: f64,
    /// Offset between zeros of `f2` and critical points of `f1`.
    pub d2_n1: f64,
}

/// Builds contra-phasal solutions for one parameter set.
#[derive(Debug, Clone)]
pub struct ContraPhasalSolver {
    og: OpenGraph,
    anchor: f64,
}

impl ContraPhasalSolver {
    pub fn new(params: &DihedralParams) -> Result<Self> {
        let og = attach_leads(&params.cycle(), &["p", "q"])?;
        Ok(ContraPhasalSolver { og, anchor: PI / (16.0 * (params.b + params.c)) })
    }

    pub fn open_graph(&self) -> &OpenGraph {
        &self.og
    }

    pub fn at(&self, k: f64) -> Result<ContraPhasal> {
        let half = HalfPhase::new(&self.og, self.anchor)?;
        let phi = half.at(k)?;
        let sample = scattering::scattering_matrix(&self.og, k)?;
        let s = sample.s().clone();
        let rot = cis(-phi);
        let cos_g = (s[(0, 0)] * rot).re;
        let sin_g = (s[(0, 1)] * rot / I).re;
        let gamma = sin_g.atan2(cos_g);
        let model = CMat::from_fn(2, 2, |r, c| if r == c { cis(phi) * cos_g } else { cis(phi) * I * sin_g });
        let fit_residual = linalg::max_abs_diff(&s, &model);

        let tol = 1e-9;
        let (w1, w2) = if (1.0 + cos_g).abs() < tol {
            (0.0, 1.0)
        } else {
            (1.0, (cos_g - 1.0) / sin_g)
        };
        let w2 = if (1.0 - cos_g).abs() < tol && w1 != 0.0 { 0.0 } else { w2 };
        let c_in = CVec::from_vec(vec![0.5 * w1 * cis(-phi / 2.0), 0.5 * w2 * cis(-(phi - PI) / 2.0)]);
        Ok(ContraPhasal {
            k,
            phi,
            gamma,
            f1: LeadWave { amplitude: w1, phase: phi / 2.0 },
            f2: LeadWave { amplitude: w2, phase: (phi - PI) / 2.0 },
            c_in,
            s,
            fit_residual,
        })
    }

    /// Amplitudes on the two cycle edges excited by the solution.
    pub fn internal(&self, sol: &ContraPhasal) -> Result<CVec> {
        scattering::internal_amplitudes(&self.og, sol.k, &sol.c_in)
    }

    /// Relative least-squares misfit between a dihedral eigenfunction and
    /// the contra-phasal solution at the same `k`, minimized over the two
    /// reflections of the solution. `pair` must be simple.
    pub fn eigenfunction_misfit(&self, params: &DihedralParams, pair: &Eigenpair) -> Result<f64> {
        let g = params.graph();
        let pair = if pair.amplitudes.is_some() { pair.clone() } else { spectral::eigenfunction(&g, pair)? };
        let sol = self.at(pair.k)?;
        let mut best = f64::INFINITY;
        for reflect in [false, true] {
            let mut sol = sol.clone();
            if reflect {
                sol.c_in = CVec::from_vec(vec![sol.c_in[1], sol.c_in[0]]);
            }
            best = best.min(self.misfit(&g, &pair, &sol)?);
        }
        Ok(best)
    }

    fn misfit(&self, g: &MetricGraph, pair: &Eigenpair, sol: &ContraPhasal) -> Result<f64> {
        const SAMPLES: usize = 16;
        let k = sol.k;
        let a = self.internal(sol)?;
        let c_out = &sol.s * &sol.c_in;
        let mut model = Vec::new();
        let mut target = Vec::new();
        // cycle edges share orientation and order with the dihedral graph
        for (ci, gi) in [(0usize, 1usize), (1, 2)] {
            let len = g.edges()[gi].length;
            for s in 0..SAMPLES {
                let x = len * (s as f64 + 0.5) / SAMPLES as f64;
                model.push(a[2 * ci] * cis(-k * x) + a[2 * ci + 1] * cis(k * (x - len)));
                target.push(spectral::evaluate_at(g, pair, gi, x));
            }
        }
        // pendants continue the leads: `pa` leaves p, `qa` leaves q
        for (lead, gi) in [(0usize, 0usize), (1, 3)] {
            let len = g.edges()[gi].length;
            for s in 0..SAMPLES {
                let x = len * (s as f64 + 0.5) / SAMPLES as f64;
                model.push(sol.c_in[lead] * cis(-k * x) + c_out[lead] * cis(k * x));
                target.push(spectral::evaluate_at(g, pair, gi, x));
            }
        }
        let gg: f64 = model.iter().map(|z| z.norm_sqr()).sum();
        let ff: f64 = target.iter().map(|t| t * t).sum();
        if gg == 0.0 || ff == 0.0 {
            return Ok(f64::INFINITY);
        }
        let scale: C64 = model.iter().zip(&target).map(|(m, &t)| m.conj() * t).sum::<C64>() / gg;
        let res: f64 = model.iter().zip(&target).map(|(m, &t)| (C64::new(t, 0.0) - scale * m).norm_sqr()).sum();
        Ok((res / ff).sqrt())
    }
}

impl ContraPhasal {
    pub fn defects(&self) -> ContraPhasalDefects {
        let c_out = &self.s * &self.c_in;
        let scale = self.c_in.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let realness = (0..2).map(|j| (self.c_in[j] - c_out[j].conj()).norm()).fold(0.0, f64::max) / scale;
        let theta: Vec<Option<f64>> =
            (0..2).map(|j| if c_out[j].norm() > 1e-9 * scale { Some(c_out[j].arg()) } else { None }).collect();
        // zeros at k x = pi/2 - theta_i, critical points at k x = -theta_j (mod pi)
        let offset = |i: usize, j: usize| match (theta[i], theta[j]) {
            (Some(ti), Some(tj)) => {
                let d = (PI / 2.0 - ti + tj).rem_euclid(PI);
                d.min(PI - d) / self.k
            }
            _ => 0.0,
        };
        ContraPhasalDefects { realness, d1_n2: offset(0, 1), d2_n1: offset(1, 0) }
    }
}

/// `k_n ~ pi n / total_length`; `n = 0` lies outside the formula's domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylEstimate {
    pub k: f64,
    pub in_domain: bool,
}

pub fn weyl_inverse_k(n: usize, total_length: f64) -> WeylEstimate {
    WeylEstimate { k: PI * n as f64 / total_length, in_domain: n >= 1 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityRow {
    pub n: usize,
    pub k: f64,
    /// `floor(2 a k_n / pi)`.
    pub lhs: i64,
    /// `floor(a n / (a + b + c))`.
    pub rhs: i64,
    pub equal: bool,
    pub parity_equal: bool,
    /// `|k_n - k_n^Weyl| / k_n`.
    pub weyl_relative_error: f64,
}

/// Compares the floors of the scaled eigenvalues with their Weyl estimates.
pub fn spectral_identity_check(params: &DihedralParams, n_max: usize) -> Result<Vec<IdentityRow>> {
    let spec = spectral::first_eigenvalues(&params.graph(), n_max)?;
    let ks = spec.expanded();
    Ok((1..=n_max)
        .map(|n| {
            let k = ks[n - 1];
            let lhs = (2.0 * params.a * k / PI).floor() as i64;
            let rhs = (params.a * n as f64 / (params.a + params.b + params.c)).floor() as i64;
            let weyl = weyl_inverse_k(n, params.total_length()).k;
            IdentityRow {
                n,
                k,
                lhs,
                rhs,
                equal: lhs == rhs,
                parity_equal: lhs.rem_euclid(2) == rhs.rem_euclid(2),
                weyl_relative_error: (k - weyl).abs() / k,
            }
        })
        .collect())
}

/// Partial sum of the odd-harmonic series for the zero count:
/// `n + 1/2 - sum_{j<K} 2 sin((2j+1) pi alpha n) / ((2j+1) pi)`.
pub fn periodic_orbit_mu(params: &DihedralParams, n: usize, terms: usize) -> f64 {
    let x = PI * params.alpha() * n as f64;
    // smallest terms first
    let series: f64 = (0..terms)
        .rev()
        .map(|j| {
            let m = (2 * j + 1) as f64;
            2.0 * (m * x).sin() / (m * PI)
        })
        .sum();
    n as f64 + 0.5 - series
}

/// Distance from `alpha n` to the nearest integer.
pub fn discontinuity_distance(params: &DihedralParams, n: usize) -> f64 {
    let x = params.alpha() * n as f64;
    (x - x.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_at_small_indices() {
        let p = DihedralParams::default();
        assert_eq!(dihedral_mu(&p, 1), 1);
        assert_eq!(dihedral_nu(&p, 1), 1);
        let n_star = p.threshold_index();
        assert_eq!(dihedral_nu(&p, n_star), n_star);
        let one = periodic_orbit_mu(&p, 3, 1);
        assert!((one - (3.5 - 2.0 / PI * (PI * p.alpha() * 3.0).sin())).abs() < 1e-14);
    }

    #[test]
    fn events_alternate() {
        let p = DihedralParams::default();
        let ev = dihedral_events(&p, 4);
        assert!((ev[0].k - PI / (2.0 * (p.b + p.c))).abs() < 1e-15);
        assert_eq!(ev[0].kind, EventKind::Split);
        assert_eq!(ev[1].kind, EventKind::Merge);
    }

    #[test]
    fn rational_ratios_are_flagged() {
        assert!(DihedralParams::new(1.0, 0.5, 0.5).unwrap().irrationality_warnings().len() == 2);
        assert!(DihedralParams::new(1.0, 0.0, 0.5).is_err());
        assert_eq!(rational_match(0.75, 100, 1e-12), Some((3, 4)));
        assert_eq!(rational_match(2f64.sqrt(), 1_000_000, 1e-12), None);
        assert!(DihedralParams::default().irrationality_warnings().is_empty());
    }

    #[test]
    fn contra_phasal_properties_hold() {
        let p = DihedralParams::default();
        let solver = ContraPhasalSolver::new(&p).unwrap();
        for k in [0.3, 1.1, 2.9, 7.4] {
            let sol = solver.at(k).unwrap();
            assert!(sol.fit_residual < 1e-9, "fit {k}: {}", sol.fit_residual);
            let d = sol.defects();
            assert!(d.realness < 1e-8 && d.d1_n2 < 1e-8 && d.d2_n1 < 1e-8, "{k}: {d:?}");
        }
    }

    #[test]
    fn contra_phasal_matches_eigenfunctions() {
        let p = DihedralParams::default();
        let solver = ContraPhasalSolver::new(&p).unwrap();
        let spec = spectral::first_eigenvalues(&p.graph(), 6).unwrap();
        for pair in spec.pairs.iter().take(6) {
            let m = solver.eigenfunction_misfit(&p, pair).unwrap();
            assert!(m < 1e-7, "k = {}: misfit {m}", pair.k);
        }
    }
}
