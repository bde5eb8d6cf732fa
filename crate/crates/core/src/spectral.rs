//! Quantum evolution map, secular equation, spectrum and eigenfunctions.
//!
//! Amplitudes are incoming: entry `j` of a vector is the amplitude of the
//! wave arriving at the vertex of directed coordinate `j`. On edge `i` with
//! offset `x` from its `from` vertex the solution reads
//! `a[2i] e^{-ikx} + a[2i+1] e^{ik(x - L_i)}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flow::{self, PhaseFlow, Probe};
use crate::graph::{GraphPoint, MetricGraph, VertexCondition};
use crate::linalg::{self, cis, CMat, CVec, C64};

/// Singular-value threshold (relative) for kernel dimensions.
pub const KERNEL_TOL: f64 = 1e-8;
/// Relative width to which crossings are refined.
pub const ROOT_TOL: f64 = 1e-14;
/// Half-width of the exclusion window in [`counting_function`].
pub const COUNT_GUARD: f64 = 1e-9;
/// Second kernel cutoff, used when [`KERNEL_TOL`] disagrees with the
/// crossing count. Two roots a distance `d` apart leave a singular value
/// of order `d * sum L`, so a near pair passes the first cutoff as one.
pub const NEAR_PAIR_TOL: f64 = 1e-12;
/// Samples per edge used for the realness rotation.
pub const SAMPLES_PER_EDGE: usize = 64;

pub fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveK(k))
    }
}

/// Unitary `d x d` map from incoming to outgoing amplitudes at a vertex.
pub fn vertex_scattering_matrix(condition: VertexCondition, degree: usize, k: f64) -> Result<CMat> {
    check_k(k)?;
    let d = degree as f64;
    let coupling = match condition.canonical() {
        VertexCondition::Dirichlet => return Ok(-CMat::identity(degree, degree)),
        VertexCondition::Neumann => C64::new(2.0 / d, 0.0),
        VertexCondition::Delta(alpha) => C64::new(2.0, 0.0) / C64::new(d, alpha / k),
    };
    Ok(CMat::from_fn(degree, degree, |i, j| if i == j { coupling - 1.0 } else { coupling }))
}

/// Phase of the vertex-matrix eigenvalue on the constant vector:
/// `-2 atan(alpha / (k d))`; zero for Neumann, unused for Dirichlet.
pub(crate) fn delta_phase(alpha: f64, degree: usize, k: f64) -> f64 {
    -2.0 * (alpha / (k * degree as f64)).atan()
}

/// `U(k) = e^{ikL} J Sigma(k)` together with its factors.
#[derive(Debug, Clone)]
pub struct EvolutionMap {
    pub k: f64,
    /// Block-diagonal vertex scattering in directed coordinates.
    pub sigma: CMat,
    /// Length attached to each directed coordinate.
    pub lengths: Vec<f64>,
}

impl EvolutionMap {
    pub fn assemble(g: &MetricGraph, k: f64) -> Result<Self> {
        check_k(k)?;
        let n = 2 * g.num_edges();
        let mut sigma = CMat::zeros(n, n);
        for (v, vert) in g.vertices().iter().enumerate() {
            let ends = g.ends(v);
            let s = vertex_scattering_matrix(vert.condition, ends.len(), k)?;
            for (a, &ja) in ends.iter().enumerate() {
                for (b, &jb) in ends.iter().enumerate() {
                    sigma[(ja, jb)] = s[(a, b)];
                }
            }
        }
        let lengths = (0..n).map(|j| g.edges()[j / 2].length).collect();
        Ok(EvolutionMap { k, sigma, lengths })
    }

    pub fn dimension(&self) -> usize {
        self.lengths.len()
    }

    /// The involution exchanging the two ends of each edge.
    pub fn swap(j: usize) -> usize {
        j ^ 1
    }

    pub fn j_matrix(&self) -> CMat {
        let n = self.dimension();
        CMat::from_fn(n, n, |r, c| if c == Self::swap(r) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn matrix(&self) -> CMat {
        let n = self.dimension();
        CMat::from_fn(n, n, |r, c| cis(self.k * self.lengths[r]) * self.sigma[(Self::swap(r), c)])
    }
}

pub fn evolution_map(g: &MetricGraph, k: f64) -> Result<CMat> {
    Ok(EvolutionMap::assemble(g, k)?.matrix())
}

/// `det(I - U(k))`.
pub fn secular_value(g: &MetricGraph, k: f64) -> Result<C64> {
    let u = evolution_map(g, k)?;
    let n = u.nrows();
    Ok(linalg::determinant(&(CMat::identity(n, n) - u)))
}

/// An eigenvalue `k^2` with multiplicity and, once filled by
/// [`eigenfunction`], a kernel vector and realness phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    /// 1-based index of the first copy of this eigenvalue.
    pub index: usize,
    pub k: f64,
    pub multiplicity: usize,
    pub amplitudes: Option<CVec>,
    pub phase: C64,
}

impl Eigenpair {
    pub fn new(index: usize, k: f64, multiplicity: usize) -> Self {
        Eigenpair { index, k, multiplicity, amplitudes: None, phase: C64::new(1.0, 0.0) }
    }

    pub fn lambda(&self) -> f64 {
        self.k * self.k
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity == 1
    }
}

/// Ordered eigenpairs up to some `k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<Eigenpair>,
    pub k_max: f64,
    /// Number of zero modes (one per all-Neumann component).
    pub zero_modes: usize,
    /// Raised when several components carry a zero mode.
    pub degenerate_zero_mode: bool,
}

impl Spectrum {
    /// Eigenvalues as `k`, repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.pairs.iter().flat_map(|p| std::iter::repeat(p.k).take(p.multiplicity)).collect()
    }

    pub fn count(&self) -> usize {
        self.pairs.iter().map(|p| p.multiplicity).sum()
    }

    /// The pair containing the `n`-th eigenvalue (1-based, with multiplicity).
    pub fn pair_for_index(&self, n: usize) -> Option<&Eigenpair> {
        self.pairs.iter().find(|p| n >= p.index && n < p.index + p.multiplicity)
    }
}

/// Phase flow of `U(k)` towards eigenphase 0.
struct EvolutionFlow<'a> {
    g: &'a MetricGraph,
    trace_l: f64,
    deltas: Vec<(f64, usize)>,
    step: f64,
}

impl<'a> EvolutionFlow<'a> {
    fn new(g: &'a MetricGraph) -> Result<Self> {
        let mut deltas = Vec::new();
        for (v, vert) in g.vertices().iter().enumerate() {
            if let VertexCondition::Delta(alpha) = vert.condition {
                if alpha < 0.0 {
                    return Err(Error::NegativeDelta { vertex: vert.id.clone(), alpha });
                }
                deltas.push((alpha, g.degree(v)));
            }
        }
        let total = g.total_length();
        Ok(EvolutionFlow { g, trace_l: 2.0 * total, deltas, step: PI / (8.0 * total) })
    }

    fn total_phase(&self, k: f64) -> f64 {
        k * self.trace_l + self.deltas.iter().map(|&(a, d)| delta_phase(a, d, k)).sum::<f64>()
    }
}

impl PhaseFlow for EvolutionFlow<'_> {
    fn probe(&self, k: f64) -> Result<Probe> {
        let ev = linalg::eigenvalues(&evolution_map(self.g, k)?)?;
        let wrapped = ev.iter().map(|&z| linalg::wrapped_phase(z, 0.0)).sum();
        Ok(Probe { k, wrapped, total: self.total_phase(k) })
    }

    /// Steps of `pi / (8 sum L)`, halved wherever the closed-form advance
    /// would exceed `pi / 4` (only possible with delta vertices).
    fn grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        if self.deltas.is_empty() {
            return flow::uniform_grid(lo, hi, self.step);
        }
        let mut g = vec![lo];
        let mut k = lo;
        while k < hi {
            let mut h = self.step.min(hi - k);
            while self.total_phase(k + h) - self.total_phase(k) > PI / 4.0 && h > 1e-9 {
                h *= 0.5;
            }
            k = if hi - (k + h) < 1e-3 * h { hi } else { k + h };
            g.push(k);
        }
        g
    }
}

/// Lowest wave number scanned; phases resting at 0 when `k = 0` have moved
/// strictly above 0 by then.
fn k_floor(g: &MetricGraph) -> f64 {
    1e-6 * PI / (8.0 * g.total_length())
}

/// All eigenvalues with `k` in `(0, k_max]`, zero modes prepended. Roots
/// within a relative `1e-9` above `k_max` are included.
pub fn eigenvalues_up_to(g: &MetricGraph, k_max: f64) -> Result<Spectrum> {
    check_k(k_max)?;
    let zero_modes = g.neumann_components();
    let mut pairs = Vec::new();
    let mut next = 1;
    if zero_modes > 0 {
        pairs.push(Eigenpair::new(1, 0.0, zero_modes));
        next += zero_modes;
    }
    if g.is_empty() {
        return Ok(Spectrum { pairs, k_max, zero_modes, degenerate_zero_mode: zero_modes > 1 });
    }
    let fl = EvolutionFlow::new(g)?;
    let lo = k_floor(g);
    // a cluster sitting on k_max is caught whole rather than split
    let hi = k_max * (1.0 + 1e-9) + 1e-9;
    for (k, c) in flow::find_crossings(&fl, lo, hi, ROOT_TOL)? {
        let m = CMat::identity(2 * g.num_edges(), 2 * g.num_edges()) - evolution_map(g, k)?;
        let mut kernel = linalg::kernel_dimension(&m, KERNEL_TOL);
        if kernel != c {
            kernel = linalg::kernel_dimension(&m, NEAR_PAIR_TOL);
        }
        if kernel != c {
            return Err(Error::MultiplicityMismatch { k, crossings: c, kernel });
        }
        pairs.push(Eigenpair::new(next, k, c));
        next += c;
    }
    let spec = Spectrum { pairs, k_max, zero_modes, degenerate_zero_mode: zero_modes > 1 };
    weyl_check(g, &spec)?;
    Ok(spec)
}

/// `|N(k_max) - L k_max / pi| <= 2(|V| + |E|)`; a missed-root detector.
fn weyl_check(g: &MetricGraph, spec: &Spectrum) -> Result<()> {
    let weyl = g.total_length() * spec.k_max / PI;
    let allowed = 2 * (g.num_vertices() + g.num_edges());
    let count = spec.count();
    if (count as f64 - weyl).abs() > allowed as f64 {
        return Err(Error::WeylCheck { k_max: spec.k_max, count, weyl, allowed });
    }
    Ok(())
}

/// At least the first `n` eigenvalues (with multiplicity).
pub fn first_eigenvalues(g: &MetricGraph, n: usize) -> Result<Spectrum> {
    if g.is_empty() {
        return Err(Error::Inconsistent("graph has no edges".into()));
    }
    let mut k_max = PI * (n as f64 + 2.0 * (g.num_vertices() + g.num_edges()) as f64 + 1.0) / g.total_length();
    loop {
        let spec = eigenvalues_up_to(g, k_max)?;
        if spec.count() >= n {
            return Ok(spec);
        }
        k_max *= 1.5;
    }
}

/// `N(k) = #{k_n <= k}` with multiplicity, zero modes included.
pub fn counting_function(g: &MetricGraph, k: f64) -> Result<usize> {
    check_k(k)?;
    let zero_modes = g.neumann_components();
    if g.is_empty() {
        return Ok(zero_modes);
    }
    let fl = EvolutionFlow::new(g)?;
    let lo = k_floor(g);
    let hi = (k - COUNT_GUARD).max(lo);
    let below = flow::count_crossings(&fl, lo, hi)?;
    let near = flow::count_crossings(&fl, hi, k + COUNT_GUARD)?;
    if near > 0 {
        return Err(Error::AmbiguousCount(k));
    }
    Ok(zero_modes + below)
}

/// Fills the kernel vector and the realness phase of a simple eigenpair.
pub fn eigenfunction(g: &MetricGraph, pair: &Eigenpair) -> Result<Eigenpair> {
    if pair.multiplicity != 1 {
        return Err(Error::Degenerate { k: pair.k, multiplicity: pair.multiplicity });
    }
    let n = 2 * g.num_edges();
    let amplitudes = if pair.k == 0.0 {
        zero_mode_amplitudes(g)?
    } else {
        let m = CMat::identity(n, n) - evolution_map(g, pair.k)?;
        let (sv, v) = linalg::svd_right(&m);
        let count = |rel: f64| {
            let cut = linalg::zero_cutoff(sv[0], rel);
            sv.iter().filter(|&&s| s < cut).count()
        };
        let mut kernel = count(KERNEL_TOL);
        if kernel != 1 {
            kernel = count(NEAR_PAIR_TOL);
        }
        if kernel != 1 {
            return Err(Error::MultiplicityMismatch { k: pair.k, crossings: pair.multiplicity, kernel });
        }
        v.column(n - 1).into_owned()
    };
    let mut out = Eigenpair { amplitudes: Some(amplitudes), phase: C64::new(1.0, 0.0), ..pair.clone() };
    let samples = complex_samples(g, &out);
    let s2: C64 = samples.iter().map(|z| z * z).sum();
    let mut phase = cis(-0.5 * s2.arg());
    let (mut worst_im, mut peak, mut peak_val) = (0.0f64, 0.0f64, 0.0f64);
    for z in &samples {
        let w = phase * z;
        worst_im = worst_im.max(w.im.abs());
        if w.re.abs() > peak {
            peak = w.re.abs();
            peak_val = w.re;
        }
    }
    if peak == 0.0 || worst_im > 1e-7 * peak {
        return Err(Error::NotReal(if peak == 0.0 { f64::INFINITY } else { worst_im / peak }));
    }
    if peak_val < 0.0 {
        phase = -phase;
    }
    out.phase = phase;
    Ok(out)
}

/// Constant function on the (unique) all-Neumann component.
fn zero_mode_amplitudes(g: &MetricGraph) -> Result<CVec> {
    let (labels, ncomp) = g.components();
    let mut neumann = vec![true; ncomp];
    for (v, vert) in g.vertices().iter().enumerate() {
        if vert.condition != VertexCondition::Neumann {
            neumann[labels[v]] = false;
        }
    }
    let comp = neumann.iter().position(|&b| b).ok_or_else(|| Error::Inconsistent("no zero mode".into()))?;
    let n = 2 * g.num_edges();
    Ok(CVec::from_fn(n, |j, _| {
        if labels[g.end_vertex(j)] == comp {
            C64::new(0.5, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

fn amplitudes_of(pair: &Eigenpair) -> &CVec {
    pair.amplitudes.as_ref().expect("eigenpair without amplitudes; call eigenfunction first")
}

/// Complex value before the realness phase is applied.
fn raw_value(g: &MetricGraph, pair: &Eigenpair, edge: usize, x: f64) -> C64 {
    let a = amplitudes_of(pair);
    let len = g.edges()[edge].length;
    a[2 * edge] * cis(-pair.k * x) + a[2 * edge + 1] * cis(pair.k * (x - len))
}

fn complex_samples(g: &MetricGraph, pair: &Eigenpair) -> Vec<C64> {
    let mut out = Vec::with_capacity(g.num_edges() * SAMPLES_PER_EDGE);
    for (i, e) in g.edges().iter().enumerate() {
        for s in 0..SAMPLES_PER_EDGE {
            let x = e.length * s as f64 / (SAMPLES_PER_EDGE - 1) as f64;
            out.push(raw_value(g, pair, i, x));
        }
    }
    out
}

/// Real eigenfunction value at a point.
pub fn evaluate(g: &MetricGraph, pair: &Eigenpair, p: &GraphPoint) -> Result<f64> {
    let (i, x) = g.locate(p)?;
    Ok(evaluate_at(g, pair, i, x))
}

/// Real value on edge index `edge` at offset `x` (no range check).
pub fn evaluate_at(g: &MetricGraph, pair: &Eigenpair, edge: usize, x: f64) -> f64 {
    (pair.phase * raw_value(g, pair, edge, x)).re
}

/// Complex residual part of the phased function (diagnostic).
pub fn imaginary_part_at(g: &MetricGraph, pair: &Eigenpair, edge: usize, x: f64) -> f64 {
    (pair.phase * raw_value(g, pair, edge, x)).im
}

/// Real form `f(x) = amplitude * cos(k x + shift)` of the eigenfunction on an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWave {
    pub k: f64,
    pub length: f64,
    pub amplitude: f64,
    pub shift: f64,
}

impl EdgeWave {
    pub fn value(&self, x: f64) -> f64 {
        self.amplitude * (self.k * x + self.shift).cos()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        -self.amplitude * self.k * (self.k * x + self.shift).sin()
    }
}

pub fn edge_wave(g: &MetricGraph, pair: &Eigenpair, edge: usize) -> EdgeWave {
    let a = amplitudes_of(pair);
    let len = g.edges()[edge].length;
    let p = pair.phase * a[2 * edge];
    let q = pair.phase * a[2 * edge + 1] * cis(-pair.k * len);
    let b = 0.5 * (q + p.conj());
    EdgeWave { k: pair.k, length: len, amplitude: 2.0 * b.norm(), shift: b.arg() }
}

/// Value of the eigenfunction at each vertex, read from its first incident end.
pub fn vertex_values(g: &MetricGraph, pair: &Eigenpair) -> Vec<f64> {
    (0..g.num_vertices())
        .map(|v| {
            let j = g.ends(v)[0];
            let x = if j % 2 == 0 { 0.0 } else { g.edges()[j / 2].length };
            evaluate_at(g, pair, j / 2, x)
        })
        .collect()
}

/// Outgoing derivative of the eigenfunction along directed coordinate `j`
/// at its vertex.
pub fn outgoing_derivative(g: &MetricGraph, pair: &Eigenpair, j: usize) -> f64 {
    let w = edge_wave(g, pair, j / 2);
    if j % 2 == 0 {
        w.derivative(0.0)
    } else {
        -w.derivative(w.length)
    }
}

/// `max |f|` over the graph, from the closed form on each edge.
pub fn sup_norm(g: &MetricGraph, pair: &Eigenpair) -> f64 {
    let mut m = 0.0f64;
    for i in 0..g.num_edges() {
        let w = edge_wave(g, pair, i);
        m = m.max(w.value(0.0).abs()).max(w.value(w.length).abs());
        // interior extremum where k x + shift is a multiple of pi
        let first = (w.shift / PI).ceil();
        if pair.k > 0.0 && first * PI <= w.k * w.length + w.shift {
            m = m.max(w.amplitude);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use std::f64::consts::TAU;
    use VertexCondition::*;

    #[test]
    fn vertex_matrices() {
        assert_eq!(vertex_scattering_matrix(Neumann, 1, 1.0).unwrap()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(vertex_scattering_matrix(Dirichlet, 1, 1.0).unwrap()[(0, 0)], C64::new(-1.0, 0.0));
        let s = vertex_scattering_matrix(Neumann, 3, 2.0).unwrap();
        assert!((s[(0, 0)].re + 1.0 / 3.0).abs() < 1e-16 && (s[(0, 1)].re - 2.0 / 3.0).abs() < 1e-16);
        assert!(linalg::unitarity_defect(&s) < 1e-15);
        let d = vertex_scattering_matrix(Delta(1.7), 4, 0.8).unwrap();
        assert!(linalg::unitarity_defect(&d) < 1e-15);
        assert!(vertex_scattering_matrix(Neumann, 2, 0.0).is_err());
    }

    #[test]
    fn delta_matrix_eigenphase() {
        let (alpha, d, k) = (2.3, 3, 1.1);
        let s = vertex_scattering_matrix(Delta(alpha), d, k).unwrap();
        let ones = CVec::from_element(d, C64::new(1.0, 0.0));
        let image = &s * &ones;
        let expected = cis(delta_phase(alpha, d, k));
        for z in image.iter() {
            assert!((z - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn dirichlet_interval_secular_equation_is_sine() {
        let g = builtins::interval(PI, Dirichlet, Dirichlet);
        assert!(secular_value(&g, 1.0).unwrap().norm() < 1e-12);
        assert!(secular_value(&g, 0.5).unwrap().norm() > 0.1);
        // 2x2 case: det(I - U) = 1 - e^{2ikL}, modulus 2|sin(kL)|
        for k in [0.3, 1.7, 2.2] {
            let v = secular_value(&g, k).unwrap().norm();
            assert!((v - 2.0 * (k * PI).sin().abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn evolution_map_factors() {
        let g = builtins::lasso();
        let em = EvolutionMap::assemble(&g, 1.3).unwrap();
        let j = em.j_matrix();
        assert_eq!(&j * &j, CMat::identity(em.dimension(), em.dimension()));
        let phases = CMat::from_diagonal(&CVec::from_iterator(em.dimension(), em.lengths.iter().map(|&l| cis(1.3 * l))));
        assert!(linalg::max_abs_diff(&(phases * j * &em.sigma), &em.matrix()) < 1e-15);
        for r in 0..em.dimension() {
            for c in 0..em.dimension() {
                assert!(em.sigma[(r, c)].im == 0.0 && em.sigma[(r, c)] == em.sigma[(c, r)]);
            }
        }
    }

    #[test]
    fn interval_spectra() {
        let g = builtins::interval(PI, Dirichlet, Dirichlet);
        let ks = eigenvalues_up_to(&g, 5.5).unwrap().expanded();
        assert_eq!(ks.len(), 5);
        for (n, k) in ks.iter().enumerate() {
            assert!((k - (n + 1) as f64).abs() < 1e-9);
        }
        let g = builtins::interval(1.0, Neumann, Neumann);
        let ks = eigenvalues_up_to(&g, 10.0).unwrap().expanded();
        assert_eq!(ks.len(), 4);
        assert_eq!(ks[0], 0.0);
        for n in 1..4 {
            assert!((ks[n] - n as f64 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn circle_is_doubly_degenerate() {
        let g = builtins::circle(1.0);
        let spec = eigenvalues_up_to(&g, 13.0).unwrap();
        let got: Vec<(f64, usize)> = spec.pairs.iter().map(|p| (p.k, p.multiplicity)).collect();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0], (0.0, 1));
        assert!((got[1].0 - TAU).abs() < 1e-9 && got[1].1 == 2);
        assert!((got[2].0 - 2.0 * TAU).abs() < 1e-9 && got[2].1 == 2);
        assert!(matches!(eigenfunction(&g, &spec.pairs[1]), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn counting_function_examples() {
        let g = builtins::interval(PI, Dirichlet, Dirichlet);
        assert_eq!(counting_function(&g, 3.5).unwrap(), 3);
        assert!(matches!(counting_function(&g, 3.0), Err(Error::AmbiguousCount(_))));
        assert_eq!(counting_function(&MetricGraph::empty(), 7.0).unwrap(), 0);
    }

    #[test]
    fn interval_eigenfunctions() {
        let g = builtins::interval(1.0, Dirichlet, Dirichlet);
        let spec = eigenvalues_up_to(&g, 7.0).unwrap();
        let f2 = eigenfunction(&g, &spec.pairs[1]).unwrap();
        let q1 = evaluate(&g, &f2, &GraphPoint::new("e", 0.25)).unwrap();
        let q3 = evaluate(&g, &f2, &GraphPoint::new("e", 0.75)).unwrap();
        assert!(q1 * q3 < 0.0 && (q1 + q3).abs() < 1e-9 * q1.abs());
        let f1 = eigenfunction(&g, &spec.pairs[0]).unwrap();
        let mid = evaluate(&g, &f1, &GraphPoint::new("e", 0.5)).unwrap();
        assert!((mid.abs() - sup_norm(&g, &f1)).abs() < 1e-9 * mid.abs());
        let end = evaluate(&g, &f1, &GraphPoint::new("e", 1.0)).unwrap();
        assert!(end.abs() < 1e-8 * mid.abs());
    }

    #[test]
    fn negative_delta_is_rejected() {
        let g = builtins::interval(1.0, Delta(-1.0), Neumann);
        assert!(matches!(eigenvalues_up_to(&g, 5.0), Err(Error::NegativeDelta { .. })));
    }
}
