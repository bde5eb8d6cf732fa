//! Semi-infinite leads at marked vertices, the blocks of `Q(k)`, the
//! unitary scattering matrix `S(k)` (including the singular set), its
//! eigenphases, and the sign-weighted counting function.
//!
//! Open-graph coordinates: leads first (`0..M`, in marking order), then the
//! `2|E|` directed coordinates of the base graph shifted by `M`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flow::{self, PhaseFlow, Probe};
use crate::graph::{GraphPoint, MetricGraph, VertexCondition};
use crate::linalg::{self, cis, CMat, CVec, C64};
use crate::spectral::{self, check_k, delta_phase, vertex_scattering_matrix, EvolutionMap, KERNEL_TOL};

/// Residual above which the singular solve is treated as a bug.
const CONTAINMENT_TOL: f64 = 1e-6;
/// Half-width of the window around a singular point where the closed-form
/// total phase is replaced by a direct determinant ratio.
const DELTA_GUARD: f64 = 1e-7;
/// Offset below an eigenvalue at which the swcf crossing direction is read.
const SWCF_OFFSET: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct OpenGraph {
    pub base: MetricGraph,
    pub marked: Vec<String>,
    marked_idx: Vec<usize>,
}

pub fn attach_leads<S: AsRef<str>>(g: &MetricGraph, marked: &[S]) -> Result<OpenGraph> {
    if marked.is_empty() {
        return Err(Error::NoLeads);
    }
    let mut idx = Vec::with_capacity(marked.len());
    for m in marked {
        let v = g.vertex_idx(m.as_ref())?;
        if idx.contains(&v) {
            return Err(Error::DuplicateLead(m.as_ref().to_string()));
        }
        idx.push(v);
    }
    Ok(OpenGraph {
        base: g.clone(),
        marked: marked.iter().map(|m| m.as_ref().to_string()).collect(),
        marked_idx: idx,
    })
}

impl OpenGraph {
    pub fn num_leads(&self) -> usize {
        self.marked.len()
    }

    /// Base graph with Dirichlet imposed at every marked vertex.
    pub fn dirichlet_closure(&self) -> Result<MetricGraph> {
        let mut g = self.base.clone();
        for m in &self.marked {
            g = g.change_vertex_parameter(m, VertexCondition::Dirichlet)?;
        }
        Ok(g)
    }

    fn lead_of(&self, v: usize) -> Option<usize> {
        self.marked_idx.iter().position(|&m| m == v)
    }

    /// `Q(k) = e^{ik L_o} J_o Sigma_o(k)`.
    fn q_matrix(&self, k: f64) -> Result<CMat> {
        check_k(k)?;
        let m = self.num_leads();
        let n = m + 2 * self.base.num_edges();
        let mut sigma = CMat::zeros(n, n);
        for (v, vert) in self.base.vertices().iter().enumerate() {
            let mut ends: Vec<usize> = self.lead_of(v).into_iter().collect();
            ends.extend(self.base.ends(v).iter().map(|&j| m + j));
            let s = vertex_scattering_matrix(vert.condition, ends.len(), k)?;
            for (a, &ja) in ends.iter().enumerate() {
                for (b, &jb) in ends.iter().enumerate() {
                    sigma[(ja, jb)] = s[(a, b)];
                }
            }
        }
        let length = |r: usize| if r < m { 0.0 } else { self.base.edges()[(r - m) / 2].length };
        let swap = |r: usize| if r < m { r } else { m + EvolutionMap::swap(r - m) };
        Ok(CMat::from_fn(n, n, |r, c| cis(k * length(r)) * sigma[(swap(r), c)]))
    }

    /// Continuous total phase of `det Q`, up to a constant.
    fn q_total_phase(&self, k: f64) -> f64 {
        let mut t = 2.0 * self.base.total_length() * k;
        for (v, vert) in self.base.vertices().iter().enumerate() {
            if let VertexCondition::Delta(alpha) = vert.condition {
                let d = self.base.degree(v) + usize::from(self.lead_of(v).is_some());
                t += delta_phase(alpha, d, k);
            }
        }
        t
    }
}

/// Blocks of `Q(k) = [[R, T_o], [T_i, U~]]` and, once solved, `S(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSample {
    pub k: f64,
    pub r: CMat,
    pub t_o: CMat,
    pub t_i: CMat,
    pub u_tilde: CMat,
    pub s: Option<CMat>,
    pub in_delta: bool,
    /// Smallest singular value of `I - U~`.
    pub sigma_min: f64,
}

impl ScatteringSample {
    pub fn num_leads(&self) -> usize {
        self.r.nrows()
    }

    pub fn q(&self) -> CMat {
        let m = self.num_leads();
        let n = m + self.u_tilde.nrows();
        let mut q = CMat::zeros(n, n);
        q.view_mut((0, 0), (m, m)).copy_from(&self.r);
        q.view_mut((0, m), (m, n - m)).copy_from(&self.t_o);
        q.view_mut((m, 0), (n - m, m)).copy_from(&self.t_i);
        q.view_mut((m, m), (n - m, n - m)).copy_from(&self.u_tilde);
        q
    }

    /// The filled scattering matrix.
    pub fn s(&self) -> &CMat {
        self.s.as_ref().expect("sample without S; use scattering_matrix")
    }

    fn i_minus_u(&self) -> CMat {
        let n = self.u_tilde.nrows();
        CMat::identity(n, n) - &self.u_tilde
    }
}

pub fn q_blocks(og: &OpenGraph, k: f64) -> Result<ScatteringSample> {
    let q = og.q_matrix(k)?;
    let m = og.num_leads();
    let n = q.nrows() - m;
    Ok(ScatteringSample {
        k,
        r: q.view((0, 0), (m, m)).into_owned(),
        t_o: q.view((0, m), (m, n)).into_owned(),
        t_i: q.view((m, 0), (n, m)).into_owned(),
        u_tilde: q.view((m, m), (n, n)).into_owned(),
        s: None,
        in_delta: false,
        sigma_min: f64::NAN,
    })
}

/// Largest `max |S* S - I|` accepted from the solve.
const UNITARITY_TOL: f64 = 1e-10;
/// Largest defect the phase flow repairs by projecting onto the unitary
/// group. Close to `k = 0` the solve is ill-conditioned while `S` is not.
const FLOW_UNITARITY_TOL: f64 = 1e-3;
/// Kernel cutoff of the phase-flow solve. Near-resonances push `sigma_min`
/// below [`KERNEL_TOL`] without `I - U~` being singular, so the flow keeps
/// every direction above rounding noise; genuine singular points are
/// handled by the guard windows.
const FLOW_KERNEL_TOL: f64 = 1e-14;

/// `S = R + T_o C` with `C` the minimal-norm solution of `(I - U~) C = T_i`.
pub fn scattering_matrix(og: &OpenGraph, k: f64) -> Result<ScatteringSample> {
    let (sample, defect) = solve_scattering(og, k, KERNEL_TOL)?;
    if defect > UNITARITY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(sample)
}

/// As [`scattering_matrix`], replacing a slightly non-unitary `S` by the
/// nearest unitary matrix.
fn flow_scattering_matrix(og: &OpenGraph, k: f64) -> Result<ScatteringSample> {
    let (mut sample, defect) = solve_scattering(og, k, FLOW_KERNEL_TOL)?;
    if defect > UNITARITY_TOL {
        if defect > FLOW_UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        sample.s = Some(linalg::nearest_unitary(sample.s()));
    }
    Ok(sample)
}

fn solve_scattering(og: &OpenGraph, k: f64, cutoff: f64) -> Result<(ScatteringSample, f64)> {
    let mut sample = q_blocks(og, k)?;
    let a = sample.i_minus_u();
    let (c, smin) = if a.nrows() == 0 {
        (CMat::zeros(0, og.num_leads()), f64::INFINITY)
    } else {
        linalg::pseudo_solve(&a, &sample.t_i, cutoff)
    };
    sample.sigma_min = smin;
    sample.in_delta = smin < linalg::zero_cutoff(1.0, KERNEL_TOL);
    if smin < linalg::zero_cutoff(1.0, cutoff) {
        let residual = (&a * &c - &sample.t_i).norm();
        if residual > CONTAINMENT_TOL {
            return Err(Error::KernelContainment(residual));
        }
        let kernel = linalg::kernel_basis(&a, cutoff);
        let leak = (&sample.t_o * kernel).norm();
        if leak > CONTAINMENT_TOL {
            return Err(Error::KernelContainment(leak));
        }
    }
    let s = &sample.r + &sample.t_o * c;
    let defect = linalg::unitarity_defect(&s);
    sample.s = Some(s);
    Ok((sample, defect))
}

/// Amplitudes on the compact part, `C c_in`, excited by incoming lead
/// amplitudes `c_in`.
pub fn internal_amplitudes(og: &OpenGraph, k: f64, c_in: &CVec) -> Result<CVec> {
    let sample = q_blocks(og, k)?;
    let (c, _) = linalg::pseudo_solve(&sample.i_minus_u(), &sample.t_i, KERNEL_TOL);
    Ok(c * c_in)
}

/// Whether `I - U~(k)` is singular to the kernel threshold.
pub fn in_delta(og: &OpenGraph, k: f64) -> Result<bool> {
    let sample = q_blocks(og, k)?;
    let a = sample.i_minus_u();
    Ok(a.nrows() > 0 && linalg::smallest_singular_value(&a) < linalg::zero_cutoff(1.0, KERNEL_TOL))
}

/// Eigenphases of `S`, continued from `previous` when given.
///
/// Continuation matches the sorted phases cyclically (an order-preserving
/// nearest match); sorted branches stay continuous through crossings. A
/// best match that moves some phase by more than `pi / 2` is ambiguous.
pub fn s_eigenphases(sample: &ScatteringSample, previous: Option<&[f64]>) -> Result<Vec<f64>> {
    let mut raw: Vec<f64> = linalg::eigenvalues(sample.s())?.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
    raw.sort_by(f64::total_cmp);
    let Some(prev) = previous else {
        return Ok(raw);
    };
    let m = raw.len();
    if prev.len() != m {
        return Err(Error::Inconsistent("previous phase list has the wrong length".into()));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for shift in 0..m {
        let cand: Vec<f64> = (0..m)
            .map(|i| {
                let r = raw[(i + shift) % m];
                r + TAU * ((prev[i] - r) / TAU).round()
            })
            .collect();
        if cand.windows(2).any(|w| w[1] < w[0] - 1e-12) {
            continue;
        }
        let cost: f64 = cand.iter().zip(prev).map(|(c, p)| (c - p).abs()).sum();
        if best.as_ref().map_or(true, |b| cost < b.0) {
            best = Some((cost, cand));
        }
    }
    let (_, phases) = best.ok_or_else(|| Error::RefineSweep("no order-preserving continuation".into()))?;
    if phases.iter().zip(prev).any(|(c, p)| (c - p).abs() > PI / 2.0) {
        return Err(Error::RefineSweep(format!("phase motion above pi/2 at k = {}", sample.k)));
    }
    Ok(phases)
}

/// Arguments of `1 - lambda` over the eigenvalues of `U~`, clamped to the
/// closed unit disc (a sub-block of a unitary is a contraction).
fn resolvent_phase(u_tilde: &CMat) -> Result<f64> {
    let ev = linalg::eigenvalues(u_tilde)?;
    Ok(ev
        .into_iter()
        .map(|z| {
            let z = if z.norm() > 1.0 { z / z.norm() } else { z };
            (C64::new(1.0, 0.0) - z).arg()
        })
        .sum())
}

/// Continuous total phase of `det S(k)` up to a constant; valid away from
/// the singular set, where it jumps.
pub fn scattering_total_phase(og: &OpenGraph, k: f64) -> Result<f64> {
    let sample = q_blocks(og, k)?;
    Ok(og.q_total_phase(k) - 2.0 * resolvent_phase(&sample.u_tilde)?)
}

/// Phase flow of `S(k)` towards a target angle.
struct ScatterFlow<'a> {
    og: &'a OpenGraph,
    target: f64,
    singular: Vec<f64>,
    step: f64,
}

impl<'a> ScatterFlow<'a> {
    fn new(og: &'a OpenGraph, target: f64, singular: Vec<f64>) -> Self {
        ScatterFlow { og, target, singular, step: PI / (8.0 * og.base.total_length()) }
    }

    fn in_guard(&self, k: f64) -> bool {
        self.singular.iter().any(|&z| (k - z).abs() < DELTA_GUARD)
    }

    fn det_s(&self, k: f64) -> Result<C64> {
        Ok(linalg::determinant(flow_scattering_matrix(self.og, k)?.s()))
    }
}

impl PhaseFlow for ScatterFlow<'_> {
    fn probe(&self, k: f64) -> Result<Probe> {
        let sample = flow_scattering_matrix(self.og, k)?;
        let wrapped = linalg::eigenvalues(sample.s())?
            .iter()
            .map(|&z| linalg::wrapped_phase(z, self.target))
            .sum();
        let total = self.og.q_total_phase(k) - 2.0 * resolvent_phase(&sample.u_tilde)?;
        Ok(Probe { k, wrapped, total })
    }

    /// Inside guard windows the change is read from `det S` directly.
    fn advance(&self, a: &Probe, b: &Probe) -> Result<f64> {
        let touches = self.singular.iter().any(|&z| z + DELTA_GUARD > a.k && z - DELTA_GUARD < b.k);
        if !touches {
            return Ok(b.total - a.total);
        }
        let mut cuts = vec![a.k, b.k];
        for &z in &self.singular {
            for c in [z - DELTA_GUARD, z + DELTA_GUARD] {
                if c > a.k && c < b.k {
                    cuts.push(c);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (p, q) = (w[0], w[1]);
            if self.in_guard(0.5 * (p + q)) {
                total += (self.det_s(q)? * self.det_s(p)?.conj()).arg();
            } else {
                total += scattering_total_phase(self.og, q)? - scattering_total_phase(self.og, p)?;
            }
        }
        Ok(total)
    }

    fn grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        flow::uniform_grid(lo, hi, self.step)
    }
}

fn k_floor(og: &OpenGraph) -> f64 {
    1e-6 * PI / (8.0 * og.base.total_length())
}

/// Points of `(0, k_max]` where `I - U~` is singular, with kernel dimension.
/// Candidates come from the spectrum of the Dirichlet closure, which
/// contains the singular set.
pub fn delta_set(og: &OpenGraph, k_max: f64) -> Result<Vec<(f64, usize)>> {
    let closure = og.dirichlet_closure()?;
    let spec = spectral::eigenvalues_up_to(&closure, k_max)?;
    let mut out = Vec::new();
    for pair in spec.pairs.iter().filter(|p| p.k > 0.0) {
        let sample = q_blocks(og, pair.k)?;
        let dim = linalg::kernel_dimension(&sample.i_minus_u(), KERNEL_TOL);
        if dim > 0 {
            out.push((pair.k, dim));
        }
    }
    Ok(out)
}

/// Crossings of the `S` eigenphases through `target` on `(0, k_max]`.
pub(crate) fn phase_crossings(
    og: &OpenGraph,
    target: f64,
    singular: &[(f64, usize)],
    k_max: f64,
) -> Result<Vec<(f64, usize)>> {
    let fl = ScatterFlow::new(og, target, singular.iter().map(|d| d.0).collect());
    flow::find_crossings(&fl, k_floor(og), k_max, spectral::ROOT_TOL)
}

/// Zeros of `det(I - S)` joined with the singular set, with multiplicity,
/// sorted; `k = 0` excluded.
pub fn inside_outside_spectrum(og: &OpenGraph, k_max: f64) -> Result<Vec<f64>> {
    check_k(k_max)?;
    let singular = delta_set(og, k_max)?;
    let mut all = phase_crossings(og, 0.0, &singular, k_max)?;
    all.extend(singular.iter().copied());
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(all.into_iter().flat_map(|(k, c)| std::iter::repeat(k).take(c)).collect())
}

/// One row of a scattering sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: f64,
    pub s: CMat,
    pub phases: Vec<f64>,
    pub in_delta: bool,
}

/// Samples in parallel, then continues eigenphases in a sequential fold.
pub fn scattering_sweep(og: &OpenGraph, ks: &[f64]) -> Result<Vec<SweepRow>> {
    let samples: Vec<ScatteringSample> = ks.par_iter().map(|&k| scattering_matrix(og, k)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(samples.len());
    let mut prev: Option<Vec<f64>> = None;
    for s in samples {
        let phases = s_eigenphases(&s, prev.as_deref())?;
        prev = Some(phases.clone());
        rows.push(SweepRow { k: s.k, s: s.s().clone(), phases, in_delta: s.in_delta });
    }
    Ok(rows)
}

/// Continuous branch of `phi` with `e^{2 i phi} = det S`, anchored at `anchor`.
#[derive(Debug, Clone)]
pub struct HalfPhase<'a> {
    og: &'a OpenGraph,
    offset: f64,
}

impl<'a> HalfPhase<'a> {
    pub fn new(og: &'a OpenGraph, anchor: f64) -> Result<Self> {
        let det = linalg::determinant(scattering_matrix(og, anchor)?.s());
        let raw = scattering_total_phase(og, anchor)?;
        Ok(HalfPhase { og, offset: det.arg() - raw })
    }

    pub fn at(&self, k: f64) -> Result<f64> {
        Ok(0.5 * (scattering_total_phase(self.og, k)? + self.offset))
    }
}

/// Data read off at one eigenvalue of the swcf sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwcfEvent {
    pub k: f64,
    /// `sgn(f(x1) f(x2))` of the eigenfunction at this eigenvalue.
    pub sign: i64,
    /// `r / t` just below the eigenvalue.
    pub ratio: f64,
}

/// The two-lead system with probe points materialized as Neumann vertices.
pub fn probe_system(g: &MetricGraph, x1: &GraphPoint, x2: &GraphPoint) -> Result<OpenGraph> {
    if !g.is_neumann_dirichlet() {
        return Err(Error::RequiresNeumannDirichlet);
    }
    let (h, ids) = g.insert_points(&[x1.clone(), x2.clone()], VertexCondition::Neumann)?;
    attach_leads(&h, &ids)
}

/// Eigenvalues in `(0, k_max]` with the sign of `f(x1) f(x2)` read from
/// the direction of the `r/t` crossing.
pub fn swcf_events(g: &MetricGraph, x1: &GraphPoint, x2: &GraphPoint, k_max: f64) -> Result<Vec<SwcfEvent>> {
    check_k(k_max)?;
    let og = probe_system(g, x1, x2)?;
    let singular = delta_set(&og, k_max)?;
    if !singular.is_empty() {
        return Err(Error::ProbeVanishing(singular.iter().map(|d| d.0).collect()));
    }
    let roots = phase_crossings(&og, 0.0, &[], k_max)?;
    let mut events = Vec::with_capacity(roots.len());
    let mut last = 0.0;
    for (k, c) in roots {
        if c != 1 {
            return Err(Error::Degenerate { k, multiplicity: c });
        }
        let eta = SWCF_OFFSET.min(0.25 * (k - last));
        last = k;
        let tau_at = scattering_matrix(&og, k)?.s()[(0, 1)];
        if tau_at.norm() < 1e-6 {
            // r and t vanish together: the eigenfunction vanishes at one probe
            return Err(Error::ProbeVanishing(vec![k]));
        }
        let ratio_at = |q: f64| -> Result<f64> {
            let s = scattering_matrix(&og, q)?;
            let s = s.s();
            let zeta = linalg::determinant(&(CMat::identity(2, 2) - s));
            Ok(0.5 * (linalg::I * zeta / s[(0, 1)]).re)
        };
        let near = ratio_at(k - eta)?;
        let far = ratio_at(k - 4.0 * eta)?;
        if near == 0.0 || near.signum() != far.signum() {
            return Err(Error::RefineSweep(format!("crossing direction unresolved at k = {k}")));
        }
        events.push(SwcfEvent { k, sign: if near > 0.0 { -1 } else { 1 }, ratio: near });
    }
    Ok(events)
}

/// `N_{x1,x2}(k)` for each requested `k` from a single sweep.
pub fn sign_weighted_counts(g: &MetricGraph, x1: &GraphPoint, x2: &GraphPoint, ks: &[f64]) -> Result<Vec<i64>> {
    let top = ks.iter().copied().fold(0.0, f64::max);
    if ks.is_empty() {
        return Ok(Vec::new());
    }
    let events = swcf_events(g, x1, x2, top + 2.0 * spectral::COUNT_GUARD)?;
    let zero = if g.is_connected() { g.neumann_components() as i64 } else { 0 };
    ks.iter()
        .map(|&k| {
            check_k(k)?;
            if events.iter().any(|e| (e.k - k).abs() <= spectral::COUNT_GUARD) {
                return Err(Error::AmbiguousCount(k));
            }
            Ok(zero + events.iter().filter(|e| e.k <= k).map(|e| e.sign).sum::<i64>())
        })
        .collect()
}

/// Sign-weighted counting function `sum_{k_n <= k} sgn(f_n(x1) f_n(x2))`.
pub fn sign_weighted_count(g: &MetricGraph, x1: &GraphPoint, x2: &GraphPoint, k: f64) -> Result<i64> {
    Ok(sign_weighted_counts(g, x1, x2, &[k])?[0])
}

/// Number of eigenfunctions up to `k` with opposite signs at `x1` and `x2`.
pub fn differing_sign_count(g: &MetricGraph, x1: &GraphPoint, x2: &GraphPoint, k: f64) -> Result<usize> {
    let total = spectral::counting_function(g, k)? as i64;
    let weighted = sign_weighted_count(g, x1, x2, k)?;
    let diff = total - weighted;
    if diff < 0 || diff % 2 != 0 {
        return Err(Error::Inconsistent(format!("N = {total} and N_x1x2 = {weighted} differ by an odd or negative amount")));
    }
    Ok((diff / 2) as usize)
}
