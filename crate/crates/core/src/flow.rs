//! Root location by counting eigenphase crossings of a unitary family.
//!
//! For a family whose eigenphases move monotonically upward, the number of
//! phases that pass a target angle on `[a, b]` equals
//! `(total advance - change of wrapped phase sum) / 2pi`, exactly, for any
//! step size. The total advance comes from a closed form supplied by the
//! implementor, so no branch tracking is needed.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Probe {
    pub k: f64,
    /// Sum of eigenphases wrapped into `[0, 2pi)` relative to the target.
    pub wrapped: f64,
    /// Continuous total phase (sum of unwrapped eigenphases) up to a constant.
    pub total: f64,
}

pub(crate) trait PhaseFlow: Sync {
    fn probe(&self, k: f64) -> Result<Probe>;

    /// Exact total eigenphase advance between two probes.
    fn advance(&self, a: &Probe, b: &Probe) -> Result<f64> {
        Ok(b.total - a.total)
    }

    /// Grid of scan points covering `[lo, hi]`, endpoints included.
    fn grid(&self, lo: f64, hi: f64) -> Vec<f64>;

    /// Number of target crossings in `(a.k, b.k]`.
    fn crossings(&self, a: &Probe, b: &Probe) -> Result<usize> {
        let adv = self.advance(a, b)?;
        let est = (adv - (b.wrapped - a.wrapped)) / TAU;
        let c = est.round();
        if (est - c).abs() > 0.05 || c < 0.0 {
            return Err(Error::PhaseBookkeeping { lo: a.k, hi: b.k, estimate: est });
        }
        Ok(c as usize)
    }
}

/// Uniform grid with at most `step` spacing.
pub(crate) fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut g: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * (i as f64) / (n as f64)).collect();
    g[n] = hi;
    g
}

/// Crossings on `(lo, hi]` as `(k, count)` clusters, refined to relative
/// width `tol` (absolute below `k = 1`).
pub(crate) fn find_crossings<F: PhaseFlow>(flow: &F, lo: f64, hi: f64, tol: f64) -> Result<Vec<(f64, usize)>> {
    if hi <= lo {
        return Ok(Vec::new());
    }
    let grid = flow.grid(lo, hi);
    let probes: Vec<Probe> = grid.par_iter().map(|&k| flow.probe(k)).collect::<Result<_>>()?;
    let pieces: Vec<Vec<(f64, usize)>> = probes
        .par_windows(2)
        .map(|w| {
            let mut out = Vec::new();
            let c = flow.crossings(&w[0], &w[1])?;
            refine(flow, w[0], w[1], c, tol, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(merge_close(pieces.into_iter().flatten().collect(), 1e-9))
}

/// Total number of crossings in `(lo, hi]` without locating them.
pub(crate) fn count_crossings<F: PhaseFlow>(flow: &F, lo: f64, hi: f64) -> Result<usize> {
    if hi <= lo {
        return Ok(0);
    }
    let grid = flow.grid(lo, hi);
    let probes: Vec<Probe> = grid.par_iter().map(|&k| flow.probe(k)).collect::<Result<_>>()?;
    probes.par_windows(2).map(|w| flow.crossings(&w[0], &w[1])).sum()
}

fn refine<F: PhaseFlow>(flow: &F, a: Probe, b: Probe, c: usize, tol: f64, out: &mut Vec<(f64, usize)>) -> Result<()> {
    if c == 0 {
        return Ok(());
    }
    let mid = 0.5 * (a.k + b.k);
    if b.k - a.k <= tol * b.k.max(1.0) || !(mid > a.k && mid < b.k) {
        out.push((mid, c));
        return Ok(());
    }
    let m = flow.probe(mid)?;
    let left = flow.crossings(&a, &m)?;
    let right = flow.crossings(&m, &b)?;
    if left + right != c {
        return Err(Error::NoConvergence { lo: a.k, hi: b.k });
    }
    refine(flow, a, m, left, tol, out)?;
    refine(flow, m, b, right, tol, out)
}

/// Merges clusters whose locations differ by less than `gap`.
fn merge_close(mut roots: Vec<(f64, usize)>, gap: f64) -> Vec<(f64, usize)> {
    roots.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for (k, c) in roots {
        match out.last_mut() {
            Some(last) if k - last.0 < gap => {
                let w = last.1 + c;
                last.2 = (last.2 * last.1 as f64 + k * c as f64) / w as f64;
                last.0 = k;
                last.1 = w;
            }
            _ => out.push((k, c, k)),
        }
    }
    out.into_iter().map(|(_, c, mean)| (mean, c)).collect()
}
