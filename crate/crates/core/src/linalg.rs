//! Dense complex helpers over nalgebra.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `e^{i theta}`.
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// `max |(M* M - I)_ij|`.
pub fn unitarity_defect(m: &CMat) -> f64 {
    let p = m.adjoint() * m;
    let n = p.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigenvalues via the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    nalgebra::linalg::Schur::new(m.clone())
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::Inconsistent("Schur decomposition did not converge".into()))
}

/// Argument of `z` relative to `target`, wrapped into `[0, 2pi)`.
pub fn wrapped_phase(z: C64, target: f64) -> f64 {
    let t = (z.arg() - target).rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Unitary polar factor `W V*` of `m = W Sigma V*`, the nearest unitary
/// matrix in Frobenius norm.
pub fn nearest_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested U") * svd.v_t.expect("requested V^H")
}

/// Singular values (descending) with the right singular vectors as columns.
pub fn svd_right(m: &CMat) -> (Vec<f64>, CMat) {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = CMat::from_fn(m.ncols(), order.len(), |r, c| vt[(order[c], r)].conj());
    (sv, v)
}

/// Cutoff below which a singular value counts as zero: `rel * max(sigma_max, 1)`.
///
/// The floor of 1 matters for `I - U` with `U` unitary (norm at most 2):
/// when every singular value is tiny the kernel is the whole space.
pub fn zero_cutoff(sigma_max: f64, rel: f64) -> f64 {
    rel * sigma_max.max(1.0)
}

/// Number of singular values below [`zero_cutoff`].
pub fn kernel_dimension(m: &CMat, rel: f64) -> usize {
    let sv = m.singular_values();
    let cut = zero_cutoff(sv.iter().copied().fold(0.0, f64::max), rel);
    sv.iter().filter(|&&s| s < cut).count()
}

/// Orthonormal basis of the numerical kernel (cutoff as in [`zero_cutoff`]).
pub fn kernel_basis(m: &CMat, rel: f64) -> CMat {
    let (sv, v) = svd_right(m);
    let cut = zero_cutoff(sv.first().copied().unwrap_or(0.0), rel);
    let cols: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] < cut).collect();
    CMat::from_fn(m.ncols(), cols.len(), |r, c| v[(r, cols[c])])
}

/// Minimal-norm least-squares solution of `A X = B`, singular values below
/// [`zero_cutoff`] treated as zero. Returns `(X, sigma_min)`.
pub fn pseudo_solve(a: &CMat, b: &CMat, rel: f64) -> (CMat, f64) {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^H");
    let sv = &svd.singular_values;
    let cut = zero_cutoff(sv.iter().copied().fold(0.0, f64::max), rel);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let mut y = u.adjoint() * b;
    for i in 0..sv.len() {
        let s = sv[i];
        let scale = if s >= cut && s > 0.0 { 1.0 / s } else { 0.0 };
        for c in 0..y.ncols() {
            y[(i, c)] *= scale;
        }
    }
    (vt.adjoint() * y, smin)
}

pub fn smallest_singular_value(m: &CMat) -> f64 {
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn determinant(m: &CMat) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}
