//! Entanglement and distinguishability of the Gaussian states.
//!
//! Covariances are stored with vacuum `= I/2`. The fidelity formula is
//! written for vacuum `= I`, so blocks are doubled at that boundary only.

use nalgebra::{Matrix2, Vector2};

use crate::dynamics::{to_covariance, CharExponent, CovarianceState};
use crate::error::{Error, Result};
use crate::linalg::CMat4;

/// Slack allowed on `det(2A) ≥ 1` and on the symplectic eigenvalue radicands.
pub const COVARIANCE_TOLERANCE: f64 = 1e-9;

/// Largest displacement accepted by [`fidelity`].
pub const MEAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

/// Reduced state of one oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneModeState {
    /// 2×2 covariance block, vacuum `= I/2`.
    pub cov: Matrix2<f64>,
    pub mean: Vector2<f64>,
}

impl OneModeState {
    pub fn vacuum() -> Self {
        Self {
            cov: Matrix2::identity() * 0.5,
            mean: Vector2::zeros(),
        }
    }

    pub fn thermal(n0: f64) -> Self {
        Self {
            cov: Matrix2::identity() * (n0 + 0.5),
            mean: Vector2::zeros(),
        }
    }
}

/// Logarithmic negativity `max(0, −ln 2ν₋)` with
/// `ν₋² = σ/2 − √(σ² − 4 det V)/2`, `σ = det A + det B − 2 det C`.
pub fn log_negativity(cov: &CovarianceState) -> Result<f64> {
    if cov.uncertainty_margin() < -COVARIANCE_TOLERANCE {
        return Err(Error::UnphysicalCovariance(format!(
            "V + iΩ/2 has eigenvalue {:e}",
            cov.uncertainty_margin()
        )));
    }
    let v = &cov.v;
    let a = v.fixed_view::<2, 2>(0, 0).determinant();
    let b = v.fixed_view::<2, 2>(2, 2).determinant();
    let c = v.fixed_view::<2, 2>(0, 2).determinant();
    let det = v.determinant();
    let sigma = a + b - 2.0 * c;

    let disc = sigma * sigma - 4.0 * det;
    if disc < -COVARIANCE_TOLERANCE || !disc.is_finite() {
        return Err(Error::UnphysicalCovariance(format!(
            "partially transposed spectrum is complex (σ² − 4 det V = {disc:e})"
        )));
    }
    let nu_sq = sigma / 2.0 - disc.max(0.0).sqrt() / 2.0;
    if nu_sq <= 0.0 {
        return Err(Error::UnphysicalCovariance(format!(
            "smallest partially transposed symplectic eigenvalue squared is {nu_sq:e}"
        )));
    }
    Ok((-(2.0 * nu_sq.sqrt()).ln()).max(0.0))
}

/// Covariance block and mean of `mode`; the same as setting the other
/// mode's characteristic variables to zero.
pub fn one_mode_reduce(cov: &CovarianceState, mode: Mode) -> OneModeState {
    let k = match mode {
        Mode::A => 0,
        Mode::B => 2,
    };
    OneModeState {
        cov: cov.v.fixed_view::<2, 2>(k, k).into_owned(),
        mean: cov.mean.fixed_rows::<2>(k).into_owned(),
    }
}

/// One-mode reduction done on the exponent: keep only the variables of
/// `mode`, then convert.
pub fn one_mode_reduce_exponent(state: &CharExponent, mode: Mode) -> Result<OneModeState> {
    let k = match mode {
        Mode::A => 0,
        Mode::B => 2,
    };
    let mut reduced = CharExponent {
        ell: CMat4::zeros(),
        h: Default::default(),
        t: state.t,
    };
    for i in 0..2 {
        reduced.h[i] = state.h[k + i];
        for j in 0..2 {
            reduced.ell[(i, j)] = state.ell[(k + i, k + j)];
        }
    }
    Ok(one_mode_reduce(&to_covariance(&reduced)?, Mode::A))
}

/// Fidelity between two zero-mean one-mode Gaussian states,
/// `2 / (√(det[A₁+A₂] + P) − √P)` with `P = (det A₁ − 1)(det A₂ − 1)` in the
/// vacuum `= I` convention.
///
/// Evaluated as `2 (√(X+P) + √P) / X`, `X = det[A₁+A₂]`, which has no
/// cancellation when `X` is small against `P`.
pub fn fidelity(s1: &OneModeState, s2: &OneModeState) -> Result<f64> {
    for s in [s1, s2] {
        let norm = s.mean.norm();
        if norm > MEAN_TOLERANCE {
            return Err(Error::NonzeroMean { norm });
        }
    }
    let a1 = s1.cov * 2.0;
    let a2 = s2.cov * 2.0;
    let d1 = a1.determinant();
    let d2 = a2.determinant();
    for d in [d1, d2] {
        if !(d >= 1.0 - COVARIANCE_TOLERANCE) {
            return Err(Error::UnphysicalCovariance(format!(
                "one-mode block violates det(2A) >= 1 (det = {d})"
            )));
        }
    }
    let p = ((d1 - 1.0) * (d2 - 1.0)).max(0.0);
    let x = (a1 + a2).determinant();
    if !(x > 0.0) {
        return Err(Error::UnphysicalCovariance(format!("det[A1 + A2] = {x:e}")));
    }
    let f = 2.0 * ((x + p).sqrt() + p.sqrt()) / x;
    Ok(f.min(1.0))
}
