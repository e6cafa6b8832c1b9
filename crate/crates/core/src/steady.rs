//! Stationary states without time integration.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bogoliubov::{diagonalize, BogoliubovDecomposition};
use crate::dynamics::{to_covariance, CharExponent, CovarianceState};
use crate::error::{Error, Result};
use crate::generators::{build_local, build_nonlocal_thermal, DampingModel, GeneratorMatrices};
use crate::linalg::{max_abs, symmetrize, CMat4, CVec4};
use crate::measures::{fidelity, log_negativity, one_mode_reduce, Mode};
use crate::model::ModelParams;

/// Drift spectra at or above this abscissa have no unique steady state.
pub const HURWITZ_MARGIN: f64 = 1e-12;

/// Largest accepted entry of `N L + L Nᵀ − M` at the solution.
pub const LYAPUNOV_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyResult {
    /// Stationary exponent, stamped `t = ∞`.
    pub exponent: CharExponent,
    pub covariance: CovarianceState,
    pub model: DampingModel,
    pub spectral_abscissa: f64,
    pub residual: f64,
}

/// Solves `N L + L Nᵀ = M` for the stationary exponent.
///
/// Column-major vectorization turns the equation into
/// `(I ⊗ N + N ⊗ I) vec L = vec M`, solved by dense LU. The stationary
/// mean is zero because the drift is Hurwitz.
pub fn steady_exponent(gen: &GeneratorMatrices) -> Result<SteadyResult> {
    let abscissa = gen.spectral_abscissa()?;
    if !(abscissa < -HURWITZ_MARGIN) {
        return Err(Error::NotHurwitz { abscissa });
    }
    let n = DMatrix::from_column_slice(4, 4, gen.drift.as_slice());
    let eye = DMatrix::<Complex64>::identity(4, 4);
    let system = eye.kronecker(&n) + n.kronecker(&eye);
    let rhs = DVector::from_column_slice(gen.diffusion.as_slice());
    let solution = system.lu().solve(&rhs).ok_or(Error::Singular("Lyapunov system"))?;
    let ell = symmetrize(&CMat4::from_column_slice(solution.as_slice()));

    let residual = max_abs(&(gen.drift * ell + ell * gen.drift.transpose() - gen.diffusion));
    if !(residual < LYAPUNOV_RESIDUAL) {
        return Err(Error::Singular("Lyapunov residual above tolerance"));
    }
    let exponent = CharExponent {
        ell,
        h: CVec4::zeros(),
        t: f64::INFINITY,
    };
    let covariance = to_covariance(&exponent)?;
    Ok(SteadyResult {
        exponent,
        covariance,
        model: gen.model,
        spectral_abscissa: abscissa,
        residual,
    })
}

/// Covariance of the normal modes in thermal states of occupancies `n_l`,
/// `n_m`, in bare-mode quadratures.
///
/// With `e = α₁ l − β₁ l†`, the centre-of-mass quadratures have variances
/// `(α₁ − β₁)² (n_l + ½)` and `(α₁ + β₁)² (n_l + ½)`, and likewise for the
/// relative mode. Undoing `e, f = (a ± b)/√2` gives the bare blocks.
pub fn thermal_normal_mode_covariance(decomp: &BogoliubovDecomposition, n_l: f64, n_m: f64) -> CovarianceState {
    let x_e = (decomp.alpha1 - decomp.beta1).powi(2) * (n_l + 0.5);
    let p_e = (decomp.alpha1 + decomp.beta1).powi(2) * (n_l + 0.5);
    let x_f = (decomp.alpha2 - decomp.beta2).powi(2) * (n_m + 0.5);
    let p_f = (decomp.alpha2 + decomp.beta2).powi(2) * (n_m + 0.5);
    let (xs, xd) = ((x_e + x_f) / 2.0, (x_e - x_f) / 2.0);
    let (ps, pd) = ((p_e + p_f) / 2.0, (p_e - p_f) / 2.0);
    #[rustfmt::skip]
    let v = Matrix4::new(
        xs,  0.0, xd,  0.0,
        0.0, ps,  0.0, pd,
        xd,  0.0, xs,  0.0,
        0.0, pd,  0.0, ps,
    );
    CovarianceState {
        mean: Vector4::zeros(),
        v,
    }
}

/// Covariance of the ground state of the coupled Hamiltonian, i.e. the
/// vacuum of both normal modes.
pub fn ground_state_covariance(decomp: &BogoliubovDecomposition) -> CovarianceState {
    thermal_normal_mode_covariance(decomp, 0.0, 0.0)
}

/// Covariance of the canonical state `∝ exp(−H/kT)` of the coupled
/// Hamiltonian.
pub fn canonical_covariance(decomp: &BogoliubovDecomposition, k_t: f64) -> CovarianceState {
    let bose = |w: f64| if k_t > 0.0 { 1.0 / (w / k_t).exp_m1() } else { 0.0 };
    thermal_normal_mode_covariance(decomp, bose(decomp.omega_l), bose(decomp.omega_m))
}

/// One row of a thermal-occupancy sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub nbar: f64,
    pub logneg_local: f64,
    pub logneg_nonlocal: f64,
    /// Fidelity between the two models' stationary states of mode `a`.
    pub fidelity_onemode: f64,
}

/// Stationary entanglement and one-mode fidelity of both models with both
/// baths at each occupancy of `grid`. Rows come back in grid order.
pub fn nbar_sweep(base: &ModelParams, grid: &[f64]) -> Result<Vec<SweepRow>> {
    for &nbar in grid {
        if !nbar.is_finite() {
            return Err(Error::NonFiniteParameter { name: "nbar" });
        }
        if nbar < 0.0 {
            return Err(Error::NegativeParameter {
                name: "nbar",
                value: nbar,
                requirement: ">= 0",
            });
        }
    }
    grid.par_iter()
        .map(|&nbar| {
            let p = base.with_nbar(nbar);
            let local = steady_exponent(&build_local(&p)?)?;
            let nonlocal = steady_exponent(&build_nonlocal_thermal(&p)?)?;
            Ok(SweepRow {
                nbar,
                logneg_local: log_negativity(&local.covariance)?,
                logneg_nonlocal: log_negativity(&nonlocal.covariance)?,
                fidelity_onemode: fidelity(
                    &one_mode_reduce(&local.covariance, Mode::A),
                    &one_mode_reduce(&nonlocal.covariance, Mode::A),
                )?,
            })
        })
        .collect()
}

/// [`steady_exponent`] of the parameters' nonlocal thermal generators,
/// together with the matching normal-mode decomposition.
pub fn nonlocal_steady(params: &ModelParams) -> Result<(SteadyResult, BogoliubovDecomposition)> {
    let gen = build_nonlocal_thermal(params)?;
    Ok((steady_exponent(&gen)?, diagonalize(&gen.params)))
}
