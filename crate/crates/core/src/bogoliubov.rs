//! Normal modes of the coupled Hamiltonian and the bath correlations they
//! induce.
//!
//! With the centre-of-mass and relative modes `e = (a+b)/√2`,
//! `f = (a−b)/√2` the Hamiltonian splits into two single-mode squeezing
//! problems, which the transformation
//!
//! ```text
//! e = α₁ l − β₁ l†        f = α₂ m − β₂ m†
//! ```
//!
//! turns into `ω_l l†l + ω_m m†m`.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Bogoliubov coefficients of the two normal modes.
///
/// `beta1` carries the sign of `λ` and `beta2` the opposite sign: the
/// centre-of-mass mode sees `+λ/2 (e² + e†²)` while the relative mode sees
/// `−λ/2 (f² + f†²)`, and only these signs cancel the `l²`, `m²` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovDecomposition {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub omega_l: f64,
    pub omega_m: f64,
}

/// `(α², β²)` for the single-mode problem `A e†e + B/2 (e² + e†²)`.
///
/// `β² = −½ + ½ A/√(A²−B²)` is rearranged to `B²/(2s(A+s))` so that small
/// couplings do not cancel catastrophically.
fn squeeze_coefficients(a: f64, b: f64) -> (f64, f64) {
    let s = (a * a - b * b).sqrt();
    let beta_sq = b * b / (2.0 * s * (a + s));
    (1.0 + beta_sq, beta_sq)
}

/// Diagonalizes the generalized two-oscillator Hamiltonian.
///
/// `params` must already be validated; stability guarantees both square
/// roots are real.
pub fn diagonalize(params: &ModelParams) -> BogoliubovDecomposition {
    let ModelParams {
        omega, kappa, lambda, ..
    } = *params;
    let sign = if lambda < 0.0 { -1.0 } else { 1.0 };

    let (a1_sq, b1_sq) = squeeze_coefficients(omega + kappa, lambda);
    let (a2_sq, b2_sq) = squeeze_coefficients(omega - kappa, lambda);
    let alpha1 = a1_sq.sqrt();
    let beta1 = sign * b1_sq.sqrt();
    let alpha2 = a2_sq.sqrt();
    let beta2 = -sign * b2_sq.sqrt();

    // ω_l = α₁₁ + α₂₂ and ω_m = β₁₁ + β₂₂.
    let alpha11 = ((2.0 * omega + kappa) * a1_sq - 2.0 * lambda * alpha1 * beta1 + kappa * b1_sq) / 2.0;
    let alpha22 = ((2.0 * omega + kappa) * b1_sq - 2.0 * lambda * alpha1 * beta1 + kappa * a1_sq) / 2.0;
    let beta11 = ((2.0 * omega - kappa) * a2_sq + 2.0 * lambda * alpha2 * beta2 - kappa * b2_sq) / 2.0;
    let beta22 = ((2.0 * omega - kappa) * b2_sq + 2.0 * lambda * alpha2 * beta2 - kappa * a2_sq) / 2.0;

    BogoliubovDecomposition {
        alpha1,
        beta1,
        alpha2,
        beta2,
        omega_l: alpha11 + alpha22,
        omega_m: beta11 + beta22,
    }
}

impl BogoliubovDecomposition {
    /// Coefficients of `l` on `(a, a†, b, b†)`.
    pub fn l_coefficients(&self) -> [f64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [self.alpha1 * s, self.beta1 * s, self.alpha1 * s, self.beta1 * s]
    }

    /// Coefficients of `m` on `(a, a†, b, b†)`.
    pub fn m_coefficients(&self) -> [f64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [self.alpha2 * s, self.beta2 * s, -self.alpha2 * s, -self.beta2 * s]
    }

    /// Largest frequency in the problem, used for step-size control.
    pub fn max_frequency(&self, omega: f64) -> f64 {
        omega.max(self.omega_l).max(self.omega_m)
    }
}

/// Bath correlations and the bare-mode rates `Γ₁ … Γ₆` of the normal-mode
/// master equation.
///
/// `ff_corr = ⟨FF†⟩`, `qq_corr = ⟨QQ†⟩` multiply the lowering dissipators of
/// `l` and `m`; `ff_corr_th = ⟨F†F⟩`, `qq_corr_th = ⟨Q†Q⟩` the raising ones
/// (zero at zero temperature).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    pub ff_corr: f64,
    pub qq_corr: f64,
    pub ff_corr_th: f64,
    pub qq_corr_th: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub gamma5: f64,
    pub gamma6: f64,
}

/// Rates for a flat bath of strength `bath_rate` at occupancy `nbar`.
///
/// A raising dissipator `D[l†]` is `D[l]` with `α₁ ↔ β₁`, so the thermal
/// correlations enter `Γ₁ … Γ₆` with the roles of `α²` and `β²` swapped.
pub fn rates(decomp: &BogoliubovDecomposition, bath_rate: f64, nbar: f64) -> Result<RateSet> {
    for (name, value) in [("bath_rate", bath_rate), ("nbar", nbar)] {
        if !value.is_finite() {
            return Err(Error::NonFiniteParameter { name });
        }
        if value < 0.0 {
            return Err(Error::NegativeParameter {
                name,
                value,
                requirement: ">= 0",
            });
        }
    }
    let BogoliubovDecomposition {
        alpha1: a1,
        beta1: b1,
        alpha2: a2,
        beta2: b2,
        ..
    } = *decomp;

    let ff0 = 2.0 * bath_rate * (a1 - b1).powi(2);
    let qq0 = 2.0 * bath_rate * (a2 - b2).powi(2);
    let ff = ff0 * (1.0 + nbar);
    let qq = qq0 * (1.0 + nbar);
    let ff_th = ff0 * nbar;
    let qq_th = qq0 * nbar;

    let (a1s, b1s, a2s, b2s) = (a1 * a1, b1 * b1, a2 * a2, b2 * b2);
    Ok(RateSet {
        ff_corr: ff,
        qq_corr: qq,
        ff_corr_th: ff_th,
        qq_corr_th: qq_th,
        gamma1: (ff * a1s + ff_th * b1s + qq * a2s + qq_th * b2s) / 2.0,
        gamma2: (ff * b1s + ff_th * a1s + qq * b2s + qq_th * a2s) / 2.0,
        gamma3: ((ff + ff_th) * a1 * b1 + (qq + qq_th) * a2 * b2) / 2.0,
        gamma4: (ff * a1s + ff_th * b1s - qq * a2s - qq_th * b2s) / 2.0,
        gamma5: (ff * b1s + ff_th * a1s - qq * b2s - qq_th * a2s) / 2.0,
        gamma6: ((ff + ff_th) * a1 * b1 - (qq + qq_th) * a2 * b2) / 2.0,
    })
}
