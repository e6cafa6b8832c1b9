//! Drift and diffusion matrices of the characteristic-function equation
//!
//! ```text
//! ∂χ/∂t = zᵀ M z χ + zᵀ N ∇χ,     z = (κ_a, κ_a*, η_b, η_b*)
//! ```
//!
//! for the two damping models. Both use the dissipator normalization
//! `Γ [2sρs† − s†sρ − ρs†s]`, i.e. `Γ` is an amplitude damping rate and
//! excitation numbers relax at `2Γ`.
//!
//! The normal-mode model is written with a bath of strength `Γ_a / 2`: in the
//! rotating-wave limit this makes its drift coincide with the local one.

use crate::bogoliubov::{diagonalize, rates, RateSet};
use crate::error::{Error, Result};
use crate::linalg::{c, spectral_abscissa, CMat4, I};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DampingModel {
    /// Independent Lindblad terms on the bare modes `a`, `b`.
    Local,
    /// Lindblad terms on the normal modes `l`, `m` (zero or finite temperature).
    Nonlocal,
}

impl DampingModel {
    pub fn name(self) -> &'static str {
        match self {
            DampingModel::Local => "local",
            DampingModel::Nonlocal => "nonlocal",
        }
    }
}

/// `N` (drift) and `M` (diffusion) together with the parameters that built them.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrices {
    pub drift: CMat4,
    pub diffusion: CMat4,
    pub model: DampingModel,
    pub params: ModelParams,
}

impl GeneratorMatrices {
    pub fn new(drift: CMat4, diffusion: CMat4, model: DampingModel, params: ModelParams) -> Self {
        Self {
            drift,
            diffusion,
            model,
            params,
        }
    }

    /// Largest oscillation frequency `max(ω, ω_l, ω_m)` of the underlying
    /// Hamiltonian.
    pub fn max_frequency(&self) -> f64 {
        diagonalize(&self.params).max_frequency(self.params.omega)
    }

    pub fn spectral_abscissa(&self) -> Result<f64> {
        spectral_abscissa(&self.drift)
    }
}

/// Hamiltonian part of the drift together with `±λ/2` diffusion.
fn hamiltonian_part(p: &ModelParams) -> (CMat4, CMat4) {
    let (w, k, l) = (p.omega, p.kappa, p.lambda);
    #[rustfmt::skip]
    let drift = CMat4::new(
        I * w,  c(0.0), I * k,  -I * l,
        c(0.0), -I * w, I * l,  -I * k,
        I * k,  -I * l, I * w,  c(0.0),
        I * l,  -I * k, c(0.0), -I * w,
    );
    let h = I * (l / 2.0);
    let z = c(0.0);
    #[rustfmt::skip]
    let diffusion = CMat4::new(
        z, z, h, z,
        z, z, z, -h,
        h, z, z, z,
        z, -h, z, z,
    );
    (drift, diffusion)
}

/// Local damping: `Γ_s(n̄_s+1) D[s] + Γ_s n̄_s D[s†]` for `s = a, b`.
pub fn build_local(params: &ModelParams) -> Result<GeneratorMatrices> {
    let p = params.validate()?;
    let (mut drift, mut diffusion) = hamiltonian_part(&p);
    for (k, gamma, nbar) in [(0, p.gamma_a, p.nbar_a), (2, p.gamma_b, p.nbar_b)] {
        drift[(k, k)] -= c(gamma);
        drift[(k + 1, k + 1)] -= c(gamma);
        diffusion[(k, k + 1)] -= c(gamma * nbar);
        diffusion[(k + 1, k)] -= c(gamma * nbar);
    }
    Ok(GeneratorMatrices::new(drift, diffusion, DampingModel::Local, p))
}

fn require_symmetric_damping(p: &ModelParams) -> Result<()> {
    if p.gamma_a != p.gamma_b {
        return Err(Error::AsymmetricDamping {
            gamma_a: p.gamma_a,
            gamma_b: p.gamma_b,
        });
    }
    Ok(())
}

/// `N₁`, `M₁` from a set of bare-mode rates.
fn nonlocal_from_rates(p: &ModelParams, r: &RateSet) -> (CMat4, CMat4) {
    let (mut drift, mut diffusion) = hamiltonian_part(p);
    let damp = c(r.gamma2 - r.gamma1);
    let cross = c(r.gamma5 - r.gamma4);
    for k in 0..4 {
        drift[(k, k)] += damp;
    }
    for (i, j) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
        drift[(i, j)] += cross;
    }

    let (g2, g3, g5, g6) = (c(r.gamma2), c(r.gamma3), c(r.gamma5), c(r.gamma6));
    for k in 0..4 {
        diffusion[(k, k)] -= g3;
    }
    for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
        diffusion[(i, j)] -= g2;
    }
    for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
        diffusion[(i, j)] -= g5;
    }
    for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
        diffusion[(i, j)] -= g6;
    }
    (drift, diffusion)
}

/// Normal-mode damping with zero-temperature baths; `nbar_a`, `nbar_b` are
/// ignored.
pub fn build_nonlocal(params: &ModelParams) -> Result<GeneratorMatrices> {
    let p = params.validate()?;
    require_symmetric_damping(&p)?;
    let r = rates(&diagonalize(&p), p.gamma_a / 2.0, 0.0)?;
    let (drift, diffusion) = nonlocal_from_rates(&p, &r);
    Ok(GeneratorMatrices::new(drift, diffusion, DampingModel::Nonlocal, p))
}

/// Normal-mode damping with both baths at occupancy `n̄ = nbar_a = nbar_b`.
///
/// Each normal mode relaxes to a thermal state of occupancy `n̄`.
pub fn build_nonlocal_thermal(params: &ModelParams) -> Result<GeneratorMatrices> {
    let p = params.validate()?;
    require_symmetric_damping(&p)?;
    if p.nbar_a != p.nbar_b {
        return Err(Error::AsymmetricBath {
            nbar_a: p.nbar_a,
            nbar_b: p.nbar_b,
        });
    }
    let r = rates(&diagonalize(&p), p.gamma_a / 2.0, p.nbar_a)?;
    let (drift, diffusion) = nonlocal_from_rates(&p, &r);
    Ok(GeneratorMatrices::new(drift, diffusion, DampingModel::Nonlocal, p))
}

/// Generators for `model`, using the thermal normal-mode builder.
pub fn build(model: DampingModel, params: &ModelParams) -> Result<GeneratorMatrices> {
    match model {
        DampingModel::Local => build_local(params),
        DampingModel::Nonlocal => build_nonlocal_thermal(params),
    }
}
