use thiserror::Error;

/// Everything that can go wrong while building or integrating a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unstable coupling: |lambda| = {lambda} must be strictly below omega - kappa = {lower} and omega + kappa = {upper}")]
    StabilityViolation { lambda: f64, lower: f64, upper: f64 },

    #[error("parameter `{name}` = {value} must be {requirement}")]
    NegativeParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("parameter `{name}` is not finite")]
    NonFiniteParameter { name: &'static str },

    #[error("normal-mode damping needs gamma_a == gamma_b (got {gamma_a} and {gamma_b})")]
    AsymmetricDamping { gamma_a: f64, gamma_b: f64 },

    #[error("thermal normal-mode damping needs nbar_a == nbar_b (got {nbar_a} and {nbar_b})")]
    AsymmetricBath { nbar_a: f64, nbar_b: f64 },

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("integration step {step:e} underflowed")]
    StepSizeUnderflow { step: f64 },

    #[error("state left the physical set at t = {t}: smallest eigenvalue {min_eigenvalue:e}")]
    PhysicalityLoss { t: f64, min_eigenvalue: f64 },

    #[error("unphysical covariance: {0}")]
    UnphysicalCovariance(String),

    #[error("fidelity formula needs zero-mean states (|mean| = {norm:e})")]
    NonzeroMean { norm: f64 },

    #[error("drift is not Hurwitz (spectral abscissa {abscissa:e}); no unique steady state")]
    NotHurwitz { abscissa: f64 },

    #[error("linear solve failed: {0}")]
    Singular(&'static str),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("Fock cutoff {cutoff} is too small (need at least 2)")]
    CutoffTooSmall { cutoff: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
