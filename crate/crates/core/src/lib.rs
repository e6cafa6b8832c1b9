//! Two coupled harmonic oscillators under local or normal-mode (nonlocal)
//! Lindblad damping, evolved in closed form through the Gaussian
//! characteristic function, with a truncated Fock-space cross-check.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod dynamics;
pub mod error;
pub mod fock_oracle;
pub mod generators;
pub mod linalg;
pub mod measures;
pub mod model;
pub mod rk4;
pub mod steady;

pub use bogoliubov::{diagonalize, rates, BogoliubovDecomposition, RateSet};
pub use dynamics::{CharExponent, CovarianceState, Moments};
pub use error::{Error, Result};
pub use generators::{build, DampingModel, GeneratorMatrices};
pub use measures::{fidelity, log_negativity, one_mode_reduce, Mode, OneModeState};
pub use model::{InitialState, ModeState, ModelParams};
