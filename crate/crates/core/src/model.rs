//! Physical parameters of the coupled-oscillator problem and the product
//! Gaussian states it is started from.
//!
//! The system Hamiltonian is
//! `H = ω(a†a + b†b) + κ(a†b + b†a) + λ(ab + a†b†)`, each oscillator damped
//! by its own bath with rate `Γ_s` and mean occupancy `n̄_s`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Oscillator and bath constants. All rates share the unit of `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    /// Beam-splitter coupling `κ(a†b + b†a)`.
    pub kappa: f64,
    /// Two-mode-squeezing coupling `λ(ab + a†b†)`.
    pub lambda: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub nbar_a: f64,
    pub nbar_b: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega: 1.0,
            kappa: 0.0,
            lambda: 0.0,
            gamma_a: 0.0,
            gamma_b: 0.0,
            nbar_a: 0.0,
            nbar_b: 0.0,
        }
    }
}

impl ModelParams {
    /// Symmetric damping `Γ_a = Γ_b = gamma` at zero temperature.
    pub fn symmetric(omega: f64, kappa: f64, lambda: f64, gamma: f64) -> Self {
        Self {
            omega,
            kappa,
            lambda,
            gamma_a: gamma,
            gamma_b: gamma,
            ..Self::default()
        }
    }

    /// Same parameters with both bath occupancies set to `nbar`.
    pub fn with_nbar(self, nbar: f64) -> Self {
        Self {
            nbar_a: nbar,
            nbar_b: nbar,
            ..self
        }
    }

    /// Returns the parameters unchanged when every invariant holds.
    ///
    /// Both normal-mode frequencies `√((ω±κ)² − λ²)` must be real and
    /// positive, which needs `|λ| < ω − κ` and `|λ| < ω + κ`, strictly.
    pub fn validate(self) -> Result<Self> {
        let fields = [
            ("omega", self.omega),
            ("kappa", self.kappa),
            ("lambda", self.lambda),
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("nbar_a", self.nbar_a),
            ("nbar_b", self.nbar_b),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFiniteParameter { name });
            }
        }
        if self.omega <= 0.0 {
            return Err(Error::NegativeParameter {
                name: "omega",
                value: self.omega,
                requirement: "> 0",
            });
        }
        for (name, value) in &fields[3..] {
            if *value < 0.0 {
                return Err(Error::NegativeParameter {
                    name,
                    value: *value,
                    requirement: ">= 0",
                });
            }
        }
        let lower = self.omega - self.kappa;
        let upper = self.omega + self.kappa;
        let lam = self.lambda.abs();
        if !(lam < lower && lam < upper) {
            return Err(Error::StabilityViolation {
                lambda: self.lambda,
                lower,
                upper,
            });
        }
        Ok(self)
    }
}

/// Gaussian state of a single oscillator: a displaced squeezed thermal state
/// `D(α) S(r e^{iθ}) ρ_th(n₀) S† D†` with `S(ξ) = exp((ξ* a² − ξ a†²)/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub thermal: f64,
    pub squeeze_r: f64,
    pub squeeze_phase: f64,
    pub displacement: Complex64,
}

impl Default for ModeState {
    fn default() -> Self {
        Self::vacuum()
    }
}

impl ModeState {
    pub fn vacuum() -> Self {
        Self {
            thermal: 0.0,
            squeeze_r: 0.0,
            squeeze_phase: 0.0,
            displacement: Complex64::new(0.0, 0.0),
        }
    }

    pub fn thermal(n0: f64) -> Self {
        Self {
            thermal: n0,
            ..Self::vacuum()
        }
    }

    pub fn squeezed(r: f64, phase: f64) -> Self {
        Self {
            squeeze_r: r,
            squeeze_phase: phase,
            ..Self::vacuum()
        }
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self {
            displacement: alpha,
            ..Self::vacuum()
        }
    }

    /// Normal-ordered central moments `(⟨a†a⟩ − |⟨a⟩|², ⟨a²⟩ − ⟨a⟩²)`.
    pub fn central_moments(&self) -> (f64, Complex64) {
        let half = self.thermal + 0.5;
        let r2 = 2.0 * self.squeeze_r;
        let n = half * r2.cosh() - 0.5;
        let m = -half * r2.sinh() * Complex64::from_polar(1.0, self.squeeze_phase);
        (n, m)
    }

    fn validate(&self, which: &'static str) -> Result<()> {
        let checks: [(&'static str, f64); 5] = [
            ("thermal", self.thermal),
            ("squeeze_r", self.squeeze_r),
            ("squeeze_phase", self.squeeze_phase),
            ("displacement.re", self.displacement.re),
            ("displacement.im", self.displacement.im),
        ];
        for (name, value) in checks {
            if !value.is_finite() {
                return Err(Error::NonFiniteParameter { name });
            }
        }
        if self.thermal < 0.0 {
            return Err(Error::NegativeParameter {
                name: which,
                value: self.thermal,
                requirement: "a thermal occupation >= 0",
            });
        }
        if self.squeeze_r < 0.0 {
            return Err(Error::NegativeParameter {
                name: which,
                value: self.squeeze_r,
                requirement: "a squeezing magnitude >= 0",
            });
        }
        Ok(())
    }
}

/// Separable initial state of the two oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InitialState {
    pub a: ModeState,
    pub b: ModeState,
}

impl InitialState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn validate(self) -> Result<Self> {
        self.a.validate("mode a")?;
        self.b.validate("mode b")?;
        Ok(self)
    }

    pub fn has_displacement(&self) -> bool {
        self.a.displacement.norm() > 0.0 || self.b.displacement.norm() > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn figure_one_parameters_accepted() {
        let p = ModelParams::symmetric(1.0, 0.05, 0.05, 0.01);
        assert_eq!(p.validate(), Ok(p));
    }

    #[test]
    fn lambda_at_boundary_rejected() {
        let p = ModelParams {
            lambda: 1.0,
            ..ModelParams::default()
        };
        assert!(matches!(p.validate(), Err(Error::StabilityViolation { .. })));
    }

    #[test]
    fn zero_lambda_accepted() {
        let p = ModelParams {
            kappa: 0.3,
            ..ModelParams::default()
        };
        assert!(p.validate().is_ok());
    }

    #[test]
    fn negative_rates_rejected() {
        for p in [
            ModelParams {
                gamma_a: -0.1,
                ..Default::default()
            },
            ModelParams {
                gamma_b: -0.1,
                ..Default::default()
            },
            ModelParams {
                nbar_a: -1e-9,
                ..Default::default()
            },
            ModelParams {
                nbar_b: -2.0,
                ..Default::default()
            },
            ModelParams {
                omega: 0.0,
                ..Default::default()
            },
        ] {
            assert!(matches!(p.validate(), Err(Error::NegativeParameter { .. })), "{p:?}");
        }
        let nan = ModelParams {
            kappa: f64::NAN,
            ..Default::default()
        };
        assert!(matches!(
            nan.validate(),
            Err(Error::NonFiniteParameter { name: "kappa" })
        ));
    }

    #[test]
    fn beam_splitter_above_omega_rejected() {
        // |ω − κ| > λ but the relative mode has negative frequency.
        let p = ModelParams {
            kappa: 2.5,
            lambda: 0.1,
            ..Default::default()
        };
        assert!(matches!(p.validate(), Err(Error::StabilityViolation { .. })));
    }

    #[test]
    fn squeezed_thermal_central_moments() {
        let (n, m) = ModeState::squeezed(0.3, 0.0).central_moments();
        assert!((n - 0.3f64.sinh().powi(2)).abs() < 1e-14);
        assert!((m.re + 0.3f64.sinh() * 0.3f64.cosh()).abs() < 1e-14);
        assert_eq!(
            ModeState::thermal(0.7).central_moments(),
            (0.7, Complex64::new(-0.0, -0.0))
        );
    }

    #[test]
    fn initial_state_rejects_negative_occupation() {
        let s = InitialState {
            a: ModeState::thermal(-0.1),
            b: ModeState::vacuum(),
        };
        assert!(s.validate().is_err());
        let s = InitialState {
            a: ModeState::vacuum(),
            b: ModeState::squeezed(-0.1, 0.0),
        };
        assert!(s.validate().is_err());
    }

    fn any_params() -> impl Strategy<Value = ModelParams> {
        (
            0.1f64..3.0,
            -1.5f64..1.5,
            -1.5f64..1.5,
            0.0f64..0.2,
            0.0f64..0.2,
            0.0f64..2.0,
            0.0f64..2.0,
        )
            .prop_map(|(omega, kappa, lambda, gamma_a, gamma_b, nbar_a, nbar_b)| ModelParams {
                omega,
                kappa,
                lambda,
                gamma_a,
                gamma_b,
                nbar_a,
                nbar_b,
            })
    }

    proptest! {
        #[test]
        fn validate_is_idempotent(p in any_params()) {
            let once = p.validate();
            if let Ok(q) = once {
                prop_assert_eq!(q.validate(), Ok(q));
            }
        }

        #[test]
        fn acceptance_region_is_open(p in any_params(), shrink in 0.0f64..1.0) {
            if let Ok(q) = p.validate() {
                let moved = ModelParams { lambda: q.lambda * shrink, ..q };
                prop_assert!(moved.validate().is_ok());
            }
        }
    }
}
