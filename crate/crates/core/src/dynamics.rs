//! Gaussian evolution of the characteristic-function exponent.
//!
//! A Gaussian state is carried as the exponent of its normal-ordered
//! characteristic function
//!
//! ```text
//! χ(z) = ⟨e^{κ_a a†} e^{−κ_a* a} e^{η_b b†} e^{−η_b* b}⟩ = exp(−zᵀ L z + i zᵀ h)
//! ```
//!
//! which obeys `dL/dt = N L + L Nᵀ − M` and `dh/dt = N h`.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::generators::GeneratorMatrices;
use crate::linalg::{c, symmetrize, CMat4, CVec4, I};
use crate::model::{InitialState, ModeState};
use crate::rk4::{self, OdeState};

/// Tolerance on the smallest eigenvalue of `V + (i/2)Ω`.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Step bound relative to the fastest period: `h ≤ 1 / (50 ω_max)`.
pub const STEPS_PER_RADIAN: f64 = 50.0;

/// `(L, h)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharExponent {
    pub ell: CMat4,
    pub h: CVec4,
    pub t: f64,
}

impl OdeState for (CMat4, CVec4) {
    fn add_scaled(&self, s: f64, other: &Self) -> Self {
        (self.0 + other.0 * c(s), self.1 + other.1 * c(s))
    }
}

/// First and second moments of the two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// `⟨a⟩`
    pub a: Complex64,
    /// `⟨b⟩`
    pub b: Complex64,
    /// `⟨a†a⟩`
    pub n_a: f64,
    /// `⟨b†b⟩`
    pub n_b: f64,
    /// `⟨a²⟩`
    pub aa: Complex64,
    /// `⟨b²⟩`
    pub bb: Complex64,
    /// `⟨ab⟩`
    pub ab: Complex64,
    /// `⟨ab†⟩`
    pub ab_dag: Complex64,
}

impl Moments {
    /// `⟨ξ_j ξ_k⟩` for `ξ = (a, a†, b, b†)`.
    pub fn ladder_matrix(&self) -> CMat4 {
        let na = c(self.n_a);
        let nb = c(self.n_b);
        let one = c(1.0);
        #[rustfmt::skip]
        let g = CMat4::new(
            self.aa,            na + one,           self.ab,            self.ab_dag,
            na,                 self.aa.conj(),     self.ab_dag.conj(), self.ab.conj(),
            self.ab,            self.ab_dag.conj(), self.bb,            nb + one,
            self.ab_dag,        self.ab.conj(),     nb,                 self.bb.conj(),
        );
        g
    }

    /// Symmetrized quadrature covariance with `q = (a + a†)/√2`,
    /// `p = (a − a†)/(i√2)`; vacuum is `I/2`.
    pub fn covariance(&self) -> CovarianceState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = c(0.0);
        #[rustfmt::skip]
        let t = CMat4::new(
            c(s),   c(s),   z,      z,
            -I * s, I * s,  z,      z,
            z,      z,      c(s),   c(s),
            z,      z,      -I * s, I * s,
        );
        let ladder_mean = CVec4::new(self.a, self.a.conj(), self.b, self.b.conj());
        let mean: Vector4<f64> = (t * ladder_mean).map(|z| z.re);
        let raw = t * self.ladder_matrix() * t.transpose();
        let v = Matrix4::from_fn(|i, j| 0.5 * (raw[(i, j)] + raw[(j, i)]).re - mean[i] * mean[j]);
        CovarianceState { mean, v }
    }
}

/// Mean quadratures `(q_a, p_a, q_b, p_b)` and their covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    pub mean: Vector4<f64>,
    pub v: Matrix4<f64>,
}

/// `Ω = ⊕ [[0, 1], [−1, 0]]`
pub fn symplectic_form() -> Matrix4<f64> {
    #[rustfmt::skip]
    let omega = Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, -1.0, 0.0,
    );
    omega
}

impl CovarianceState {
    pub fn vacuum() -> Self {
        Self {
            mean: Vector4::zeros(),
            v: Matrix4::identity() * 0.5,
        }
    }

    /// Smallest eigenvalue of the Hermitian matrix `V + (i/2)Ω`; negative
    /// values violate the uncertainty principle.
    pub fn uncertainty_margin(&self) -> f64 {
        let omega = symplectic_form();
        let m = CMat4::from_fn(|i, j| Complex64::new(self.v[(i, j)], 0.5 * omega[(i, j)]));
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn check_physical(&self) -> Result<()> {
        let margin = self.uncertainty_margin();
        if !(margin >= -PHYSICALITY_TOLERANCE) {
            return Err(Error::UnphysicalCovariance(format!(
                "min eig of V + iΩ/2 is {margin:e}"
            )));
        }
        Ok(())
    }
}

fn mode_exponent(mode: &ModeState) -> ([Complex64; 3], [Complex64; 2]) {
    let (n, m) = mode.central_moments();
    let alpha = mode.displacement;
    // −(L₁₁κ² + 2L₁₂κκ* + L₂₂κ*²) + i(h₁κ + h₂κ*) must equal
    // −N|κ|² + (M*κ² + Mκ*²)/2 + α*κ − ακ*.
    let ell = [-m.conj() * 0.5, c(n * 0.5), -m * 0.5];
    let h = [-I * alpha.conj(), I * alpha];
    (ell, h)
}

/// Exponent of the product state `init` at `t = 0`.
pub fn initial_exponent(init: &InitialState) -> Result<CharExponent> {
    let init = init.validate()?;
    let mut ell = CMat4::zeros();
    let mut h = CVec4::zeros();
    for (k, mode) in [(0, &init.a), (2, &init.b)] {
        let (l, hv) = mode_exponent(mode);
        ell[(k, k)] = l[0];
        ell[(k, k + 1)] = l[1];
        ell[(k + 1, k)] = l[1];
        ell[(k + 1, k + 1)] = l[2];
        h[k] = hv[0];
        h[k + 1] = hv[1];
    }
    Ok(CharExponent { ell, h, t: 0.0 })
}

/// Moments as derivatives of `χ` at the origin.
///
/// With `χ = e^{f}`, `∂_j χ(0) = i h_j` and `∂_j∂_k χ(0) = −2L_jk − h_j h_k`,
/// and the derivatives pick out `(a†, −a, b†, −b)` in normal order.
pub fn moments(state: &CharExponent) -> Moments {
    let (ell, h) = (&state.ell, &state.h);
    let s = |j: usize, k: usize| -ell[(j, k)] * 2.0 - h[j] * h[k];
    Moments {
        a: -I * h[1],
        b: -I * h[3],
        n_a: -s(0, 1).re,
        n_b: -s(2, 3).re,
        aa: s(1, 1),
        bb: s(3, 3),
        ab: s(1, 3),
        ab_dag: -s(1, 2),
    }
}

pub fn to_covariance(state: &CharExponent) -> Result<CovarianceState> {
    let cov = moments(state).covariance();
    cov.check_physical().map_err(|_| Error::PhysicalityLoss {
        t: state.t,
        min_eigenvalue: cov.uncertainty_margin(),
    })?;
    Ok(cov)
}

/// Default step bound `min(dt_out, 1/(50 max(ω, ω_l, ω_m)))`.
pub fn step_bound(gen: &GeneratorMatrices, dt_out: f64) -> f64 {
    dt_out.min(1.0 / (STEPS_PER_RADIAN * gen.max_frequency()))
}

/// Right-hand side `(N L + L Nᵀ − M, N h)`.
pub fn exponent_rate(gen: &GeneratorMatrices, ell: &CMat4, h: &CVec4) -> (CMat4, CVec4) {
    let n = &gen.drift;
    (n * ell + ell * n.transpose() - gen.diffusion, n * h)
}

/// Samples of the trajectory from `state.t` to `t_end` every `dt_out`.
pub fn evolve(state: &CharExponent, gen: &GeneratorMatrices, t_end: f64, dt_out: f64) -> Result<Vec<CharExponent>> {
    evolve_with_step(state, gen, t_end, dt_out, step_bound(gen, dt_out))
}

/// [`evolve`] with an explicit step bound.
pub fn evolve_with_step(
    state: &CharExponent,
    gen: &GeneratorMatrices,
    t_end: f64,
    dt_out: f64,
    h_max: f64,
) -> Result<Vec<CharExponent>> {
    let times = rk4::output_times(state.t, t_end, dt_out)?;
    let mut out = Vec::with_capacity(times.len());
    let rhs = |y: &(CMat4, CVec4)| exponent_rate(gen, &y.0, &y.1);
    let mut y = (state.ell, state.h);
    let mut t = times[0];
    let mut record = |t: f64, y: &(CMat4, CVec4)| -> Result<()> {
        let sample = CharExponent { ell: y.0, h: y.1, t };
        to_covariance(&sample)?;
        out.push(sample);
        Ok(())
    };
    record(t, &y)?;
    for &next in &times[1..] {
        let (n, h) = rk4::substeps(next - t, h_max)?;
        for _ in 0..n {
            y = rk4::step(&y, h, &rhs);
            y.0 = symmetrize(&y.0);
        }
        if y.0
            .iter()
            .chain(y.1.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::PhysicalityLoss {
                t: next,
                min_eigenvalue: f64::NAN,
            });
        }
        t = next;
        record(t, &y)?;
    }
    Ok(out)
}

/// Largest change of any sampled second or first moment when the step bound
/// is halved. Estimates the integration error of [`evolve`].
pub fn richardson_deviation(state: &CharExponent, gen: &GeneratorMatrices, t_end: f64, dt_out: f64) -> Result<f64> {
    let h = step_bound(gen, dt_out);
    let coarse = evolve_with_step(state, gen, t_end, dt_out, h)?;
    let fine = evolve_with_step(state, gen, t_end, dt_out, h / 2.0)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(x, y)| moment_distance(&moments(x), &moments(y)))
        .fold(0.0, f64::max))
}

/// Max absolute difference across all moments.
pub fn moment_distance(x: &Moments, y: &Moments) -> f64 {
    [
        (x.a - y.a).norm(),
        (x.b - y.b).norm(),
        (x.n_a - y.n_a).abs(),
        (x.n_b - y.n_b).abs(),
        (x.aa - y.aa).norm(),
        (x.bb - y.bb).norm(),
        (x.ab - y.ab).norm(),
        (x.ab_dag - y.ab_dag).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_local, build_nonlocal, DampingModel};
    use crate::linalg::{conjugate_pairing, conjugate_pairing_vec, max_abs};
    use crate::model::ModelParams;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn vacuum_exponent_is_zero() {
        let s = initial_exponent(&InitialState::vacuum()).unwrap();
        assert_eq!(s.ell, CMat4::zeros());
        assert_eq!(s.h, CVec4::zeros());
        let m = moments(&s);
        assert_eq!((m.n_a, m.n_b), (0.0, 0.0));
        assert_eq!(m.ab, c(0.0));
        let cov = to_covariance(&s).unwrap();
        assert!((cov.v - CovarianceState::vacuum().v).abs().max() < 1e-15);
        assert_eq!(cov.mean, Vector4::zeros());
    }

    #[test]
    fn thermal_exponent() {
        let init = InitialState {
            a: ModeState::thermal(0.4),
            b: ModeState::vacuum(),
        };
        let s = initial_exponent(&init).unwrap();
        assert!(close((s.ell[(0, 1)] + s.ell[(1, 0)]).re, 0.4, 1e-15));
        for (i, j) in [(0, 0), (1, 1), (2, 2), (3, 3), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(s.ell[(i, j)], c(0.0));
        }
        let m = moments(&s);
        assert!(close(m.n_a, 0.4, 1e-15));
        assert!(m.aa.norm() < 1e-15);
        let cov = to_covariance(&s).unwrap();
        let expected = Matrix4::from_diagonal(&Vector4::new(0.9, 0.9, 0.5, 0.5));
        assert!((cov.v - expected).abs().max() < 1e-15);
    }

    #[test]
    fn coherent_exponent_reproduces_mean() {
        let alpha = Complex64::new(0.3, -0.7);
        let init = InitialState {
            a: ModeState::coherent(alpha),
            b: ModeState::vacuum(),
        };
        let s = initial_exponent(&init).unwrap();
        assert_eq!(s.ell, CMat4::zeros());
        assert!((s.h[1] - s.h[0].conj()).norm() < 1e-15);
        let m = moments(&s);
        assert!((m.a - alpha).norm() < 1e-15);
        assert!(close(m.n_a, alpha.norm_sqr(), 1e-15));
        assert!((m.aa - alpha * alpha).norm() < 1e-15);
        let cov = to_covariance(&s).unwrap();
        assert!((cov.v - Matrix4::identity() * 0.5).abs().max() < 1e-15);
        let sq2 = std::f64::consts::SQRT_2;
        assert!(close(cov.mean[0], sq2 * alpha.re, 1e-15));
        assert!(close(cov.mean[1], sq2 * alpha.im, 1e-15));
    }

    #[test]
    fn squeezed_vacuum_covariance() {
        let r = 0.35;
        let init = InitialState {
            a: ModeState::squeezed(r, 0.0),
            b: ModeState::vacuum(),
        };
        let cov = to_covariance(&initial_exponent(&init).unwrap()).unwrap();
        assert!(close(cov.v[(0, 0)], (-2.0 * r).exp() / 2.0, 1e-14));
        assert!(close(cov.v[(1, 1)], (2.0 * r).exp() / 2.0, 1e-14));
        assert!(cov.v[(0, 1)].abs() < 1e-15);
        // Pure state: det(2V_a) = 1.
        let det = 4.0 * (cov.v[(0, 0)] * cov.v[(1, 1)] - cov.v[(0, 1)].powi(2));
        assert!(close(det, 1.0, 1e-13));
    }

    #[test]
    fn squeezing_phase_rotates_ellipse() {
        let r = 0.5;
        let init = InitialState {
            a: ModeState::vacuum(),
            b: ModeState::squeezed(r, std::f64::consts::PI),
        };
        let cov = to_covariance(&initial_exponent(&init).unwrap()).unwrap();
        assert!(close(cov.v[(2, 2)], (2.0 * r).exp() / 2.0, 1e-14));
        assert!(close(cov.v[(3, 3)], (-2.0 * r).exp() / 2.0, 1e-14));
    }

    #[test]
    fn zero_generator_keeps_state() {
        let init = InitialState {
            a: ModeState::squeezed(0.2, 0.3),
            b: ModeState::thermal(0.1),
        };
        let s = initial_exponent(&init).unwrap();
        let gen = GeneratorMatrices::new(
            CMat4::zeros(),
            CMat4::zeros(),
            DampingModel::Local,
            ModelParams::default(),
        );
        for sample in evolve(&s, &gen, 3.0, 0.5).unwrap() {
            assert!(max_abs(&(sample.ell - s.ell)) < 1e-15);
        }
    }

    #[test]
    fn vacuum_is_fixed_point_of_rwa_local() {
        let p = ModelParams::symmetric(1.0, 0.2, 0.0, 0.05);
        let gen = build_local(&p).unwrap();
        let traj = evolve(&initial_exponent(&InitialState::vacuum()).unwrap(), &gen, 10.0, 1.0).unwrap();
        assert_eq!(traj.len(), 11);
        for s in &traj {
            assert_eq!(s.ell, CMat4::zeros());
        }
    }

    #[test]
    fn single_mode_thermalization() {
        // n(t) = n̄ + (n₀ − n̄) e^{−2Γt} with amplitude damping rate Γ.
        let p = ModelParams {
            gamma_a: 0.05,
            gamma_b: 0.05,
            nbar_a: 0.5,
            nbar_b: 0.5,
            ..Default::default()
        };
        let init = InitialState {
            a: ModeState::thermal(2.0),
            b: ModeState::vacuum(),
        };
        let traj = evolve(&initial_exponent(&init).unwrap(), &build_local(&p).unwrap(), 20.0, 5.0).unwrap();
        for s in traj {
            let m = moments(&s);
            let decay = (-0.1 * s.t).exp();
            assert!(close(m.n_a, 0.5 + 1.5 * decay, 1e-9), "t = {}", s.t);
            assert!(close(m.n_b, 0.5 - 0.5 * decay, 1e-9));
        }
    }

    #[test]
    fn coherent_amplitude_rotates_and_decays() {
        let p = ModelParams::symmetric(1.0, 0.0, 0.0, 0.02);
        let alpha = Complex64::new(1.0, 0.0);
        let init = InitialState {
            a: ModeState::coherent(alpha),
            b: ModeState::vacuum(),
        };
        let traj = evolve(&initial_exponent(&init).unwrap(), &build_local(&p).unwrap(), 6.0, 1.5).unwrap();
        for s in traj {
            let expected = alpha * Complex64::from_polar((-0.02 * s.t).exp(), -s.t);
            assert!((moments(&s).a - expected).norm() < 1e-7, "t = {}", s.t);
        }
    }

    #[test]
    fn symmetric_configuration_has_equal_occupations() {
        let p = ModelParams::symmetric(1.0, 0.0, 1.0 / 3.0, 0.01);
        let traj = evolve(
            &initial_exponent(&InitialState::vacuum()).unwrap(),
            &build_nonlocal(&p).unwrap(),
            30.0,
            0.5,
        )
        .unwrap();
        for s in traj {
            let m = moments(&s);
            assert!(close(m.n_a, m.n_b, 1e-12));
            assert!(max_abs(&(conjugate_pairing(&s.ell) - s.ell)) < 1e-10);
            assert!(max_abs(&(s.ell - s.ell.transpose())) < 1e-12);
            assert!((conjugate_pairing_vec(&s.h) - s.h).norm() < 1e-12);
        }
    }

    #[test]
    fn trajectory_satisfies_the_matrix_equation() {
        // Central differences of densely sampled output against N L + L Nᵀ − M.
        let p = ModelParams::symmetric(1.0, 0.05, 0.05, 0.01);
        let gen = build_nonlocal(&p).unwrap();
        let dt = 1e-3;
        let traj = evolve(&initial_exponent(&InitialState::vacuum()).unwrap(), &gen, 2.0, dt).unwrap();
        for k in (1..traj.len() - 1).step_by(250) {
            let fd = (traj[k + 1].ell - traj[k - 1].ell) * c(0.5 / dt);
            let (rate, _) = exponent_rate(&gen, &traj[k].ell, &traj[k].h);
            assert!(max_abs(&(fd - rate)) < 1e-6, "k = {k}");
        }
    }

    #[test]
    fn output_grid_does_not_change_samples() {
        let p = ModelParams::symmetric(1.0, 0.05, 0.05, 0.01);
        let gen = build_nonlocal(&p).unwrap();
        let s0 = initial_exponent(&InitialState::vacuum()).unwrap();
        let coarse = evolve(&s0, &gen, 20.0, 1.0).unwrap();
        let fine = evolve(&s0, &gen, 20.0, 0.5).unwrap();
        for (k, s) in coarse.iter().enumerate() {
            assert!(moment_distance(&moments(s), &moments(&fine[2 * k])) < 1e-9);
        }
        assert!(richardson_deviation(&s0, &gen, 20.0, 1.0).unwrap() < 1e-7);
    }

    #[test]
    fn unphysical_start_is_reported() {
        let mut s = initial_exponent(&InitialState::vacuum()).unwrap();
        // ⟨a†a⟩ = −0.3 is impossible.
        s.ell[(0, 1)] = c(-0.15);
        s.ell[(1, 0)] = c(-0.15);
        let gen = build_local(&ModelParams::symmetric(1.0, 0.0, 0.0, 0.01)).unwrap();
        assert!(matches!(evolve(&s, &gen, 1.0, 0.5), Err(Error::PhysicalityLoss { .. })));
    }

    #[test]
    fn time_grid_errors() {
        let s = initial_exponent(&InitialState::vacuum()).unwrap();
        let gen = build_local(&ModelParams::default()).unwrap();
        assert!(matches!(evolve(&s, &gen, 0.0, 0.1), Err(Error::InvalidTimeGrid(_))));
        assert!(matches!(evolve(&s, &gen, 1.0, -0.1), Err(Error::InvalidTimeGrid(_))));
    }
}
