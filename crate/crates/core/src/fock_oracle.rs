//! Both master equations integrated as operator equations in a truncated
//! two-mode Fock space. Used to pin down the conventions of the Gaussian
//! path, not for production runs.
//!
//! Every jump operator here is a real combination of `a, a†, b, b†`, so a
//! dissipator is stored as its coefficient vectors and a term
//! `(rate, L, K)` stands for `rate (2 L ρ K† − K†L ρ − ρ K†L)`.

mod sparse;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bogoliubov::{diagonalize, rates};
use crate::dynamics::{Moments, STEPS_PER_RADIAN};
use crate::error::{Error, Result};
use crate::generators::DampingModel;
use crate::model::{InitialState, ModeState, ModelParams};
use crate::rk4::{self, OdeState};

pub use sparse::Csr;

pub const DEFAULT_CUTOFF: usize = 10;

/// Tolerances a density matrix must meet along a trajectory.
pub const TRACE_TOLERANCE: f64 = 1e-9;
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;

type CMat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coefficients of a jump operator on `(a, a†, b, b†)`.
pub type Jump = [f64; 4];

pub const A: Jump = [1.0, 0.0, 0.0, 0.0];
pub const A_DAG: Jump = [0.0, 1.0, 0.0, 0.0];
pub const B: Jump = [0.0, 0.0, 1.0, 0.0];
pub const B_DAG: Jump = [0.0, 0.0, 0.0, 1.0];

/// Coefficients of the adjoint of a real combination.
pub fn adjoint(j: Jump) -> Jump {
    [j[1], j[0], j[3], j[2]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipatorTerm {
    pub rate: f64,
    pub left: Jump,
    pub right: Jump,
}

impl DissipatorTerm {
    pub fn lindblad(rate: f64, jump: Jump) -> Self {
        Self {
            rate,
            left: jump,
            right: jump,
        }
    }
}

/// Ladder operators of both modes on the `d²`-dimensional product space,
/// indexed `n_a d + n_b`.
#[derive(Debug, Clone)]
pub struct ModeOperators {
    pub cutoff: usize,
    /// `a, a†, b, b†`
    pub ladder: [CMat; 4],
    sparse: [Csr; 4],
}

fn single_mode_lowering(d: usize) -> CMat {
    CMat::from_fn(d, d, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

impl ModeOperators {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::CutoffTooSmall { cutoff });
        }
        let low = single_mode_lowering(cutoff);
        let eye = CMat::identity(cutoff, cutoff);
        let a = low.kronecker(&eye);
        let b = eye.kronecker(&low);
        let ladder = [a.clone(), a.adjoint(), b.clone(), b.adjoint()];
        let sparse = ladder.each_ref().map(Csr::from_dense);
        Ok(Self { cutoff, ladder, sparse })
    }

    pub fn dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    pub fn combine(&self, j: Jump) -> CMat {
        let mut out = CMat::zeros(self.dim(), self.dim());
        for (c, op) in j.iter().zip(&self.ladder) {
            if *c != 0.0 {
                out += op * Complex64::new(*c, 0.0);
            }
        }
        out
    }
}

/// Truncated coupled Hamiltonian
/// `ω(a†a + b†b) + κ(a†b + ab†) + λ(ab + a†b†)`.
fn hamiltonian(ops: &ModeOperators, p: &ModelParams) -> CMat {
    let [a, ad, b, bd] = &ops.ladder;
    let r = |x: f64| Complex64::new(x, 0.0);
    (ad * a + bd * b) * r(p.omega) + (ad * b + a * bd) * r(p.kappa) + (a * b + ad * bd) * r(p.lambda)
}

/// A master equation on the truncated space, compiled to
/// `ρ̇ = −i H_eff ρ + i ρ H_eff† + Σ_k X_k ρ Y_k†`.
#[derive(Debug, Clone)]
pub struct TruncatedSystem {
    pub cutoff: usize,
    pub params: ModelParams,
    pub model: DampingModel,
    pub ops: ModeOperators,
    pub hamiltonian: CMat,
    pub terms: Vec<DissipatorTerm>,
    effective: Csr,
    jumps: Vec<(Csr, Csr)>,
    /// Whether the jump coupling matrix is symmetric, which makes the jump
    /// sum Hermitian for Hermitian `ρ`.
    symmetric_coupling: bool,
}

impl TruncatedSystem {
    pub fn new(params: ModelParams, model: DampingModel, cutoff: usize, terms: Vec<DissipatorTerm>) -> Result<Self> {
        let ops = ModeOperators::new(cutoff)?;
        for t in &terms {
            if !(t.rate >= 0.0) {
                return Err(Error::NegativeParameter {
                    name: "dissipator rate",
                    value: t.rate,
                    requirement: ">= 0",
                });
            }
        }
        let h = hamiltonian(&ops, &params);

        // Σ_terms 2·rate·L ρ K† = Σ_ij C_ij ξ_i ρ ξ_j†.
        let mut coupling = [[0.0f64; 4]; 4];
        for t in &terms {
            for (row, l) in coupling.iter_mut().zip(t.left) {
                for (c, r) in row.iter_mut().zip(t.right) {
                    *c += 2.0 * t.rate * l * r;
                }
            }
        }
        let symmetric_coupling = (0..4).all(|i| (0..i).all(|j| coupling[i][j] == coupling[j][i]));
        let mut anti = CMat::zeros(ops.dim(), ops.dim());
        for t in &terms {
            if t.rate != 0.0 {
                let l = ops.combine(t.left);
                let k = ops.combine(t.right);
                anti += k.adjoint() * l * Complex64::new(t.rate, 0.0);
            }
        }
        let effective = Csr::from_dense(&(&h - anti * I));
        let jumps = (0..4)
            .filter(|&i| coupling[i].iter().any(|&c| c != 0.0))
            .map(|i| {
                let x = Csr::from_dense(&ops.ladder[i]);
                let y = Csr::from_dense(&ops.combine(coupling[i]));
                (x, y)
            })
            .collect();
        Ok(Self {
            cutoff,
            params,
            model,
            ops,
            hamiltonian: h,
            terms,
            effective,
            jumps,
            symmetric_coupling,
        })
    }

    pub fn dim(&self) -> usize {
        self.ops.dim()
    }

    /// Stored entries of the compiled Liouvillian's operators.
    pub fn nnz(&self) -> usize {
        self.effective.nnz() + self.jumps.iter().map(|(x, y)| x.nnz() + y.nnz()).sum::<usize>()
    }

    /// The Liouvillian applied to `rho`.
    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(rho.nrows(), rho.ncols());
        self.effective.left_mul_acc(-I, rho, &mut out);
        self.effective.right_mul_adjoint_acc(I, rho, &mut out);
        let mut tmp = CMat::zeros(rho.nrows(), rho.ncols());
        for (x, y) in &self.jumps {
            tmp.fill(ZERO);
            x.left_mul_acc(ONE, rho, &mut tmp);
            y.right_mul_adjoint_acc(ONE, &tmp, &mut out);
        }
        out
    }

    /// [`TruncatedSystem::apply`] for Hermitian `rho`.
    ///
    /// With `W = i ρ H_eff†` and the Hermitian jump sum `J`, the result is
    /// `W + W† + J`, so only the upper triangle of `J` is computed. Every
    /// product is taken on the right, where the kernel streams whole
    /// columns; `ξ ρ` is formed as the adjoint of `ρ ξ†`.
    pub fn apply_hermitian(&self, rho: &CMat) -> CMat {
        if !self.symmetric_coupling {
            return self.apply(rho);
        }
        let n = rho.nrows();
        let mut w = CMat::zeros(n, n);
        self.effective.right_mul_adjoint_acc(I, rho, &mut w);
        let mut jump = CMat::zeros(n, n);
        let mut right = CMat::zeros(n, n);
        let mut left = CMat::zeros(n, n);
        for (x, y) in &self.jumps {
            right.fill(ZERO);
            x.right_mul_adjoint_acc(ONE, rho, &mut right);
            adjoint_into(&right, &mut left);
            y.right_mul_adjoint_upper_acc(ONE, &left, &mut jump);
        }
        let (ws, js) = (w.as_mut_slice(), jump.as_slice());
        for j in 0..n {
            for i in 0..j {
                let s = ws[i + j * n] + ws[j + i * n].conj() + js[i + j * n];
                ws[i + j * n] = s;
                ws[j + i * n] = s.conj();
            }
            let d = j * (n + 1);
            ws[d] = Complex64::new(2.0 * ws[d].re + js[d].re, 0.0);
        }
        w
    }

    /// The Liouvillian evaluated term by term with dense products; slow, for
    /// checking [`TruncatedSystem::apply`].
    pub fn apply_dense(&self, rho: &CMat) -> CMat {
        let h = &self.hamiltonian;
        let mut out = (h * rho - rho * h) * (-I);
        for t in &self.terms {
            let l = self.ops.combine(t.left);
            let k = self.ops.combine(t.right);
            let kl = k.adjoint() * &l;
            out += (&l * rho * k.adjoint() * Complex64::new(2.0, 0.0) - &kl * rho - rho * &kl)
                * Complex64::new(t.rate, 0.0);
        }
        out
    }

    /// Step bound shared with the Gaussian integrator.
    pub fn step_bound(&self, dt_out: f64) -> f64 {
        let freq = diagonalize(&self.params).max_frequency(self.params.omega);
        dt_out.min(1.0 / (STEPS_PER_RADIAN * freq))
    }
}

/// `dst = src†` for square matrices of equal size.
fn adjoint_into(src: &CMat, dst: &mut CMat) {
    let n = src.nrows();
    let (s, d) = (src.as_slice(), dst.as_mut_slice());
    for (j, col) in s.chunks_exact(n).enumerate() {
        for (i, v) in col.iter().enumerate() {
            d[j + i * n] = v.conj();
        }
    }
}

/// Local damping `Γ_s(n̄_s+1) D[s] + Γ_s n̄_s D[s†]` for `s = a, b`.
pub fn build_local_superop(params: &ModelParams, cutoff: usize) -> Result<TruncatedSystem> {
    let p = params.validate()?;
    let terms = vec![
        DissipatorTerm::lindblad(p.gamma_a * (p.nbar_a + 1.0), A),
        DissipatorTerm::lindblad(p.gamma_a * p.nbar_a, A_DAG),
        DissipatorTerm::lindblad(p.gamma_b * (p.nbar_b + 1.0), B),
        DissipatorTerm::lindblad(p.gamma_b * p.nbar_b, B_DAG),
    ];
    TruncatedSystem::new(p, DampingModel::Local, cutoff, terms)
}

fn nonlocal_params(params: &ModelParams) -> Result<ModelParams> {
    let p = params.validate()?;
    if p.gamma_a != p.gamma_b {
        return Err(Error::AsymmetricDamping {
            gamma_a: p.gamma_a,
            gamma_b: p.gamma_b,
        });
    }
    if p.nbar_a != p.nbar_b {
        return Err(Error::AsymmetricBath {
            nbar_a: p.nbar_a,
            nbar_b: p.nbar_b,
        });
    }
    Ok(p)
}

/// Normal-mode damping written on the normal modes:
/// `⟨FF†⟩ D[l] + ⟨QQ†⟩ D[m] + ⟨F†F⟩ D[l†] + ⟨Q†Q⟩ D[m†]`.
pub fn build_nonlocal_superop(params: &ModelParams, cutoff: usize) -> Result<TruncatedSystem> {
    let p = nonlocal_params(params)?;
    let d = diagonalize(&p);
    let r = rates(&d, p.gamma_a / 2.0, p.nbar_a)?;
    let (l, m) = (d.l_coefficients(), d.m_coefficients());
    let terms = vec![
        DissipatorTerm::lindblad(r.ff_corr, l),
        DissipatorTerm::lindblad(r.qq_corr, m),
        DissipatorTerm::lindblad(r.ff_corr_th, adjoint(l)),
        DissipatorTerm::lindblad(r.qq_corr_th, adjoint(m)),
    ];
    TruncatedSystem::new(p, DampingModel::Nonlocal, cutoff, terms)
}

/// The same master equation expanded on the bare modes with `Γ₁ … Γ₆`.
pub fn build_nonlocal_bare_superop(params: &ModelParams, cutoff: usize) -> Result<TruncatedSystem> {
    let p = nonlocal_params(params)?;
    let r = rates(&diagonalize(&p), p.gamma_a / 2.0, p.nbar_a)?;
    let pair = |rate: f64, left: Jump, right: Jump| DissipatorTerm { rate, left, right };
    let mut terms = Vec::with_capacity(16);
    for (x, xd, y, yd) in [(A, A_DAG, B, B_DAG), (B, B_DAG, A, A_DAG)] {
        terms.push(pair(r.gamma1, x, x));
        terms.push(pair(r.gamma2, xd, xd));
        terms.push(pair(r.gamma3, x, xd));
        terms.push(pair(r.gamma3, xd, x));
        terms.push(pair(r.gamma4, x, y));
        terms.push(pair(r.gamma5, xd, yd));
        terms.push(pair(r.gamma6, x, yd));
        terms.push(pair(r.gamma6, xd, y));
    }
    // Cross terms can be negative; the compiled Liouvillian is what must be
    // positive, so skip the per-term rate check by folding signs into `left`.
    let terms = terms
        .into_iter()
        .map(|t| {
            if t.rate < 0.0 {
                pair(-t.rate, t.left.map(|c| -c), t.right)
            } else {
                t
            }
        })
        .collect();
    TruncatedSystem::new(p, DampingModel::Nonlocal, cutoff, terms)
}

/// Density matrix on the truncated two-mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub cutoff: usize,
    pub rho: CMat,
    pub t: f64,
}

impl OdeState for CMat {
    fn add_scaled(&self, s: f64, other: &Self) -> Self {
        self + other * Complex64::new(s, 0.0)
    }
}

/// `D(α) S(r e^{iθ}) ρ_th S† D†` on `d` levels, built on a padded space and
/// truncated.
fn single_mode_gaussian(mode: &ModeState, d: usize) -> CMat {
    let big = d + 60;
    let a = single_mode_lowering(big);
    let ad = a.adjoint();
    let q = mode.thermal / (1.0 + mode.thermal);
    let mut rho = CMat::from_fn(big, big, |i, j| {
        if i == j {
            Complex64::new((1.0 - q) * q.powi(i as i32), 0.0)
        } else {
            ZERO
        }
    });
    if mode.squeeze_r != 0.0 {
        let xi = Complex64::from_polar(mode.squeeze_r, mode.squeeze_phase);
        let s = ((&a * &a) * xi.conj() - (&ad * &ad) * xi).scale(0.5).exp();
        rho = &s * rho * s.adjoint();
    }
    if mode.displacement != ZERO {
        let alpha = mode.displacement;
        let disp = (&ad * alpha - &a * alpha.conj()).exp();
        rho = &disp * rho * disp.adjoint();
    }
    rho.view((0, 0), (d, d)).into_owned()
}

impl DensityMatrix {
    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::product_gaussian(&InitialState::vacuum(), cutoff)
    }

    /// Truncated, renormalized product of two single-mode Gaussian states.
    pub fn product_gaussian(init: &InitialState, cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::CutoffTooSmall { cutoff });
        }
        let init = init.validate()?;
        let rho = single_mode_gaussian(&init.a, cutoff).kronecker(&single_mode_gaussian(&init.b, cutoff));
        let tr = rho.trace();
        Ok(Self {
            cutoff,
            rho: rho / tr,
            t: 0.0,
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).camax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()).scale(0.5);
        herm.symmetric_eigenvalues().min()
    }

    /// Checks trace, Hermiticity and positivity.
    pub fn check(&self) -> Result<()> {
        let tr = self.trace();
        if !((tr - ONE).norm() <= TRACE_TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} at t = {}", self.t)));
        }
        let herm = self.hermiticity_error();
        if !(herm <= HERMITICITY_TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!(
                "anti-Hermitian part {herm:e} at t = {}",
                self.t
            )));
        }
        let min = self.min_eigenvalue();
        if !(min >= -POSITIVITY_TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!(
                "eigenvalue {min:e} at t = {}",
                self.t
            )));
        }
        Ok(())
    }

    pub fn expectation(&self, op: &CMat) -> Complex64 {
        (op * &self.rho).trace()
    }

    /// First and second moments by operator averages.
    pub fn moments(&self, ops: &ModeOperators) -> Moments {
        let [a, ad, b, bd] = &ops.sparse;
        let apply = |op: &Csr| {
            let mut out = CMat::zeros(self.rho.nrows(), self.rho.ncols());
            op.left_mul_acc(ONE, &self.rho, &mut out);
            out
        };
        let (a_rho, b_rho) = (apply(a), apply(b));
        Moments {
            a: a.trace_product(&self.rho),
            b: b.trace_product(&self.rho),
            n_a: ad.trace_product(&a_rho).re,
            n_b: bd.trace_product(&b_rho).re,
            aa: a.trace_product(&a_rho),
            bb: b.trace_product(&b_rho),
            ab: a.trace_product(&b_rho),
            ab_dag: a.trace_product(&apply(bd)),
        }
    }
}

/// Samples of `ρ(t)` from `rho0.t` to `t_end` every `dt_out`, stepped with
/// the same RK4 policy as the Gaussian path. Each sample is checked.
///
/// The Liouvillian preserves Hermiticity, so every RK4 stage is Hermitian
/// and the cheaper [`TruncatedSystem::apply_hermitian`] applies.
pub fn integrate(
    system: &TruncatedSystem,
    rho0: &DensityMatrix,
    t_end: f64,
    dt_out: f64,
) -> Result<Vec<DensityMatrix>> {
    if rho0.cutoff != system.cutoff {
        return Err(Error::InvalidDensityMatrix(format!(
            "cutoff {} does not match the system's {}",
            rho0.cutoff, system.cutoff
        )));
    }
    let times = rk4::output_times(rho0.t, t_end, dt_out)?;
    let mut out = Vec::with_capacity(times.len());
    rk4::integrate(
        rho0.rho.clone(),
        &times,
        system.step_bound(dt_out),
        |rho: &CMat| system.apply_hermitian(rho),
        |t, rho| {
            let sample = DensityMatrix {
                cutoff: system.cutoff,
                rho: rho.clone(),
                t,
            };
            sample.check()?;
            out.push(sample);
            Ok(())
        },
    )?;
    Ok(out)
}

/// Lowest eigenvector of the truncated coupled Hamiltonian.
pub fn ground_state(params: &ModelParams, cutoff: usize) -> Result<DensityMatrix> {
    let p = params.validate()?;
    let ops = ModeOperators::new(cutoff)?;
    let eig = hamiltonian(&ops, &p).symmetric_eigen();
    let k = eig.eigenvalues.imin();
    let v = eig.eigenvectors.column(k);
    Ok(DensityMatrix {
        cutoff,
        rho: v * v.adjoint(),
        t: 0.0,
    })
}
