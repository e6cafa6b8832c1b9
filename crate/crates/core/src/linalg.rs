//! Small dense helpers shared by the Gaussian path.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat4 = Matrix4<Complex64>;
pub type CVec4 = Vector4<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn symmetrize(m: &CMat4) -> CMat4 {
    (m + m.transpose()) * c(0.5)
}

/// The map induced by `z ↦ z*` on `(κ_a, κ_a*, η_b, η_b*)`: swap indices
/// 1↔2 and 3↔4, then conjugate. Generator matrices and the exponent `L`
/// of any physical state are fixed points of it.
pub fn conjugate_pairing(m: &CMat4) -> CMat4 {
    const SWAP: [usize; 4] = [1, 0, 3, 2];
    CMat4::from_fn(|i, j| m[(SWAP[i], SWAP[j])].conj())
}

pub fn conjugate_pairing_vec(v: &CVec4) -> CVec4 {
    CVec4::new(v[1].conj(), v[0].conj(), v[3].conj(), v[2].conj())
}

/// Max real part over the eigenvalues of `m`.
pub fn spectral_abscissa(m: &CMat4) -> Result<f64> {
    let eig = m
        .eigenvalues()
        .ok_or(Error::Singular("complex Schur decomposition did not converge"))?;
    Ok(eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abscissa_of_diagonal() {
        let m = CMat4::from_diagonal(&CVec4::new(
            Complex64::new(-0.1, 1.0),
            Complex64::new(-0.3, -1.0),
            Complex64::new(-0.2, 0.5),
            Complex64::new(-0.05, 0.0),
        ));
        assert!((spectral_abscissa(&m).unwrap() + 0.05).abs() < 1e-14);
    }

    #[test]
    fn abscissa_of_rotated_block() {
        // [[−g, w], [−w, −g]] has eigenvalues −g ± iw.
        let mut m = CMat4::zeros();
        m[(0, 0)] = c(-0.2);
        m[(0, 1)] = c(1.5);
        m[(1, 0)] = c(-1.5);
        m[(1, 1)] = c(-0.2);
        m[(2, 2)] = c(-0.7);
        m[(3, 3)] = c(-0.9);
        assert!((spectral_abscissa(&m).unwrap() + 0.2).abs() < 1e-12);
    }

    #[test]
    fn pairing_is_an_involution() {
        let m = CMat4::from_fn(|i, j| Complex64::new(i as f64 + 0.5, j as f64 - 1.0));
        assert_eq!(conjugate_pairing(&conjugate_pairing(&m)), m);
    }
}
