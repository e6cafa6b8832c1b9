//! Compressed-row complex matrices acting on dense density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl Csr {
    /// Drops entries with modulus at or below `1e-300`.
    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operators are square");
        let dim = m.nrows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..dim {
                let v = m[(i, j)];
                if v.norm() > 1e-300 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim)
            .flat_map(move |i| (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.cols[k], self.vals[k])))
    }

    /// `out += s · self · x`
    pub fn left_mul_acc(&self, s: Complex64, x: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let n = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        xs.chunks_exact(n).zip(os.chunks_exact_mut(n)).for_each(|(xc, oc)| {
            for (i, o) in oc.iter_mut().enumerate() {
                let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
                let mut acc = Complex64::new(0.0, 0.0);
                for (&c, &v) in self.cols[lo..hi].iter().zip(&self.vals[lo..hi]) {
                    acc += v * xc[c];
                }
                *o += s * acc;
            }
        });
    }

    /// `out += s · x · self†`
    pub fn right_mul_adjoint_acc(&self, s: Complex64, x: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        // Column j of the result gathers Σ_k conj(K_jk) · column k of x.
        let n = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        os.chunks_exact_mut(n).enumerate().for_each(|(j, oc)| {
            for k in self.row_ptr[j]..self.row_ptr[j + 1] {
                let w = s * self.vals[k].conj();
                let xc = &xs[self.cols[k] * n..(self.cols[k] + 1) * n];
                for (o, &xv) in oc.iter_mut().zip(xc) {
                    *o += w * xv;
                }
            }
        });
    }

    /// The upper triangle, diagonal included, of `out += s · x · self†`;
    /// entries below the diagonal are left untouched.
    pub fn right_mul_adjoint_upper_acc(&self, s: Complex64, x: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let n = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        os.chunks_exact_mut(n).enumerate().for_each(|(j, oc)| {
            for k in self.row_ptr[j]..self.row_ptr[j + 1] {
                let w = s * self.vals[k].conj();
                let xc = &xs[self.cols[k] * n..self.cols[k] * n + j + 1];
                for (o, &xv) in oc[..=j].iter_mut().zip(xc) {
                    *o += w * xv;
                }
            }
        });
    }

    /// `Tr(self · x)`
    pub fn trace_product(&self, x: &DMatrix<Complex64>) -> Complex64 {
        self.entries().map(|(i, j, v)| v * x[(j, i)]).sum()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.entries() {
            m[(i, j)] += v;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: f64) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, n, |i, j| {
            let x = (seed + 1.3 * i as f64 + 0.7 * j as f64).sin();
            if x.abs() < 0.3 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(x, (x * 3.0).cos())
            }
        })
    }

    #[test]
    fn products_match_dense() {
        let k = sample(7, 0.1);
        let x = sample(7, 2.0);
        let csr = Csr::from_dense(&k);
        assert_eq!(csr.to_dense(), k);
        let s = Complex64::new(0.3, -1.1);

        let mut left = DMatrix::zeros(7, 7);
        csr.left_mul_acc(s, &x, &mut left);
        assert!((left - (&k * &x) * s).camax() < 1e-13);

        let mut right = DMatrix::zeros(7, 7);
        csr.right_mul_adjoint_acc(s, &x, &mut right);
        assert!((&right - (&x * k.adjoint()) * s).camax() < 1e-13);

        let mut upper = DMatrix::zeros(7, 7);
        csr.right_mul_adjoint_upper_acc(s, &x, &mut upper);
        assert!((upper - right.upper_triangle()).camax() < 1e-13);

        assert!((csr.trace_product(&x) - (&k * &x).trace()).norm() < 1e-13);
    }
}
