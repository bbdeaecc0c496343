//! Dense complex matrices for few-qubit work.
//!
//! Dimensions stay at 8x8 or below, so everything is exact, allocation-light,
//! and written for auditability rather than asymptotic speed. Storage is
//! row-major.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a dim x dim matrix entry by entry from `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Outer product v * v^dagger of a column vector.
    pub fn outer(v: &[Complex64]) -> Self {
        CMatrix::from_fn(v.len(), |r, c| v[r] * v[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim, "matrix dimension mismatch");
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(o.data.iter()) {
            *a += *b;
        }
        m
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim, "matrix dimension mismatch");
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(o.data.iter()) {
            *a -= *b;
        }
        m
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= s;
        }
        m
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut m = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    m.data[r * n + c] += a * o.get(k, c);
                }
            }
        }
        m
    }

    /// Kronecker product; `self` supplies the most significant index block.
    pub fn kron(&self, o: &CMatrix) -> CMatrix {
        let (n, m) = (self.dim, o.dim);
        CMatrix::from_fn(n * m, |r, c| self.get(r / m, c / m) * o.get(r % m, c % m))
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest |A[r][c] - conj(A[c][r])| over all entries.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, o: &CMatrix) -> f64 {
        assert_eq!(self.dim, o.dim, "matrix dimension mismatch");
        self.data
            .iter()
            .zip(o.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
    /// ascending. Caller is responsible for Hermiticity; the off-diagonal
    /// residual after convergence is below 1e-13 times the matrix scale.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = self.clone();
        let scale = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        for _sweep in 0..60 {
            let off: f64 = {
                let mut s = 0.0;
                for r in 0..n {
                    for c in (r + 1)..n {
                        s += a.get(r, c).norm_sqr();
                    }
                }
                s.sqrt()
            };
            if off <= 1e-14 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let r = apq.norm();
                    if r <= 1e-300 {
                        continue;
                    }
                    let phase = apq / r;
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                    let (s, c) = theta.sin_cos();
                    // Two-sided rotation in the (p, q) plane zeroing A[p][q].
                    let jp = phase * s;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, akp * c - akq * jp.conj());
                        a.set(k, q, akp * jp + akq * c);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, apk * c - aqk * jp);
                        a.set(q, k, apk * jp.conj() + aqk * c);
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        eig
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
