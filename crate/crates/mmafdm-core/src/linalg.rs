//! Dense complex matrices and the small Hermitian eigensolver.
//!
//! Frame lengths in this crate are tens of samples and the Hermitian
//! matrices fed to the eigensolver are path-count sized, so everything here
//! is a plain `O(n^2)`/`O(n^3)` dense routine. No attempt is made at being a
//! general linear algebra library.

use alloc::vec;
use alloc::vec::Vec;
use libm::{cos, sin, sqrt};
use num_complex::Complex64;

use crate::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c));
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    /// Diagonal matrix from its diagonal entries.
    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &CMat) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product; checks dimension agreement.
    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&a, &b) in self.row(r).iter().zip(x) {
                acc += a * b;
            }
            *out = acc;
        }
        Ok(y)
    }

    pub fn sub(&self, rhs: &CMat) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn add_assign_scaled(&mut self, rhs: &CMat, s: Complex64) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entry-wise deviation from another matrix.
    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl core::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Unit-modulus complex exponential `e^{j*phase}`.
#[inline]
pub fn cis(phase: f64) -> Complex64 {
    Complex64::new(cos(phase), sin(phase))
}

/// Normalized DFT matrix: entry `(m, n) = e^{-j 2 pi m n / N} / sqrt(N)`.
pub fn dft_matrix(n: usize) -> CMat {
    assert!(n >= 1);
    let scale = 1.0 / sqrt(n as f64);
    let mut f = CMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let phase = -2.0 * core::f64::consts::PI * (r as f64) * (c as f64) / n as f64;
            f[(r, c)] = cis(phase) * scale;
        }
    }
    f
}

/// Quadratic-phase chirp diagonal: `diag(e^{-j 2 pi c n^2})`, `n = 0..N-1`.
pub fn chirp_diag(c: f64, n: usize) -> CMat {
    assert!(n >= 1);
    let diag: Vec<Complex64> = (0..n)
        .map(|i| cis(-2.0 * core::f64::consts::PI * c * (i as f64) * (i as f64)))
        .collect();
    CMat::from_diag(&diag)
}

/// Forward cyclic-shift permutation raised to the d-th power:
/// `(P^d x)[n] = x[(n - d) mod N]`.
pub fn cyclic_shift_matrix(n: usize, d: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for r in 0..n {
        let c = (r + n - d % n) % n;
        m[(r, c)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Squared Euclidean norm of a complex vector.
#[inline]
pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigenvalues of a Hermitian matrix in descending order.
///
/// Cyclic Jacobi with complex plane rotations; adequate for the path-count
/// sized matrices this crate produces. Rejects inputs whose anti-Hermitian
/// part exceeds `1e-10` (relative to the largest entry) and gives up after a
/// fixed sweep budget.
pub fn hermitian_eigenvalues(h: &CMat) -> Result<Vec<f64>> {
    if h.rows() != h.cols() {
        return Err(Error::DimensionMismatch { expected: h.rows(), got: h.cols() });
    }
    let n = h.rows();
    let scale = h.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for r in 0..n {
        for c in r..n {
            if (h[(r, c)] - h[(c, r)].conj()).norm() > 1e-10 * scale {
                return Err(Error::NotHermitian);
            }
        }
    }

    let mut a = h.clone();
    // convergence target per the off-diagonal Frobenius criterion; the
    // Frobenius fallback keeps trace-free matrices from stalling
    let trace_abs = a.trace().re.abs();
    let tol = 1e-12 * trace_abs.max(a.frobenius_norm());

    for _sweep in 0..100 {
        let mut off = 0.0;
        for r in 0..n {
            for c in (r + 1)..n {
                off += a[(r, c)].norm_sqr();
            }
        }
        if sqrt(2.0 * off) <= tol {
            let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
            eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
            return Ok(eig);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, p, q);
            }
        }
    }
    Err(Error::NoConvergence)
}

/// Annihilate `a[(p, q)]` with a unitary plane rotation, `a` Hermitian.
fn jacobi_rotate(a: &mut CMat, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag; // e^{j beta}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = {
        let s = if theta >= 0.0 { 1.0 } else { -1.0 };
        s / (theta.abs() + sqrt(1.0 + theta * theta))
    };
    let c = 1.0 / sqrt(1.0 + t * t);
    let s = t * c;

    let n = a.rows();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_rp = arp * c - arq * phase.conj() * s;
        let new_rq = arp * phase * s + arq * c;
        a[(r, p)] = new_rp;
        a[(r, q)] = new_rq;
        a[(p, r)] = new_rp.conj();
        a[(q, r)] = new_rq.conj();
    }
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
}

/// Count of eigenvalues treated as nonzero: entries above
/// `1e-10 * max(eigenvalue)`. Eigenvalues must be sorted descending.
pub fn numerical_rank(eigenvalues: &[f64]) -> usize {
    let max = eigenvalues.first().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return 0;
    }
    let tol = 1e-10 * max;
    eigenvalues.iter().filter(|&&e| e > tol).count()
}
