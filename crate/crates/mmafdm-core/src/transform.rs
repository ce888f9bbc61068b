//! Discrete affine Fourier transform (DAFT) pair.
//!
//! The DAFT operator is a DFT sandwiched between two quadratic-phase
//! diagonals, `A = L_{c2} F L_{c1}` with `L_c = diag(e^{-j 2 pi c n^2})`.
//! Applied as `y = A r` at the receiver and inverted as `s = A^H x` at the
//! transmitter, it turns each chirp subcarrier into a pure quadratic-phase
//! waveform. Transforms are evaluated as explicit `O(N^2)` sums; frame sizes
//! here never justify a fast factorization.

use alloc::vec;
use alloc::vec::Vec;
use libm::sqrt;
use num_complex::Complex64;

use crate::linalg::{chirp_diag, cis, dft_matrix, CMat};
use crate::{Error, Result};

/// DAFT parameter set: frame length and the two chirp rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DaftParams {
    /// Chirps per frame (N >= 2 for a meaningful frame).
    pub n: usize,
    /// Post-chirp rate `c1` (delay-Doppler separation knob).
    pub c1: f64,
    /// Pre-chirp rate `c2` (any irrational value works).
    pub c2: f64,
}

impl DaftParams {
    pub fn new(n: usize, c1: f64, c2: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams("frame length must be at least 2"));
        }
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::InvalidParams("chirp rates must be finite"));
        }
        Ok(Self { n, c1, c2 })
    }

    /// Default chirp rates for a given maximum normalized Doppler:
    /// `c1 = (2(alpha_max + 1) + 1) / (2N)` and `c2` the golden-ratio
    /// conjugate as an explicit irrational constant.
    pub fn recommended(n: usize, alpha_max: f64) -> Result<Self> {
        let c1 = (2.0 * (alpha_max + 1.0) + 1.0) / (2.0 * n as f64);
        let c2 = (sqrt(5.0) - 1.0) / 2.0;
        Self::new(n, c1, c2)
    }

    /// The DAFT operator `A = L_{c2} F L_{c1}` in matrix form.
    pub fn matrix(&self) -> CMat {
        chirp_diag(self.c2, self.n)
            .matmul(&dft_matrix(self.n))
            .matmul(&chirp_diag(self.c1, self.n))
    }
}

/// Forward DAFT, `A x`. Energy preserving.
pub fn daft(x: &[Complex64], p: &DaftParams) -> Result<Vec<Complex64>> {
    transform(x, p, -1.0)
}

/// Inverse DAFT, `A^H x`; equals the direct evaluation of the
/// quadratic-phase double sum used to synthesize the time-domain frame.
pub fn idaft(x: &[Complex64], p: &DaftParams) -> Result<Vec<Complex64>> {
    transform(x, p, 1.0)
}

fn transform(x: &[Complex64], p: &DaftParams, sign: f64) -> Result<Vec<Complex64>> {
    let n = p.n;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let two_pi = sign * 2.0 * core::f64::consts::PI;
    // inner chirp rate is c1 for A (applied to the input index) and c2 for A^H
    let (c_in, c_out) = if sign < 0.0 { (p.c1, p.c2) } else { (p.c2, p.c1) };
    let pre: Vec<Complex64> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| v * cis(two_pi * c_in * (i as f64) * (i as f64)))
        .collect();
    let scale = 1.0 / sqrt(n as f64);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (l, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &v) in pre.iter().enumerate() {
            acc += v * cis(two_pi * (l as f64) * (m as f64) / n as f64);
        }
        *o = acc * scale * cis(two_pi * c_out * (l as f64) * (l as f64));
    }
    Ok(out)
}
