//! Doubly-dispersive channel in its DAF-domain matrix form.
//!
//! Each of the `P` paths carries a complex gain, an integer normalized
//! delay and a real normalized Doppler shift. In the time domain a path
//! delays the frame cyclically (the chirp-periodic prefix plus its phase
//! correction make linear delay look cyclic), applies a per-sample Doppler
//! phase ramp, and scales by the gain. Conjugating with the DAFT operator
//! gives the per-path effective matrix
//! `H_p = A G_p D_p Pi^{d_p} A^H` and the frame-level channel
//! `H_eff = sum_p h_p H_p`. Noise is generated directly in the DAF domain;
//! the DAFT is unitary, so the statistics are unchanged.

use alloc::vec::Vec;
use libm::cos;
use num_complex::Complex64;

use crate::linalg::{cis, cyclic_shift_matrix, CMat};
use crate::rng::DetRng;
use crate::transform::DaftParams;
use crate::{Error, Result};

/// One propagation path: gain, integer delay, real Doppler, and the arrival
/// angle the Doppler was drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathTriplet {
    pub gain: Complex64,
    /// Normalized delay in samples, `0 <= delay <= d_max`.
    pub delay: usize,
    /// Normalized Doppler in cycles per frame, `|doppler| <= alpha_max`.
    pub doppler: f64,
    /// Angle of arrival (radians) that produced the Doppler value.
    pub angle: f64,
}

impl PathTriplet {
    /// Integer part of the Doppler such that the fractional remainder
    /// lands in `[-0.5, 0.5)`; the two accessors always satisfy
    /// `doppler = doppler_integer() + doppler_fraction()`.
    pub fn doppler_integer(&self) -> i64 {
        libm::floor(self.doppler + 0.5) as i64
    }

    pub fn doppler_fraction(&self) -> f64 {
        self.doppler - self.doppler_integer() as f64
    }
}

/// Channel geometry and statistics from which realizations are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub daft: DaftParams,
    pub num_paths: usize,
    /// Maximum normalized delay (samples).
    pub max_delay: usize,
    /// Maximum normalized Doppler (cycles per frame).
    pub max_doppler: f64,
}

impl ChannelModel {
    pub fn new(daft: DaftParams, num_paths: usize, max_delay: usize, max_doppler: f64) -> Result<Self> {
        if num_paths == 0 {
            return Err(Error::InvalidParams("need at least one path"));
        }
        if max_delay >= daft.n {
            return Err(Error::InvalidParams("maximum delay must be below the frame length"));
        }
        if max_doppler < 0.0 {
            return Err(Error::InvalidParams("maximum Doppler must be nonnegative"));
        }
        Ok(Self { daft, num_paths, max_delay, max_doppler })
    }

    /// Draw a channel realization: i.i.d. `CN(0, 1/P)` gains, Jakes Doppler
    /// `alpha = alpha_max cos(theta)` with uniform arrival angles, path 1
    /// pinned at zero delay and the remaining delays uniform on
    /// `{0, .., d_max}`.
    pub fn sample(&self, rng: &mut DetRng) -> ChannelRealization {
        let paths: Vec<PathTriplet> = (0..self.num_paths)
            .map(|p| {
                let gain = rng.complex_gaussian(1.0 / self.num_paths as f64);
                let angle = rng.uniform(-core::f64::consts::PI, core::f64::consts::PI);
                let doppler = self.max_doppler * cos(angle);
                let delay = if p == 0 {
                    0
                } else {
                    rng.below(self.max_delay as u64 + 1) as usize
                };
                PathTriplet { gain, delay, doppler, angle }
            })
            .collect();
        ChannelRealization::from_paths(paths, &self.daft)
    }
}

/// A drawn channel: the path triplets plus the derived per-path and
/// effective matrices. Immutable once built.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub paths: Vec<PathTriplet>,
    pub per_path: Vec<CMat>,
    pub h_eff: CMat,
}

impl ChannelRealization {
    /// Build the per-path matrices and `H_eff = sum_p h_p H_p`.
    pub fn from_paths(paths: Vec<PathTriplet>, daft: &DaftParams) -> Self {
        let a = daft.matrix();
        let a_h = a.hermitian();
        let per_path: Vec<CMat> =
            paths.iter().map(|p| per_path_matrix_cached(p, daft, &a, &a_h)).collect();
        let n = daft.n;
        let mut h_eff = CMat::zeros(n, n);
        for (path, matrix) in paths.iter().zip(&per_path) {
            h_eff.add_assign_scaled(matrix, path.gain);
        }
        Self { paths, per_path, h_eff }
    }
}

/// Chirp-periodic-prefix phase correction: a diagonal whose first `d`
/// entries carry `e^{-j 2 pi c1 (N^2 - 2N(d - n))}` and the rest are 1.
pub fn cpp_matrix(d: usize, c1: f64, n: usize) -> Result<CMat> {
    if d >= n {
        return Err(Error::InvalidParams("delay must be below the frame length"));
    }
    let big_n = n as f64;
    let diag: Vec<Complex64> = (0..n)
        .map(|i| {
            if i < d {
                cis(-2.0 * core::f64::consts::PI * c1 * (big_n * big_n - 2.0 * big_n * (d - i) as f64))
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    Ok(CMat::from_diag(&diag))
}

/// Doppler phase-ramp diagonal `diag(e^{-j 2 pi alpha n / N})`.
pub fn doppler_matrix(alpha: f64, n: usize) -> CMat {
    let diag: Vec<Complex64> = (0..n)
        .map(|i| cis(-2.0 * core::f64::consts::PI * alpha * i as f64 / n as f64))
        .collect();
    CMat::from_diag(&diag)
}

/// Effective DAF-domain matrix of a single path (unit gain):
/// `A G_cpp D_doppler Pi^d A^H`.
pub fn per_path_matrix(path: &PathTriplet, daft: &DaftParams) -> CMat {
    let a = daft.matrix();
    let a_h = a.hermitian();
    per_path_matrix_cached(path, daft, &a, &a_h)
}

fn per_path_matrix_cached(path: &PathTriplet, daft: &DaftParams, a: &CMat, a_h: &CMat) -> CMat {
    let n = daft.n;
    // rows of A^H permuted by the cyclic shift, then scaled by the Doppler
    // ramp and the prefix phase fix; one dense product with A finishes it
    let shifted = cyclic_shift_matrix(n, path.delay).matmul(a_h);
    let doppler = doppler_matrix(path.doppler, n);
    let cpp = cpp_matrix(path.delay, daft.c1, n).expect("delay below frame length");
    let mut scaled = shifted;
    for r in 0..n {
        let factor = cpp[(r, r)] * doppler[(r, r)];
        for c in 0..n {
            scaled[(r, c)] *= factor;
        }
    }
    a.matmul(&scaled)
}

/// Noisy DAF-domain observation `y = H_eff x + w` with per-entry complex
/// noise variance `n0`.
pub fn apply_channel(
    x: &[Complex64],
    ch: &ChannelRealization,
    n0: f64,
    rng: &mut DetRng,
) -> Result<Vec<Complex64>> {
    if n0 < 0.0 {
        return Err(Error::DomainError("noise density must be nonnegative"));
    }
    let mut y = ch.h_eff.mul_vec(x)?;
    if n0 > 0.0 {
        for sample in y.iter_mut() {
            *sample += rng.complex_gaussian(n0);
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm_sqr;
    use crate::transform::idaft;

    fn flat_path() -> PathTriplet {
        PathTriplet { gain: Complex64::new(1.0, 0.0), delay: 0, doppler: 0.0, angle: 0.0 }
    }

    fn identity_channel(daft: &DaftParams) -> ChannelRealization {
        ChannelRealization::from_paths(vec![flat_path()], daft)
    }

    fn random_frame(n: usize, rng: &mut DetRng) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            .collect()
    }

    /// Time-domain oracle for the full receive chain: synthesize the frame,
    /// prepend a chirp-periodic prefix, run the tapped-delay-line with
    /// per-sample Doppler phases, discard the prefix, and transform back.
    fn time_domain_oracle(
        x: &[Complex64],
        paths: &[PathTriplet],
        daft: &DaftParams,
    ) -> Vec<Complex64> {
        let n = daft.n;
        let s = idaft(x, daft).unwrap();
        let cpp_len = paths.iter().map(|p| p.delay).max().unwrap();
        // extended signal over sample indices -cpp_len .. N-1; the prefix
        // copies the frame tail with the chirp-periodic phase factor
        let mut extended = Vec::with_capacity(cpp_len + n);
        for l in (1..=cpp_len).rev() {
            let phase = -2.0
                * core::f64::consts::PI
                * daft.c1
                * ((n * n) as f64 - 2.0 * (n as f64) * l as f64);
            extended.push(s[n - l] * cis(phase));
        }
        extended.extend_from_slice(&s);
        let mut r = vec![Complex64::new(0.0, 0.0); n];
        for (out_idx, sample) in r.iter_mut().enumerate() {
            for p in paths {
                // extended[cpp_len + out_idx - delay] = s~[n - d]
                let tap = extended[cpp_len + out_idx - p.delay];
                let phase =
                    -2.0 * core::f64::consts::PI * p.doppler * out_idx as f64 / n as f64;
                *sample += p.gain * tap * cis(phase);
            }
        }
        crate::transform::daft(&r, daft).unwrap()
    }

    #[test]
    fn cpp_zero_delay_is_identity() {
        let m = cpp_matrix(0, 0.37, 4).unwrap();
        assert!(m.max_abs_diff(&CMat::identity(4)) < 1e-15);
    }

    #[test]
    fn cpp_entry_example() {
        // d = 1, N = 4, c1 = 1/8: entry (0,0) = e^{-j 2 pi (1/8)(16 - 8)} = 1
        let m = cpp_matrix(1, 1.0 / 8.0, 4).unwrap();
        assert!((m[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for i in 0..4 {
            assert!((m[(i, i)].norm() - 1.0).abs() < 1e-15);
        }
        assert!(cpp_matrix(4, 0.1, 4).is_err());
    }

    #[test]
    fn cpp_integer_phase_reduction() {
        // when 2 N c1 is an integer the n-dependent factor is a unit root of
        // e^{-j 2 pi c1 N^2}
        let (n, c1, d) = (4usize, 0.375, 2usize); // 2 N c1 = 3
        let m = cpp_matrix(d, c1, n).unwrap();
        let base = cis(-2.0 * core::f64::consts::PI * c1 * (n * n) as f64);
        for i in 0..d {
            let ratio = m[(i, i)] / base;
            // ratio must be a (2N)-th root of unity
            let mut power = Complex64::new(1.0, 0.0);
            let mut is_root = false;
            for _ in 0..2 * n {
                if (power - ratio).norm() < 1e-12 {
                    is_root = true;
                    break;
                }
                power *= cis(2.0 * core::f64::consts::PI / (2.0 * n as f64));
            }
            // recompute directly as the fallback check
            let direct = cis(
                -2.0 * core::f64::consts::PI
                    * c1
                    * ((n * n) as f64 - 2.0 * (n as f64) * (d - i) as f64),
            );
            assert!(is_root, "entry {i} is not on the expected root lattice");
            assert!((m[(i, i)] - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn per_path_identity_for_flat_path() {
        let daft = DaftParams::recommended(8, 1.0).unwrap();
        let h = per_path_matrix(&flat_path(), &daft);
        assert!(h.max_abs_diff(&CMat::identity(8)) < 1e-12);
    }

    #[test]
    fn per_path_integer_doppler_is_permutation_like() {
        // with zero delay and an exactly integer Doppler, the path matrix
        // has one unit-magnitude entry per row at the Doppler shift
        let n = 8;
        let daft = DaftParams::recommended(n, 1.0).unwrap();
        let shift = 1i64;
        let path = PathTriplet {
            gain: Complex64::new(1.0, 0.0),
            delay: 0,
            doppler: shift as f64,
            angle: 0.0,
        };
        let h = per_path_matrix(&path, &daft);
        for r in 0..n {
            for c in 0..n {
                let mag = h[(r, c)].norm();
                if c == (r + shift as usize) % n {
                    assert!((mag - 1.0).abs() < 1e-10, "({r},{c}) = {mag}");
                } else {
                    assert!(mag < 1e-10, "({r},{c}) = {mag}");
                }
            }
        }
    }

    #[test]
    fn per_path_rows_and_columns_unit_norm() {
        let daft = DaftParams::recommended(8, 1.0).unwrap();
        let path = PathTriplet {
            gain: Complex64::new(0.3, -0.4),
            delay: 1,
            doppler: 0.4321,
            angle: 1.2,
        };
        let h = per_path_matrix(&path, &daft);
        for r in 0..8 {
            let row: f64 = (0..8).map(|c| h[(r, c)].norm_sqr()).sum();
            let col: f64 = (0..8).map(|c| h[(c, r)].norm_sqr()).sum();
            assert!((row - 1.0).abs() < 1e-10);
            assert!((col - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn doppler_decomposition() {
        let make = |doppler| PathTriplet {
            gain: Complex64::new(0.0, 0.0),
            delay: 0,
            doppler,
            angle: 0.0,
        };
        let p = make(-1.3);
        assert_eq!(p.doppler_integer(), -1);
        assert!((p.doppler_fraction() - (-0.3)).abs() < 1e-12);
        // half-integer boundaries stay canonical and consistent
        for doppler in [-1.5, -0.5, 0.5, 1.5, 0.73, -0.99] {
            let p = make(doppler);
            let frac = p.doppler_fraction();
            assert!((-0.5..0.5).contains(&frac), "doppler {doppler}");
            assert!(
                (p.doppler_integer() as f64 + frac - doppler).abs() < 1e-12,
                "decomposition must reassemble {doppler}"
            );
        }
    }

    #[test]
    fn sample_gain_power_normalized() {
        let daft = DaftParams::recommended(4, 1.0).unwrap();
        let model = ChannelModel::new(daft, 3, 1, 1.0).unwrap();
        let mut rng = DetRng::new(77);
        let draws = 100_000;
        let mut total = 0.0;
        for _ in 0..draws {
            let ch = model.sample(&mut rng);
            total += ch.paths.iter().map(|p| p.gain.norm_sqr()).sum::<f64>();
        }
        let mean = total / draws as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean path power {mean}");
    }

    #[test]
    fn sample_doppler_follows_arcsine_law() {
        // Kolmogorov-Smirnov against the cos-of-uniform-angle distribution,
        // F(a) = 1 - acos(a / alpha_max) / pi, at the 1% level
        let daft = DaftParams::recommended(4, 1.0).unwrap();
        let model = ChannelModel::new(daft, 1, 0, 1.0).unwrap();
        let mut rng = DetRng::new(12345);
        let draws = 100_000;
        let mut alphas: Vec<f64> = (0..draws)
            .map(|_| model.sample(&mut rng).paths[0].doppler)
            .collect();
        alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cdf = |a: f64| 1.0 - libm::acos(a.clamp(-1.0, 1.0)) / core::f64::consts::PI;
        let mut d_stat = 0.0f64;
        for (i, &a) in alphas.iter().enumerate() {
            let f = cdf(a);
            let lo = i as f64 / draws as f64;
            let hi = (i + 1) as f64 / draws as f64;
            d_stat = d_stat.max((f - lo).abs()).max((f - hi).abs());
        }
        let critical = 1.628 / (draws as f64).sqrt();
        assert!(d_stat < critical, "KS statistic {d_stat} exceeds {critical}");
    }

    #[test]
    fn degenerate_single_path() {
        let daft = DaftParams::recommended(4, 1.0).unwrap();
        let model = ChannelModel::new(daft, 1, 0, 0.0).unwrap();
        let mut rng = DetRng::new(5);
        let ch = model.sample(&mut rng);
        assert_eq!(ch.paths[0].delay, 0);
        assert_eq!(ch.paths[0].doppler, 0.0);
        // flat channel: H_eff is the gain times the identity
        let gain = ch.paths[0].gain;
        assert!(ch.h_eff.max_abs_diff(&CMat::identity(4).scale(gain)) < 1e-12);
    }

    #[test]
    fn noiseless_identity_channel_passes_through() {
        let daft = DaftParams::recommended(8, 1.0).unwrap();
        let ch = identity_channel(&daft);
        let mut rng = DetRng::new(8);
        let x = random_frame(8, &mut rng);
        let y = apply_channel(&x, &ch, 0.0, &mut rng).unwrap();
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn matrix_route_matches_time_domain_oracle() {
        let mut rng = DetRng::new(31);
        for &(n, paths) in &[(4usize, 2usize), (8, 3), (16, 4)] {
            let daft = DaftParams::recommended(n, 1.0).unwrap();
            let model = ChannelModel::new(daft, paths, 1, 1.0).unwrap();
            for _ in 0..10 {
                let ch = model.sample(&mut rng);
                let x = random_frame(n, &mut rng);
                let via_matrix = apply_channel(&x, &ch, 0.0, &mut rng).unwrap();
                let via_time = time_domain_oracle(&x, &ch.paths, &daft);
                for (a, b) in via_matrix.iter().zip(&via_time) {
                    assert!((a - b).norm() < 1e-10, "N = {n}, P = {paths}");
                }
            }
        }
    }

    #[test]
    fn noise_variance_matches_density() {
        let daft = DaftParams::recommended(4, 1.0).unwrap();
        let ch = identity_channel(&daft);
        let mut rng = DetRng::new(9);
        let x = vec![Complex64::new(0.0, 0.0); 4];
        let n0 = 0.35;
        let draws = 25_000; // 100k noise samples in total
        let mut total = 0.0;
        for _ in 0..draws {
            let y = apply_channel(&x, &ch, n0, &mut rng).unwrap();
            total += norm_sqr(&y);
        }
        let per_entry = total / (draws * 4) as f64;
        assert!((per_entry - n0).abs() < 0.02 * n0, "variance {per_entry}");
    }

    #[test]
    fn channel_is_linear_without_noise() {
        let daft = DaftParams::recommended(8, 1.0).unwrap();
        let model = ChannelModel::new(daft, 3, 1, 1.0).unwrap();
        let mut rng = DetRng::new(10);
        let ch = model.sample(&mut rng);
        let x1 = random_frame(8, &mut rng);
        let x2 = random_frame(8, &mut rng);
        let sum: Vec<Complex64> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
        let y1 = apply_channel(&x1, &ch, 0.0, &mut rng).unwrap();
        let y2 = apply_channel(&x2, &ch, 0.0, &mut rng).unwrap();
        let y_sum = apply_channel(&sum, &ch, 0.0, &mut rng).unwrap();
        for i in 0..8 {
            assert!((y_sum[i] - (y1[i] + y2[i])).norm() < 1e-12);
        }
    }

    #[test]
    fn average_output_energy_is_input_energy() {
        let daft = DaftParams::recommended(8, 1.0).unwrap();
        let model = ChannelModel::new(daft, 3, 1, 1.0).unwrap();
        let mut rng = DetRng::new(11);
        let x = random_frame(8, &mut rng);
        let draws = 10_000;
        let mut total = 0.0;
        for _ in 0..draws {
            let ch = model.sample(&mut rng);
            total += norm_sqr(&apply_channel(&x, &ch, 0.0, &mut rng).unwrap());
        }
        let ratio = total / draws as f64 / norm_sqr(&x);
        assert!((ratio - 1.0).abs() < 0.03, "energy ratio {ratio}");
    }
}
