//! Analytical error-rate machinery: pairwise error probabilities through
//! the moment generating function of a Gaussian quadratic form, and the
//! union-bound average bit error probability.
//!
//! For a pairwise event `x -> x_hat` the decision statistic concentrates in
//! `delta = h^H Y h` with `Y = (Phi(x_hat) - Phi(x))^H (Phi(x_hat) - Phi(x))`
//! and `Phi(x) = [H_1 x, .., H_P x]`. Averaging the two-exponential tail
//! approximation over the Gaussian path gains turns each exponential into a
//! product over the nonzero eigenvalues of `Y`, giving a closed-form
//! unconditional pairwise error probability. Summing bit-weighted pairwise
//! terms over every ordered frame pair yields the union bound, which is
//! averaged over the random delay/Doppler geometry.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::channel::{ChannelModel, ChannelRealization, PathTriplet};
use crate::codec::SystemParams;
use crate::detector::enumerate_candidates;
use crate::linalg::{hermitian_eigenvalues, numerical_rank, CMat};
use crate::modes::ModeSet;
use crate::rng::DetRng;
use crate::{Error, Result};

/// Default cap on the frame count for pairwise enumeration (`2^10`).
pub const DEFAULT_PAIR_FRAME_BUDGET: u64 = 1 << 10;

/// Exponential-approximation rates and the geometry averaging depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConfig {
    /// Noise spectral density `N0`.
    pub noise_density: f64,
    /// Independent delay/Doppler geometry draws averaged over.
    pub geometry_draws: usize,
}

impl BoundConfig {
    pub fn new(noise_density: f64, geometry_draws: usize) -> Result<Self> {
        if noise_density <= 0.0 {
            return Err(Error::DomainError("noise density must be positive"));
        }
        if geometry_draws == 0 {
            return Err(Error::InvalidParams("need at least one geometry draw"));
        }
        Ok(Self { noise_density, geometry_draws })
    }

    /// Rate of the `1/12` exponential term, `1 / (4 N0)`.
    pub fn lambda1(&self) -> f64 {
        1.0 / (4.0 * self.noise_density)
    }

    /// Rate of the `1/4` exponential term, `1 / (3 N0)`.
    pub fn lambda2(&self) -> f64 {
        1.0 / (3.0 * self.noise_density)
    }
}

/// One pairwise error event between two frames under a fixed geometry.
#[derive(Debug, Clone)]
pub struct PairwiseEvent {
    /// `Phi(x_hat) - Phi(x)`, an N-by-P matrix.
    pub phi_diff: CMat,
    /// `(Phi(x_hat) - Phi(x))^H (Phi(x_hat) - Phi(x))`, Hermitian PSD.
    pub upsilon: CMat,
    /// Eigenvalues of `upsilon`, descending.
    pub eigenvalues: Vec<f64>,
    /// Count of eigenvalues above the rank tolerance.
    pub rank: usize,
    /// Hamming distance between the two frames' bit words.
    pub bit_errors: usize,
}

/// Build the pairwise event for `x -> x_hat` given the unit-gain per-path
/// matrices of a geometry.
pub fn pairwise_event(
    x: &[Complex64],
    x_hat: &[Complex64],
    bits_x: &[bool],
    bits_x_hat: &[bool],
    per_path: &[CMat],
) -> Result<PairwiseEvent> {
    let phi = concat_path_images(x, per_path)?;
    let phi_hat = concat_path_images(x_hat, per_path)?;
    let phi_diff = phi_hat.sub(&phi);
    let upsilon = phi_diff.hermitian().matmul(&phi_diff);
    let eigenvalues = hermitian_eigenvalues(&upsilon)?;
    let rank = numerical_rank(&eigenvalues);
    let bit_errors = bit_error_count(bits_x, bits_x_hat)?;
    Ok(PairwiseEvent { phi_diff, upsilon, eigenvalues, rank, bit_errors })
}

/// `Phi(x) = [H_1 x, .., H_P x]` as an N-by-P matrix.
pub fn concat_path_images(x: &[Complex64], per_path: &[CMat]) -> Result<CMat> {
    if per_path.is_empty() {
        return Err(Error::InvalidParams("need at least one path matrix"));
    }
    let n = per_path[0].rows();
    let mut phi = CMat::zeros(n, per_path.len());
    for (p, h) in per_path.iter().enumerate() {
        let hx = h.mul_vec(x)?;
        for (r, v) in hx.iter().enumerate() {
            phi[(r, p)] = *v;
        }
    }
    Ok(phi)
}

/// Hamming distance between equal-length bit words.
pub fn bit_error_count(a: &[bool], b: &[bool]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::BitLengthMismatch { expected: a.len(), got: b.len() });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Unconditional pairwise error probability of an event:
/// `(1/12) prod_i 1/(1 + lambda1 e_i / P) + (1/4) prod_i 1/(1 + lambda2 e_i / P)`
/// with the products over the nonzero eigenvalues.
pub fn upep(event: &PairwiseEvent, n0: f64, num_paths: usize) -> Result<f64> {
    if n0 <= 0.0 {
        return Err(Error::DomainError("noise density must be positive"));
    }
    if event.upsilon.rows() != num_paths {
        return Err(Error::DimensionMismatch { expected: num_paths, got: event.upsilon.rows() });
    }
    Ok(upep_from_eigenvalues(
        &event.eigenvalues[..event.rank],
        n0,
        num_paths,
    ))
}

pub(crate) fn upep_from_eigenvalues(eigenvalues: &[f64], n0: f64, num_paths: usize) -> f64 {
    let lambda1 = 1.0 / (4.0 * n0);
    let lambda2 = 1.0 / (3.0 * n0);
    let p = num_paths as f64;
    let mut prod1 = 1.0;
    let mut prod2 = 1.0;
    for &e in eigenvalues {
        prod1 /= 1.0 + lambda1 * e / p;
        prod2 /= 1.0 + lambda2 * e / p;
    }
    prod1 / 12.0 + prod2 / 4.0
}

/// Union bound under an explicit [`BoundConfig`].
pub fn abep_bound_with(
    sp: &SystemParams,
    ms: &ModeSet,
    model: &ChannelModel,
    cfg: &BoundConfig,
    rng: &mut DetRng,
) -> Result<f64> {
    abep_bound(sp, ms, model, cfg.noise_density, rng, cfg.geometry_draws)
}

/// Union-bound average bit error probability at one noise level, averaged
/// over `draws` independent delay/Doppler geometries (gains are integrated
/// analytically). Union bounds are not clipped and may exceed 1 at low SNR.
pub fn abep_bound(
    sp: &SystemParams,
    ms: &ModeSet,
    model: &ChannelModel,
    n0: f64,
    rng: &mut DetRng,
    draws: usize,
) -> Result<f64> {
    Ok(abep_bound_grid(sp, ms, model, &[n0], rng, draws)?[0])
}

/// Union bound evaluated on a whole noise grid with shared geometry draws,
/// so the per-SNR values are comparable point to point. Returns one bound
/// per entry of `n0_grid`.
pub fn abep_bound_grid(
    sp: &SystemParams,
    ms: &ModeSet,
    model: &ChannelModel,
    n0_grid: &[f64],
    rng: &mut DetRng,
    draws: usize,
) -> Result<Vec<f64>> {
    // BoundConfig owns the validity rules for (noise, draws) pairs
    for &n0 in n0_grid {
        BoundConfig::new(n0, draws)?;
    }
    if n0_grid.is_empty() {
        return Err(Error::InvalidParams("noise grid is empty"));
    }
    let frame_bits = sp.frame_bits();
    if frame_bits >= 64 {
        return Err(Error::InvalidParams("frame too wide for pairwise enumeration"));
    }
    let frames = 1u128 << frame_bits;
    if frames > DEFAULT_PAIR_FRAME_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            candidates: frames * (frames - 1),
            budget: (DEFAULT_PAIR_FRAME_BUDGET as u128).pow(2),
        });
    }
    let candidates: Vec<(Vec<bool>, Vec<Complex64>)> = enumerate_candidates(sp, ms).collect();
    let num_paths = model.num_paths;
    let mut acc = vec![0.0f64; n0_grid.len()];

    for _ in 0..draws {
        let geometry = sample_geometry(model, rng);
        let realization = ChannelRealization::from_paths(geometry, &model.daft);
        // Phi(x) for every candidate under this geometry
        let phis: Vec<CMat> = candidates
            .iter()
            .map(|(_, x)| concat_path_images(x, &realization.per_path))
            .collect::<Result<_>>()?;

        for i in 0..candidates.len() {
            for j in (i + 1)..candidates.len() {
                let diff = phis[j].sub(&phis[i]);
                let upsilon = diff.hermitian().matmul(&diff);
                let eigenvalues = hermitian_eigenvalues(&upsilon)?;
                let rank = numerical_rank(&eigenvalues);
                let errors =
                    bit_error_count(&candidates[i].0, &candidates[j].0)? as f64;
                if errors == 0.0 {
                    continue;
                }
                for (slot, &n0) in acc.iter_mut().zip(n0_grid) {
                    let pep = upep_from_eigenvalues(&eigenvalues[..rank], n0, num_paths);
                    // the pair contributes in both directions
                    *slot += 2.0 * pep * errors;
                }
            }
        }
    }

    let scale = 1.0 / (draws as f64 * frames as f64 * frame_bits as f64);
    Ok(acc.into_iter().map(|v| v * scale).collect())
}

/// Draw the delay/Doppler geometry of a realization with unit gains; the
/// gain statistics enter the bound analytically through the MGF.
fn sample_geometry(model: &ChannelModel, rng: &mut DetRng) -> Vec<PathTriplet> {
    let full = model.sample(rng);
    full.paths
        .into_iter()
        .map(|p| PathTriplet { gain: Complex64::new(1.0, 0.0), ..p })
        .collect()
}
