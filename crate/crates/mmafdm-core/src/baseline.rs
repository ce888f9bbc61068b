//! Reimplemented benchmark transmitters for fair-rate comparisons: classical
//! AFDM with a fixed constellation on every chirp, and chirp-activation
//! index modulation where only a subset of chirps carry symbols.
//!
//! Both reuse the frame-level exhaustive ML machinery: their candidate
//! spaces factor into per-chirp choices (per activation pattern for the IM
//! scheme), so the partial-residual search applies unchanged.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::codec::{bits_to_index, index_to_bits};
use crate::combin::{binomial, rank_combination, unrank_combination};
use crate::detector::{min_residual_search, SearchBest};
use crate::linalg::CMat;
use crate::modes::qam_symbol_table;
use crate::{Error, Result};

/// Classical AFDM: every chirp carries one Gray-labeled QAM symbol, no
/// index bits.
#[derive(Debug, Clone)]
pub struct ClassicalAfdm {
    n_chirps: usize,
    bits_per_symbol: usize,
    symbols: Vec<Complex64>,
}

impl ClassicalAfdm {
    pub fn new(n_chirps: usize, qam_order: usize) -> Result<Self> {
        if n_chirps == 0 {
            return Err(Error::InvalidParams("need at least one chirp"));
        }
        let symbols = qam_symbol_table(qam_order)?;
        Ok(Self {
            n_chirps,
            bits_per_symbol: qam_order.trailing_zeros() as usize,
            symbols,
        })
    }

    pub fn bits_per_frame(&self) -> usize {
        self.n_chirps * self.bits_per_symbol
    }

    pub fn spectral_efficiency(&self) -> f64 {
        self.bits_per_symbol as f64
    }

    pub fn encode(&self, bits: &[bool]) -> Result<Vec<Complex64>> {
        if bits.len() != self.bits_per_frame() {
            return Err(Error::BitLengthMismatch {
                expected: self.bits_per_frame(),
                got: bits.len(),
            });
        }
        Ok(bits
            .chunks(self.bits_per_symbol)
            .map(|chunk| self.symbols[bits_to_index(chunk) as usize])
            .collect())
    }

    /// Exhaustive ML over all `order^N` frames.
    pub fn detect(&self, y: &[Complex64], h_eff: &CMat) -> Result<(Vec<bool>, f64)> {
        let n = self.n_chirps;
        if y.len() != n || h_eff.rows() != n || h_eff.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        let per_chirp = column_symbol_products(h_eff, &self.symbols);
        let groups: Vec<&[Vec<Complex64>]> =
            per_chirp.iter().map(|g| g.as_slice()).collect();
        let mut best = SearchBest::fresh(n);
        min_residual_search(y, &groups, &mut best);
        let mut bits = Vec::with_capacity(self.bits_per_frame());
        for &value in &best.choice {
            bits.extend(index_to_bits(value as u64, self.bits_per_symbol));
        }
        Ok((bits, best.metric))
    }
}

/// Chirp-activation index modulation: `k_act` of `n` chirps carry QAM
/// symbols boosted by `sqrt(n / k_act)` (so the frame energy matches an
/// all-active scheme) and the activation pattern itself carries
/// `floor(log2 C(n, k_act))` bits via lexicographic combination unranking.
#[derive(Debug, Clone)]
pub struct ChirpActivationIm {
    n_chirps: usize,
    active_chirps: usize,
    pattern_bits: usize,
    bits_per_symbol: usize,
    symbols: Vec<Complex64>,
}

impl ChirpActivationIm {
    pub fn new(n_chirps: usize, active_chirps: usize, qam_order: usize) -> Result<Self> {
        if active_chirps == 0 || active_chirps > n_chirps {
            return Err(Error::InvalidParams("active chirps must be in 1..=N"));
        }
        let patterns = binomial(n_chirps, active_chirps);
        if patterns < 2 {
            return Err(Error::InvalidParams("activation pattern space carries no bits"));
        }
        let pattern_bits = (127 - patterns.leading_zeros()) as usize;
        let boost = libm::sqrt(n_chirps as f64 / active_chirps as f64);
        let symbols: Vec<Complex64> = qam_symbol_table(qam_order)?
            .into_iter()
            .map(|s| s * boost)
            .collect();
        Ok(Self {
            n_chirps,
            active_chirps,
            pattern_bits,
            bits_per_symbol: qam_order.trailing_zeros() as usize,
            symbols,
        })
    }

    pub fn bits_per_frame(&self) -> usize {
        self.pattern_bits + self.active_chirps * self.bits_per_symbol
    }

    pub fn spectral_efficiency(&self) -> f64 {
        self.bits_per_frame() as f64 / self.n_chirps as f64
    }

    pub fn encode(&self, bits: &[bool]) -> Result<Vec<Complex64>> {
        if bits.len() != self.bits_per_frame() {
            return Err(Error::BitLengthMismatch {
                expected: self.bits_per_frame(),
                got: bits.len(),
            });
        }
        let pattern = bits_to_index(&bits[..self.pattern_bits]);
        let active = unrank_combination(pattern as u128, self.n_chirps, self.active_chirps)?;
        let mut x = vec![Complex64::new(0.0, 0.0); self.n_chirps];
        for (slot, &chirp) in active.iter().enumerate() {
            let start = self.pattern_bits + slot * self.bits_per_symbol;
            let value = bits_to_index(&bits[start..start + self.bits_per_symbol]);
            x[chirp] = self.symbols[value as usize];
        }
        Ok(x)
    }

    pub fn decode(&self, x: &[Complex64]) -> Result<Vec<bool>> {
        if x.len() != self.n_chirps {
            return Err(Error::DimensionMismatch { expected: self.n_chirps, got: x.len() });
        }
        let active: Vec<usize> = (0..self.n_chirps)
            .filter(|&i| x[i].norm_sqr() > 1e-12)
            .collect();
        if active.len() != self.active_chirps {
            return Err(Error::InvalidState("wrong number of active chirps"));
        }
        let pattern = rank_combination(&active, self.n_chirps)? as u64;
        if pattern >= 1u64 << self.pattern_bits {
            return Err(Error::InvalidState("pattern outside the addressable space"));
        }
        let mut bits = index_to_bits(pattern, self.pattern_bits);
        for &chirp in &active {
            let value = self
                .symbols
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (x[chirp] - *a)
                        .norm_sqr()
                        .partial_cmp(&(x[chirp] - *b).norm_sqr())
                        .unwrap()
                })
                .map(|(i, _)| i)
                .unwrap();
            bits.extend(index_to_bits(value as u64, self.bits_per_symbol));
        }
        Ok(bits)
    }

    /// Exhaustive ML: outer loop over addressable activation patterns,
    /// inner partial-residual search over the active chirps' symbols.
    pub fn detect(&self, y: &[Complex64], h_eff: &CMat) -> Result<(Vec<bool>, f64)> {
        let n = self.n_chirps;
        if y.len() != n || h_eff.rows() != n || h_eff.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        let per_chirp = column_symbol_products(h_eff, &self.symbols);
        let mut best_metric = f64::INFINITY;
        let mut best_bits = Vec::new();
        for pattern in 0..1u64 << self.pattern_bits {
            let active = unrank_combination(pattern as u128, n, self.active_chirps)?;
            let groups: Vec<&[Vec<Complex64>]> =
                active.iter().map(|&chirp| per_chirp[chirp].as_slice()).collect();
            let mut best = SearchBest::fresh(self.active_chirps);
            best.metric = best_metric;
            min_residual_search(y, &groups, &mut best);
            if best.metric < best_metric {
                best_metric = best.metric;
                let mut bits = index_to_bits(pattern, self.pattern_bits);
                for &value in &best.choice {
                    bits.extend(index_to_bits(value as u64, self.bits_per_symbol));
                }
                best_bits = bits;
            }
        }
        Ok((best_bits, best_metric))
    }
}

/// `h_col[i] * s` for every chirp column and candidate symbol.
fn column_symbol_products(h_eff: &CMat, symbols: &[Complex64]) -> Vec<Vec<Vec<Complex64>>> {
    let n = h_eff.rows();
    (0..h_eff.cols())
        .map(|col| {
            symbols
                .iter()
                .map(|&s| (0..n).map(|r| h_eff[(r, col)] * s).collect())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, ChannelModel};
    use crate::linalg::norm_sqr;
    use crate::rng::DetRng;
    use crate::transform::DaftParams;

    #[test]
    fn classical_afdm_rate() {
        let afdm = ClassicalAfdm::new(4, 4).unwrap();
        assert_eq!(afdm.bits_per_frame(), 8);
        assert!((afdm.spectral_efficiency() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn chirp_activation_rate_matches_target() {
        // 4 of 8 active with 8-QAM: floor(log2 C(8,4)) + 4*3 = 6 + 12 = 18
        let im = ChirpActivationIm::new(8, 4, 8).unwrap();
        assert_eq!(im.bits_per_frame(), 18);
        assert!((im.spectral_efficiency() - 2.25).abs() < 1e-15);
    }

    #[test]
    fn chirp_activation_frame_energy() {
        // boosted symbols keep the average frame energy at N
        let im = ChirpActivationIm::new(8, 4, 8).unwrap();
        let words = 1u64 << im.bits_per_frame();
        let mut rng = DetRng::new(3);
        let mut total = 0.0;
        let draws = 200_000;
        for _ in 0..draws {
            let word = rng.below(words);
            let bits = index_to_bits(word, im.bits_per_frame());
            total += norm_sqr(&im.encode(&bits).unwrap());
        }
        let avg = total / draws as f64;
        assert!((avg - 8.0).abs() < 0.05, "avg frame energy {avg}");
    }

    #[test]
    fn chirp_activation_roundtrip() {
        let im = ChirpActivationIm::new(8, 4, 8).unwrap();
        let mut rng = DetRng::new(4);
        for _ in 0..2000 {
            let word = rng.below(1 << 18);
            let bits = index_to_bits(word, 18);
            let x = im.encode(&bits).unwrap();
            assert_eq!(im.decode(&x).unwrap(), bits);
        }
    }

    #[test]
    fn noise_free_detection_both_schemes() {
        let daft = DaftParams::recommended(4, 1.0).unwrap();
        let model = ChannelModel::new(daft, 3, 1, 1.0).unwrap();
        let afdm = ClassicalAfdm::new(4, 4).unwrap();
        let mut rng = DetRng::new(5);
        for _ in 0..200 {
            let bits = index_to_bits(rng.below(1 << 8), 8);
            let x = afdm.encode(&bits).unwrap();
            let ch = model.sample(&mut rng);
            let y = apply_channel(&x, &ch, 0.0, &mut rng).unwrap();
            let (hat, metric) = afdm.detect(&y, &ch.h_eff).unwrap();
            assert_eq!(hat, bits);
            assert!(metric < 1e-18);
        }

        let daft8 = DaftParams::recommended(8, 1.0).unwrap();
        let model8 = ChannelModel::new(daft8, 3, 1, 1.0).unwrap();
        let im = ChirpActivationIm::new(8, 4, 8).unwrap();
        for _ in 0..10 {
            let bits = index_to_bits(rng.below(1 << 18), 18);
            let x = im.encode(&bits).unwrap();
            let ch = model8.sample(&mut rng);
            let y = apply_channel(&x, &ch, 0.0, &mut rng).unwrap();
            let (hat, metric) = im.detect(&y, &ch.h_eff).unwrap();
            assert_eq!(hat, bits);
            assert!(metric < 1e-16);
        }
    }

    #[test]
    fn im_detect_matches_flat_scan_benchmark_size() {
        // the full 4-of-8, 8-QAM benchmark against a brute-force scan over
        // all 2^18 frames, on noisy observations
        let im = ChirpActivationIm::new(8, 4, 8).unwrap();
        let daft = DaftParams::recommended(8, 1.0).unwrap();
        let model = ChannelModel::new(daft, 3, 1, 1.0).unwrap();
        let mut rng = DetRng::new(17);
        for _ in 0..2 {
            let bits = index_to_bits(rng.below(1 << 18), 18);
            let x = im.encode(&bits).unwrap();
            let ch = model.sample(&mut rng);
            let y = apply_channel(&x, &ch, 0.05, &mut rng).unwrap();
            let (hat, metric) = im.detect(&y, &ch.h_eff).unwrap();

            let mut best = (Vec::new(), f64::INFINITY);
            for word in 0..1u64 << 18 {
                let cand_bits = index_to_bits(word, 18);
                let cand = im.encode(&cand_bits).unwrap();
                let hx = ch.h_eff.mul_vec(&cand).unwrap();
                let m: f64 = y.iter().zip(&hx).map(|(a, b)| (a - b).norm_sqr()).sum();
                if m < best.1 {
                    best = (cand_bits, m);
                }
            }
            assert_eq!(hat, best.0);
            assert!((metric - best.1).abs() < 1e-9 * (1.0 + best.1));
        }
    }

    #[test]
    fn im_detect_matches_flat_scan() {
        // small enough variant for a brute-force cross-check:
        // 2 of 4 active, QPSK -> 2 + 4 = 6 bits
        let im = ChirpActivationIm::new(4, 2, 4).unwrap();
        assert_eq!(im.bits_per_frame(), 6);
        let daft = DaftParams::recommended(4, 1.0).unwrap();
        let model = ChannelModel::new(daft, 2, 1, 1.0).unwrap();
        let mut rng = DetRng::new(6);
        for _ in 0..50 {
            let bits = index_to_bits(rng.below(1 << 6), 6);
            let x = im.encode(&bits).unwrap();
            let ch = model.sample(&mut rng);
            let y = apply_channel(&x, &ch, 0.3, &mut rng).unwrap();
            let (hat, metric) = im.detect(&y, &ch.h_eff).unwrap();

            let mut best = (Vec::new(), f64::INFINITY);
            for word in 0..1u64 << 6 {
                let cand_bits = index_to_bits(word, 6);
                let cand = im.encode(&cand_bits).unwrap();
                let hx = ch.h_eff.mul_vec(&cand).unwrap();
                let m: f64 = y.iter().zip(&hx).map(|(a, b)| (a - b).norm_sqr()).sum();
                if m < best.1 {
                    best = (cand_bits, m);
                }
            }
            assert_eq!(hat, best.0);
            assert!((metric - best.1).abs() < 1e-9 * (1.0 + best.1));
        }
    }
}
