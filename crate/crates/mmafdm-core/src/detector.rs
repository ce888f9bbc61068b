//! Joint maximum-likelihood detection by exhaustive candidate search.
//!
//! The detector minimizes `|| y - H_eff x ||^2` over every addressable
//! frame. Because a frame is the concatenation of sub-blocks, `H_eff x`
//! splits into per-sub-block column-block products `H_g x_g` that can be
//! precomputed once per received frame and combined with running partial
//! residuals across the Cartesian product of sub-block candidates. That
//! reuse is what makes quarter-million-candidate searches cheap enough for
//! Monte Carlo runs.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::codec::{self, SubBlockState, SystemParams};
use crate::linalg::CMat;
use crate::modes::ModeSet;
use crate::{Error, Result};

/// Default cap on the exhaustive candidate count (`2^22`).
pub const DEFAULT_CANDIDATE_BUDGET: u128 = 1 << 22;

/// Outcome of a joint ML detection.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// Detected DAF-domain frame.
    pub x_hat: Vec<Complex64>,
    /// Detected mode-activation pattern index per sub-block.
    pub i_map_hat: Vec<u64>,
    /// Detected chirp-arrangement pattern index per sub-block.
    pub i_cap_hat: Vec<u64>,
    /// Detected bit stream.
    pub bits_hat: Vec<bool>,
    /// Achieved squared residual for `x_hat`.
    pub metric: f64,
    /// Number of frame candidates examined.
    pub candidates_evaluated: u64,
}

/// Reusable detector: the candidate sub-block symbol vectors depend only on
/// the codec, so they are enumerated once and reused across received frames.
#[derive(Debug, Clone)]
pub struct MlDetector {
    params: SystemParams,
    /// Symbol vector of every addressable sub-block word, in ascending
    /// bit-word order.
    subblock_symbols: Vec<Vec<Complex64>>,
    budget: u128,
}

impl MlDetector {
    pub fn new(ms: &ModeSet, sp: &SystemParams) -> Result<Self> {
        Self::with_budget(ms, sp, DEFAULT_CANDIDATE_BUDGET)
    }

    pub fn with_budget(ms: &ModeSet, sp: &SystemParams, budget: u128) -> Result<Self> {
        let b = sp.subblock_bits();
        if b >= 64 {
            return Err(Error::InvalidParams("sub-block word too wide"));
        }
        let total: u128 = (1u128 << b).pow(sp.subblocks as u32);
        if total > budget {
            return Err(Error::BudgetExceeded { candidates: total, budget });
        }
        let words = 1u64 << b;
        let mut subblock_symbols = Vec::with_capacity(words as usize);
        for word in 0..words {
            let bits = codec::index_to_bits(word, b);
            let state = codec::encode_subblock(&bits, ms, sp)?;
            subblock_symbols.push(state.symbols);
        }
        Ok(Self { params: sp.clone(), subblock_symbols, budget })
    }

    /// Globally minimal-metric frame for the observation `y` under the
    /// channel `h_eff`; ties break toward the smallest candidate bit word.
    pub fn detect(&self, y: &[Complex64], h_eff: &CMat, ms: &ModeSet) -> Result<DetectionResult> {
        let sp = &self.params;
        let n = sp.n_chirps;
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        if h_eff.rows() != n || h_eff.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: h_eff.rows() });
        }

        // per-sub-block partial products v = H_g x_g for every candidate
        let nsub = sp.chirps_per_subblock;
        let groups: Vec<Vec<Vec<Complex64>>> = (0..sp.subblocks)
            .map(|g| {
                self.subblock_symbols
                    .iter()
                    .map(|symbols| {
                        let mut v = vec![Complex64::new(0.0, 0.0); n];
                        for (j, &s) in symbols.iter().enumerate() {
                            let col = g * nsub + j;
                            for (r, out) in v.iter_mut().enumerate() {
                                *out += h_eff[(r, col)] * s;
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let group_refs: Vec<&[Vec<Complex64>]> = groups.iter().map(|g| g.as_slice()).collect();

        let mut best = SearchBest::fresh(sp.subblocks);
        min_residual_search(y, &group_refs, &mut best);
        let choice = best.choice.clone();

        // reassemble the winning frame and its codec view
        let b = sp.subblock_bits();
        let mut bits_hat = Vec::with_capacity(sp.frame_bits());
        let mut x_hat = Vec::with_capacity(n);
        let mut i_map_hat = Vec::with_capacity(sp.subblocks);
        let mut i_cap_hat = Vec::with_capacity(sp.subblocks);
        for &word in &choice {
            let bits = codec::index_to_bits(word as u64, b);
            let state: SubBlockState = codec::encode_subblock(&bits, ms, sp)?;
            bits_hat.extend_from_slice(&bits);
            x_hat.extend_from_slice(&state.symbols);
            i_map_hat.push(state.i_map);
            i_cap_hat.push(state.i_cap);
        }
        Ok(DetectionResult {
            x_hat,
            i_map_hat,
            i_cap_hat,
            bits_hat,
            metric: best.metric,
            candidates_evaluated: best.leaves,
        })
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }
}

/// One-shot convenience wrapper around [`MlDetector`].
pub fn ml_detect(
    y: &[Complex64],
    h_eff: &CMat,
    ms: &ModeSet,
    sp: &SystemParams,
) -> Result<DetectionResult> {
    MlDetector::new(ms, sp)?.detect(y, h_eff, ms)
}

/// Running best over the candidate tree.
#[derive(Debug, Clone)]
pub(crate) struct SearchBest {
    pub metric: f64,
    pub choice: Vec<usize>,
    pub leaves: u64,
}

impl SearchBest {
    pub fn fresh(levels: usize) -> Self {
        Self { metric: f64::INFINITY, choice: vec![0; levels], leaves: 0 }
    }
}

/// Minimize `|| y - sum_g v_g ||^2` over one vector choice per group, with
/// strict-improvement updates so the first minimum in enumeration order
/// (ascending per level, leftmost level most significant) wins ties.
pub(crate) fn min_residual_search(
    y: &[Complex64],
    groups: &[&[Vec<Complex64>]],
    best: &mut SearchBest,
) {
    debug_assert_eq!(groups.len(), best.choice.len());
    let mut prefix = vec![0usize; groups.len()];
    descend(y, groups, 0, &mut prefix, best);
}

fn descend(
    residual: &[Complex64],
    groups: &[&[Vec<Complex64>]],
    level: usize,
    prefix: &mut [usize],
    best: &mut SearchBest,
) {
    if level + 1 == groups.len() {
        for (c, v) in groups[level].iter().enumerate() {
            let mut metric = 0.0;
            for (r, a) in residual.iter().zip(v) {
                metric += (r - a).norm_sqr();
            }
            best.leaves += 1;
            if metric < best.metric {
                best.metric = metric;
                best.choice[..level].copy_from_slice(&prefix[..level]);
                best.choice[level] = c;
            }
        }
        return;
    }
    let mut next = vec![Complex64::new(0.0, 0.0); residual.len()];
    for (c, v) in groups[level].iter().enumerate() {
        for ((n, r), a) in next.iter_mut().zip(residual).zip(v) {
            *n = r - a;
        }
        prefix[level] = c;
        descend(&next, groups, level + 1, prefix, best);
    }
}

/// Lazily enumerate every addressable frame as `(bits, x)`, in ascending
/// bit-word order.
pub fn enumerate_candidates<'a>(
    sp: &'a SystemParams,
    ms: &'a ModeSet,
) -> impl Iterator<Item = (Vec<bool>, Vec<Complex64>)> + 'a {
    let total: u64 = 1u64 << sp.frame_bits();
    (0..total).map(move |word| {
        let bits = codec::index_to_bits(word, sp.frame_bits());
        let x = codec::assemble_frame(&bits, ms, sp)
            .expect("enumerated word is addressable by construction");
        (bits, x)
    })
}
