//! Index-modulation codec: bit budgeting, pattern unranking, sub-block
//! encoding and the exact inverse demapping.
//!
//! Per sub-block of `n` chirps, the first `b1` bits pick a mode-activation
//! pattern (which `k` of the `M` modes are used) and a chirp-arrangement
//! pattern (how those modes are laid across the chirps) through the joint
//! index `d = i_map + n_map * i_cap`; the remaining `b2 = n log2(U)` bits
//! are Gray-mapped per chirp onto the assigned mode's points. Both pattern
//! families are addressed lexicographically, reproducing the canonical
//! lookup-table ordering without storing tables.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::combin::{
    binomial, multiset_perm_count, rank_combination, rank_multiset_perm, unrank_combination,
    unrank_multiset_perm,
};
use crate::modes::ModeSet;
use crate::{Error, Result};

/// Scalar system knobs plus the derived bit budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Chirps per frame (N).
    pub n_chirps: usize,
    /// Sub-blocks per frame (G).
    pub subblocks: usize,
    /// Chirps per sub-block (n = N / G).
    pub chirps_per_subblock: usize,
    /// Available constellation modes (M).
    pub num_modes: usize,
    /// Modes activated per sub-block (k).
    pub active_modes: usize,
    /// Points per mode (U, a power of two).
    pub points_per_mode: usize,
    /// Post-chirp DAFT rate.
    pub c1: f64,
    /// Pre-chirp DAFT rate.
    pub c2: f64,
    /// Index bits per sub-block (b1).
    pub index_bits: usize,
    /// Symbol bits per sub-block (b2 = n log2 U).
    pub symbol_bits: usize,
    /// Mode-activation pattern count.
    pub n_map: u64,
    /// Chirp-arrangement pattern count.
    pub n_cap: u64,
}

impl SystemParams {
    pub fn new(
        n_chirps: usize,
        subblocks: usize,
        num_modes: usize,
        active_modes: usize,
        points_per_mode: usize,
        c1: f64,
        c2: f64,
    ) -> Result<Self> {
        if subblocks == 0 || n_chirps == 0 || !n_chirps.is_multiple_of(subblocks) {
            return Err(Error::InvalidParams("chirp count must be a positive multiple of G"));
        }
        let n = n_chirps / subblocks;
        if !points_per_mode.is_power_of_two() || points_per_mode < 2 {
            return Err(Error::InvalidParams("points per mode must be a power of two, at least 2"));
        }
        let (n_map, n_cap, index_bits) = count_patterns(num_modes, n, active_modes)?;
        let symbol_bits = n * points_per_mode.trailing_zeros() as usize;
        Ok(Self {
            n_chirps,
            subblocks,
            chirps_per_subblock: n,
            num_modes,
            active_modes,
            points_per_mode,
            c1,
            c2,
            index_bits: index_bits as usize,
            symbol_bits,
            n_map,
            n_cap,
        })
    }

    /// Bits per sub-block (b = b1 + b2).
    pub fn subblock_bits(&self) -> usize {
        self.index_bits + self.symbol_bits
    }

    /// Bits per frame (B = G * b).
    pub fn frame_bits(&self) -> usize {
        self.subblocks * self.subblock_bits()
    }

    /// Spectral efficiency in bit/s/Hz (B / N).
    pub fn spectral_efficiency(&self) -> f64 {
        self.frame_bits() as f64 / self.n_chirps as f64
    }

    pub fn codebook(&self) -> SubBlockCodebook {
        SubBlockCodebook {
            n_map: self.n_map,
            n_cap: self.n_cap,
            index_bits: self.index_bits,
        }
    }
}

/// Counts of the two pattern families and the addressable index space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubBlockCodebook {
    pub n_map: u64,
    pub n_cap: u64,
    pub index_bits: usize,
}

impl SubBlockCodebook {
    /// Number of addressable joint patterns, `2^b1`.
    pub fn valid_index_count(&self) -> u64 {
        1u64 << self.index_bits
    }
}

/// Exact pattern counts and the index-bit budget
/// `b1 = floor(log2(C(M,k) * n! / ((n/k)!)^k))`, via integer arithmetic.
pub fn count_patterns(m: usize, n: usize, k: usize) -> Result<(u64, u64, u32)> {
    if k == 0 || k > m {
        return Err(Error::InvalidParams("need 1 <= k <= M active modes"));
    }
    if n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidParams("chirps per sub-block must be a multiple of k"));
    }
    let n_map = binomial(m, k);
    let n_cap = multiset_perm_count(k, n / k);
    let product = n_map * n_cap;
    if product == 0 {
        return Err(Error::InvalidParams("empty pattern space"));
    }
    let b1 = 127 - product.leading_zeros();
    if n_map > u64::MAX as u128 || n_cap > u64::MAX as u128 {
        return Err(Error::InvalidParams("pattern space too large"));
    }
    Ok((n_map as u64, n_cap as u64, b1))
}

/// Split the joint pattern index per `d = i_map + n_map * i_cap`.
pub fn split_index(d: u64, n_map: u64) -> (u64, u64) {
    (d % n_map, d / n_map)
}

/// The `i_map`-th mode-activation pattern: the lexicographic k-combination
/// of the mode indices `{0, .., M-1}`.
pub fn unrank_map(i_map: u64, m: usize, k: usize) -> Result<Vec<usize>> {
    unrank_combination(i_map as u128, m, k)
}

/// Rank of a strictly increasing mode-activation pattern.
pub fn rank_map(map: &[usize], m: usize) -> Result<u64> {
    Ok(rank_combination(map, m)? as u64)
}

/// The `i_cap`-th chirp-arrangement pattern: a length-`n` word over
/// `{0, .., k-1}` where entry `j` means the j-th activated mode occupies
/// that chirp; each mode appears exactly `n/k` times.
pub fn unrank_cap(i_cap: u64, n: usize, k: usize) -> Result<Vec<usize>> {
    if !n.is_multiple_of(k) {
        return Err(Error::InvalidParams("chirps per sub-block must be a multiple of k"));
    }
    unrank_multiset_perm(i_cap as u128, k, n / k)
}

/// Rank of a chirp-arrangement pattern.
pub fn rank_cap(cap: &[usize], n: usize, k: usize) -> Result<u64> {
    if !n.is_multiple_of(k) || cap.len() != n {
        return Err(Error::InvalidState("arrangement has wrong length"));
    }
    Ok(rank_multiset_perm(cap, k, n / k)? as u64)
}

/// One encoded sub-block: pattern indices, per-chirp mode assignment and
/// the transmitted symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBlockState {
    pub i_map: u64,
    pub i_cap: u64,
    /// Mode index (0-based) carried by each chirp.
    pub mode_assignment: Vec<usize>,
    pub symbols: Vec<Complex64>,
}

/// Most-significant-bit-first conversion of a bit word to its value.
pub fn bits_to_index(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

/// MSB-first bit word of `value` with the given width.
pub fn index_to_bits(value: u64, width: usize) -> Vec<bool> {
    (0..width).rev().map(|i| (value >> i) & 1 == 1).collect()
}

/// Encode one `b`-bit sub-stream into a sub-block.
pub fn encode_subblock(bits: &[bool], ms: &ModeSet, sp: &SystemParams) -> Result<SubBlockState> {
    let b = sp.subblock_bits();
    if bits.len() != b {
        return Err(Error::BitLengthMismatch { expected: b, got: bits.len() });
    }
    if ms.num_modes() != sp.num_modes || ms.points_per_mode() != sp.points_per_mode {
        return Err(Error::InvalidParams("mode set does not match system parameters"));
    }
    let d = bits_to_index(&bits[..sp.index_bits]);
    let (i_map, i_cap) = split_index(d, sp.n_map);
    let map = unrank_map(i_map, sp.num_modes, sp.active_modes)?;
    let cap = unrank_cap(i_cap, sp.chirps_per_subblock, sp.active_modes)?;
    let mode_assignment: Vec<usize> = cap.iter().map(|&j| map[j]).collect();

    let bits_per_symbol = sp.points_per_mode.trailing_zeros() as usize;
    let mut symbols = Vec::with_capacity(sp.chirps_per_subblock);
    for (chirp, &mode) in mode_assignment.iter().enumerate() {
        let start = sp.index_bits + chirp * bits_per_symbol;
        let value = bits_to_index(&bits[start..start + bits_per_symbol]) as usize;
        symbols.push(ms.symbol(mode, value));
    }
    Ok(SubBlockState { i_map, i_cap, mode_assignment, symbols })
}

/// Exact inverse of [`encode_subblock`]; validates the state's pattern
/// invariants and rejects unaddressable patterns.
pub fn decode_subblock(state: &SubBlockState, ms: &ModeSet, sp: &SystemParams) -> Result<Vec<bool>> {
    let n = sp.chirps_per_subblock;
    if state.mode_assignment.len() != n || state.symbols.len() != n {
        return Err(Error::InvalidState("sub-block has wrong chirp count"));
    }
    // recover the activation pattern: the distinct modes in ascending order
    let mut map: Vec<usize> = Vec::new();
    for &mode in &state.mode_assignment {
        if mode >= sp.num_modes {
            return Err(Error::InvalidState("mode index out of range"));
        }
        if !map.contains(&mode) {
            map.push(mode);
        }
    }
    map.sort_unstable();
    if map.len() != sp.active_modes {
        return Err(Error::InvalidState("wrong number of active modes"));
    }
    let cap: Vec<usize> = state
        .mode_assignment
        .iter()
        .map(|mode| map.iter().position(|m| m == mode).unwrap())
        .collect();
    let i_map = rank_map(&map, sp.num_modes)?;
    let i_cap = rank_cap(&cap, n, sp.active_modes)?;
    let d = i_map + sp.n_map * i_cap;
    if d >= 1u64 << sp.index_bits {
        return Err(Error::InvalidState("pattern outside the addressable index space"));
    }

    let bits_per_symbol = sp.points_per_mode.trailing_zeros() as usize;
    let mut bits = index_to_bits(d, sp.index_bits);
    for (chirp, &mode) in state.mode_assignment.iter().enumerate() {
        let value = ms.value_of_nearest(mode, state.symbols[chirp]);
        bits.extend(index_to_bits(value as u64, bits_per_symbol));
    }
    Ok(bits)
}

/// Encode a full `B`-bit stream into the per-sub-block states.
pub fn encode_frame(bits: &[bool], ms: &ModeSet, sp: &SystemParams) -> Result<Vec<SubBlockState>> {
    let total = sp.frame_bits();
    if bits.len() != total {
        return Err(Error::BitLengthMismatch { expected: total, got: bits.len() });
    }
    let b = sp.subblock_bits();
    bits.chunks(b).map(|chunk| encode_subblock(chunk, ms, sp)).collect()
}

/// Assemble the DAF-domain frame vector: the concatenation of the encoded
/// sub-blocks, in order.
pub fn assemble_frame(bits: &[bool], ms: &ModeSet, sp: &SystemParams) -> Result<Vec<Complex64>> {
    let states = encode_frame(bits, ms, sp)?;
    let mut x = Vec::with_capacity(sp.n_chirps);
    for state in &states {
        x.extend_from_slice(&state.symbols);
    }
    Ok(x)
}

/// Demap a frame's sub-block states back to the `B`-bit stream.
pub fn decode_frame(states: &[SubBlockState], ms: &ModeSet, sp: &SystemParams) -> Result<Vec<bool>> {
    if states.len() != sp.subblocks {
        return Err(Error::InvalidState("wrong number of sub-blocks"));
    }
    let mut bits = Vec::with_capacity(sp.frame_bits());
    for state in states {
        bits.extend(decode_subblock(state, ms, sp)?);
    }
    Ok(bits)
}
