//! Construction of disjoint constellation modes.
//!
//! A mode set partitions a parent QAM or PSK constellation into `M` disjoint
//! `U`-point sub-constellations. Two figures of merit drive the construction:
//! the minimum inter-mode distance (MIRD, between points of different modes)
//! and the minimum intra-mode distance (MIAD, within a mode). PSK parents
//! are split by phase-index interleaving; QAM parents go through an
//! exhaustive balanced-partition search that maximizes `(MIRD, MIAD)`
//! lexicographically, which is reproducible and attains the closed-form
//! distance targets for the desk-scale alphabets used here.

use alloc::vec;
use alloc::vec::Vec;
use libm::{sin, sqrt};
use num_complex::Complex64;

use crate::linalg::cis;
use crate::{Error, Result};

/// Parent constellation family a mode set was carved from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParentKind {
    Qam,
    Psk,
}

/// `M` disjoint `U`-point constellation modes with unit average energy over
/// their union.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    modes: Vec<Vec<Complex64>>,
    parent: ParentKind,
    points_per_mode: usize,
    /// Scale that maps the stored (normalized) points back to the parent's
    /// integer-grid or unit-circle coordinates.
    energy_scale: f64,
}

impl ModeSet {
    /// Validates disjointness and unit average union energy.
    pub fn new(modes: Vec<Vec<Complex64>>, parent: ParentKind, energy_scale: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParams("mode set needs at least one mode"));
        }
        let u = modes[0].len();
        if u == 0 || modes.iter().any(|m| m.len() != u) {
            return Err(Error::InvalidParams("all modes must have the same positive size"));
        }
        let union: Vec<Complex64> = modes.iter().flatten().copied().collect();
        for i in 0..union.len() {
            for j in (i + 1)..union.len() {
                if (union[i] - union[j]).norm() <= 1e-12 {
                    return Err(Error::InvalidParams("modes share a constellation point"));
                }
            }
        }
        let avg_energy: f64 =
            union.iter().map(|p| p.norm_sqr()).sum::<f64>() / union.len() as f64;
        if (avg_energy - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams("union average energy is not 1"));
        }
        Ok(Self { modes, parent, points_per_mode: u, energy_scale })
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn points_per_mode(&self) -> usize {
        self.points_per_mode
    }

    pub fn parent(&self) -> ParentKind {
        self.parent
    }

    pub fn energy_scale(&self) -> f64 {
        self.energy_scale
    }

    pub fn mode(&self, m: usize) -> &[Complex64] {
        &self.modes[m]
    }

    /// Symbol for a Gray-labeled bit value within a mode.
    #[inline]
    pub fn symbol(&self, mode: usize, value: usize) -> Complex64 {
        self.modes[mode][gray_encode(value)]
    }

    /// Bit value whose Gray label is the mode point nearest to `point`.
    pub fn value_of_nearest(&self, mode: usize, point: Complex64) -> usize {
        let idx = self.modes[mode]
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (point - *a).norm_sqr().partial_cmp(&(point - *b).norm_sqr()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        gray_decode(idx)
    }
}

#[inline]
pub(crate) fn gray_encode(v: usize) -> usize {
    v ^ (v >> 1)
}

#[inline]
pub(crate) fn gray_decode(mut g: usize) -> usize {
    let mut v = g;
    while g > 0 {
        g >>= 1;
        v ^= g;
    }
    v
}

/// Closed-form minimum inter-mode distance of interleaved PSK modes.
pub fn psk_inter_mode_distance(m: usize, u: usize) -> f64 {
    2.0 * sin(core::f64::consts::PI / (m * u) as f64)
}

/// Closed-form minimum inter-mode distance target for QAM-derived modes.
pub fn qam_inter_mode_distance(m: usize, u: usize) -> f64 {
    2.0 * sqrt(6.0) / sqrt((5 * m * u - 4) as f64)
}

/// Closed-form minimum intra-mode distance target for QAM-derived modes.
pub fn qam_intra_mode_distance(m: usize, u: usize) -> f64 {
    let mird = qam_inter_mode_distance(m, u);
    if u == 2 {
        mird * sqrt(5.0 * u as f64) / 2.0
    } else {
        mird * sqrt(u as f64)
    }
}

/// Rectangular QAM grid with odd-integer coordinates, row-major from the
/// top-left, together with the scale that normalizes average energy to 1.
pub fn rect_qam_grid(order: usize) -> Result<(Vec<Complex64>, f64)> {
    if order < 4 || !order.is_power_of_two() {
        return Err(Error::InvalidParams("QAM order must be a power of two, at least 4"));
    }
    let bits = order.trailing_zeros() as usize;
    let cols = 1usize << bits.div_ceil(2);
    let rows = 1usize << (bits / 2);
    let energy = ((cols * cols - 1) as f64 + (rows * rows - 1) as f64) / 3.0;
    let scale = sqrt(energy);
    let mut points = Vec::with_capacity(order);
    for r in 0..rows {
        let im = (rows as i64 - 1 - 2 * r as i64) as f64;
        for c in 0..cols {
            let re = (2 * c as i64 - (cols as i64 - 1)) as f64;
            points.push(Complex64::new(re / scale, im / scale));
        }
    }
    Ok((points, scale))
}

/// Gray-labeled rectangular QAM lookup table: entry `v` is the symbol whose
/// bit label is `v` (per-axis Gray coding, column bits first).
pub fn qam_symbol_table(order: usize) -> Result<Vec<Complex64>> {
    let (points, _) = rect_qam_grid(order)?;
    let bits = order.trailing_zeros() as usize;
    let col_bits = bits.div_ceil(2);
    let row_bits = bits / 2;
    let cols = 1usize << col_bits;
    let mut table = vec![Complex64::new(0.0, 0.0); order];
    for (v, slot) in table.iter_mut().enumerate() {
        let col = gray_encode(v >> row_bits);
        let row = gray_encode(v & ((1 << row_bits) - 1));
        *slot = points[row * cols + col];
    }
    Ok(table)
}

/// Partition an `M*U`-point PSK parent into `M` interleaved modes: mode `m`
/// takes the phase indices congruent to `m` modulo `M`. All points are unit
/// modulus, so no energy rescaling is needed.
pub fn partition_psk(m: usize, u: usize) -> Result<ModeSet> {
    if m < 1 || u < 1 {
        return Err(Error::InvalidParams("need at least one mode and one point"));
    }
    let total = m * u;
    let step = 2.0 * core::f64::consts::PI / total as f64;
    let modes: Vec<Vec<Complex64>> = (0..m)
        .map(|mode| (0..u).map(|i| cis(step * (mode + i * m) as f64)).collect())
        .collect();
    ModeSet::new(modes, ParentKind::Psk, 1.0)
}

/// Partition a rectangular `M*U`-QAM parent into `M` disjoint `U`-point
/// modes by exhaustive balanced-partition search, maximizing
/// `(MIRD, MIAD)` lexicographically with the smallest point-index
/// assignment as tie-break.
///
/// The search is defined for parents of at most 16 points; the construction
/// fails if it cannot attain the closed-form inter-mode distance target.
pub fn partition_qam(m: usize, u: usize) -> Result<ModeSet> {
    if m < 2 || u < 2 {
        return Err(Error::InvalidParams("QAM partition needs M >= 2 and U >= 2"));
    }
    let total = m * u;
    if total > 16 {
        return Err(Error::InvalidParams("partition search supports parents up to 16 points"));
    }
    let (points, scale) = rect_qam_grid(total)?;

    // Pairwise squared distances once; the search only ever compares these.
    let mut dist2 = vec![vec![0.0f64; total]; total];
    for i in 0..total {
        for j in 0..total {
            dist2[i][j] = (points[i] - points[j]).norm_sqr();
        }
    }

    let mut search = PartitionSearch {
        dist2: &dist2,
        num_modes: m,
        mode_size: u,
        assignment: vec![usize::MAX; total],
        counts: vec![0; total.min(m)],
        best_miad2: -1.0,
        best_assignment: None,
    };
    search.recurse(0, f64::INFINITY);
    let assignment = search.best_assignment.ok_or(Error::PartitionSearchFailed)?;

    let mut modes = vec![Vec::with_capacity(u); m];
    for (point, &mode) in assignment.iter().enumerate() {
        modes[mode].push(points[point]);
    }
    let set = ModeSet::new(modes, ParentKind::Qam, scale)?;

    // The partition must reach the closed-form inter-mode distance.
    let (_, mird) = min_distances(&set);
    if mird < qam_inter_mode_distance(m, u) - 1e-9 {
        return Err(Error::PartitionSearchFailed);
    }
    Ok(set)
}

struct PartitionSearch<'a> {
    dist2: &'a [Vec<f64>],
    num_modes: usize,
    mode_size: usize,
    assignment: Vec<usize>,
    counts: Vec<usize>,
    best_miad2: f64,
    best_assignment: Option<Vec<usize>>,
}

impl PartitionSearch<'_> {
    /// Restricted-growth enumeration: point `i` may join any non-full mode
    /// already in use or open the next fresh one, which enumerates each
    /// unordered partition exactly once, in lexicographic assignment order.
    fn recurse(&mut self, point: usize, current_min2: f64) {
        if point == self.assignment.len() {
            if current_min2 > self.best_miad2 {
                self.best_miad2 = current_min2;
                self.best_assignment = Some(self.assignment.clone());
            }
            return;
        }
        let used = self.assignment[..point].iter().copied().max().map_or(0, |m| m + 1);
        let limit = (used + 1).min(self.num_modes);
        for mode in 0..limit {
            if self.counts[mode] == self.mode_size {
                continue;
            }
            let mut new_min2 = current_min2;
            for other in 0..point {
                if self.assignment[other] == mode {
                    new_min2 = new_min2.min(self.dist2[point][other]);
                }
            }
            // a branch that cannot strictly beat the incumbent is dead
            if new_min2 <= self.best_miad2 {
                continue;
            }
            self.assignment[point] = mode;
            self.counts[mode] += 1;
            self.recurse(point + 1, new_min2);
            self.counts[mode] -= 1;
            self.assignment[point] = usize::MAX;
        }
    }
}

/// Minimum intra-mode and inter-mode Euclidean distances, by exhaustive
/// pairwise scan. Degenerate cases (single-point modes, a single mode)
/// report `+inf` for the undefined figure.
pub fn min_distances(set: &ModeSet) -> (f64, f64) {
    let mut miad = f64::INFINITY;
    let mut mird = f64::INFINITY;
    for (mi, mode) in set.modes.iter().enumerate() {
        for (i, &a) in mode.iter().enumerate() {
            for &b in &mode[i + 1..] {
                miad = miad.min((a - b).norm());
            }
        }
        for other in &set.modes[mi + 1..] {
            for &a in mode {
                for &b in other {
                    mird = mird.min((a - b).norm());
                }
            }
        }
    }
    (miad, mird)
}
