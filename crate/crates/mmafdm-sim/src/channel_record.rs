//! Text serialization of channel realizations for reproducibility.
//!
//! The record stores everything needed to rebuild the effective matrices:
//! the DAFT parameters and the path triplets, plus the seed annotation of
//! the run that produced it.

use mmafdm_core::channel::{ChannelRealization, PathTriplet};
use mmafdm_core::transform::DaftParams;
use mmafdm_core::Complex64;

use crate::{Error, Result};

/// Render a channel realization as a text record.
pub fn to_text(ch: &ChannelRealization, daft: &DaftParams, seed: u64) -> String {
    let mut out = String::new();
    out.push_str("# channel realization\n");
    out.push_str(&format!("seed = {seed}\n"));
    out.push_str(&format!("n_chirps = {}\n", daft.n));
    out.push_str(&format!("c1 = {:.16e}\n", daft.c1));
    out.push_str(&format!("c2 = {:.16e}\n", daft.c2));
    out.push_str(&format!("paths = {}\n", ch.paths.len()));
    for p in &ch.paths {
        out.push_str(&format!(
            "path = {:.16e} {:.16e} {} {:.16e} {:.16e}\n",
            p.gain.re, p.gain.im, p.delay, p.doppler, p.angle
        ));
    }
    out
}

/// Parse a channel record, rebuilding the derived matrices.
pub fn from_text(text: &str) -> Result<(ChannelRealization, DaftParams, u64)> {
    let mut seed = 0u64;
    let mut n_chirps = 0usize;
    let mut c1 = f64::NAN;
    let mut c2 = f64::NAN;
    let mut declared_paths = 0usize;
    let mut paths: Vec<PathTriplet> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", lineno + 1));
        match key {
            "seed" => seed = value.parse().map_err(|_| bad("seed"))?,
            "n_chirps" => n_chirps = value.parse().map_err(|_| bad("n_chirps"))?,
            "c1" => c1 = value.parse().map_err(|_| bad("c1"))?,
            "c2" => c2 = value.parse().map_err(|_| bad("c2"))?,
            "paths" => declared_paths = value.parse().map_err(|_| bad("paths"))?,
            "path" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 5 {
                    return Err(bad("path line needs 5 fields"));
                }
                paths.push(PathTriplet {
                    gain: Complex64::new(
                        parts[0].parse().map_err(|_| bad("gain re"))?,
                        parts[1].parse().map_err(|_| bad("gain im"))?,
                    ),
                    delay: parts[2].parse().map_err(|_| bad("delay"))?,
                    doppler: parts[3].parse().map_err(|_| bad("doppler"))?,
                    angle: parts[4].parse().map_err(|_| bad("angle"))?,
                });
            }
            other => return Err(Error::Parse(format!("unknown key `{other}`"))),
        }
    }
    if paths.len() != declared_paths || paths.is_empty() {
        return Err(Error::Parse("path count mismatch".into()));
    }
    let daft = DaftParams::new(n_chirps, c1, c2)?;
    Ok((ChannelRealization::from_paths(paths, &daft), daft, seed))
}
