//! CSV emission and parsing for sweep and bound results.
//!
//! The sweep format is the reproducibility contract: UTF-8, LF line
//! endings, a fixed header, and floats at 17 significant digits so a parse
//! recovers the exact `f64` values. Wall-clock time deliberately never
//! reaches the file.

use std::fmt::Write as _;
use std::path::Path;

use crate::bound::BoundRow;
use crate::sweep::{SnrPointRecord, SweepResult};
use crate::{Error, Result};

pub const SWEEP_HEADER: &str = "snr_db,frames,bit_errors,ber,frame_errors,seed,scheme";
pub const BOUND_HEADER: &str = "snr_db,abep_bound,geometry_draws,pair_count";

/// 17 significant digits: enough to round-trip any finite f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render a sweep as CSV text.
pub fn sweep_to_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for p in &result.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(p.snr_db),
            p.frames,
            p.bit_errors,
            fmt_f64(p.ber),
            p.frame_errors,
            result.seed,
            result.scheme,
        );
    }
    out
}

/// Write a sweep to a CSV file.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, sweep_to_csv(result))?;
    Ok(())
}

/// Parse a sweep CSV back; metadata not present in the file (config hash,
/// code version, stop rule) is left at its defaults.
pub fn parse_csv(text: &str) -> Result<SweepResult> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    if header != SWEEP_HEADER {
        return Err(Error::Parse(format!("unexpected header `{header}`")));
    }
    let mut points = Vec::new();
    let mut seed = 0u64;
    let mut scheme = String::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse(format!("line {}: expected 7 fields", lineno + 2)));
        }
        let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", lineno + 2));
        points.push(SnrPointRecord {
            snr_db: fields[0].parse().map_err(|_| bad("snr_db"))?,
            frames: fields[1].parse().map_err(|_| bad("frames"))?,
            bit_errors: fields[2].parse().map_err(|_| bad("bit_errors"))?,
            ber: fields[3].parse().map_err(|_| bad("ber"))?,
            frame_errors: fields[4].parse().map_err(|_| bad("frame_errors"))?,
            wall_time_s: 0.0,
        });
        seed = fields[5].parse().map_err(|_| bad("seed"))?;
        scheme = fields[6].to_string();
    }
    Ok(SweepResult {
        scheme,
        seed,
        points,
        config_hash: 0,
        code_version: String::new(),
        min_frame_errors: 0,
        max_frames: 0,
        channel_redraw: "per-frame",
    })
}

/// Parse a sweep CSV from a file.
pub fn parse_csv_file(path: &Path) -> Result<SweepResult> {
    parse_csv(&std::fs::read_to_string(path)?)
}

/// Render bound rows as CSV text.
pub fn bound_to_csv(rows: &[BoundRow]) -> String {
    let mut out = String::new();
    out.push_str(BOUND_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(row.snr_db),
            fmt_f64(row.abep_bound),
            row.geometry_draws,
            row.pair_count,
        );
    }
    out
}

/// Write bound rows to a CSV file.
pub fn emit_bound_csv(rows: &[BoundRow], path: &Path) -> Result<()> {
    std::fs::write(path, bound_to_csv(rows))?;
    Ok(())
}
