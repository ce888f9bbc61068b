//! Flat key-value experiment configuration.
//!
//! One `key = value` per line, `#` starts a comment; no nesting. The file
//! is the single source of truth for an experiment apart from the `--seed`
//! and `--workers` command-line overrides.

use std::collections::BTreeMap;
use std::path::Path;

use mmafdm_core::channel::ChannelModel;
use mmafdm_core::codec::SystemParams;
use mmafdm_core::modes::{partition_psk, partition_qam, ModeSet, ParentKind};
use mmafdm_core::transform::DaftParams;

use crate::{Error, Result};

/// Transmission scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Multiple-mode index modulation over AFDM.
    MmAfdmIm,
    /// Classical AFDM, fixed constellation on every chirp.
    Afdm,
    /// Chirp-activation index modulation over AFDM.
    AfdmIm,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::MmAfdmIm => "mm_afdm_im",
            Scheme::Afdm => "afdm",
            Scheme::AfdmIm => "afdm_im",
        }
    }
}

/// Declarative description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub n_chirps: usize,
    pub subblocks: usize,
    pub num_modes: usize,
    pub active_modes: usize,
    pub points_per_mode: usize,
    pub parent: ParentKind,
    /// Post-chirp rate; `None` means the recommended value from `max_doppler`.
    pub c1: Option<f64>,
    /// Pre-chirp rate; `None` means the golden-ratio conjugate.
    pub c2: Option<f64>,
    pub paths: usize,
    pub max_delay: usize,
    pub max_doppler: f64,
    pub snr_grid_db: Vec<f64>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    pub workers: usize,
    /// Declared comparison-set spectral efficiency; runs refuse to start if
    /// the scheme cannot hit it exactly.
    pub spectral_efficiency: Option<f64>,
    /// Geometry draws for the analytical bound.
    pub geometry_draws: usize,
    /// Active chirps for the chirp-activation scheme.
    pub active_chirps: usize,
    /// QAM order for the benchmark schemes.
    pub qam_order: usize,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().to_string();
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key `{key}`")));
            }
        }
        Self::from_map(map)
    }

    fn from_map(mut map: BTreeMap<String, String>) -> Result<Self> {
        fn take(map: &mut BTreeMap<String, String>, key: &str) -> Option<String> {
            map.remove(key)
        }
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: cannot parse `{value}`")))
        }

        let scheme = match take(&mut map, "scheme").as_deref() {
            Some("mm_afdm_im") | None => Scheme::MmAfdmIm,
            Some("afdm") => Scheme::Afdm,
            Some("afdm_im") => Scheme::AfdmIm,
            Some(other) => return Err(Error::Config(format!("unknown scheme `{other}`"))),
        };

        macro_rules! field {
            ($key:literal, $default:expr) => {
                match take(&mut map, $key) {
                    Some(v) => parse($key, &v)?,
                    None => $default,
                }
            };
        }

        let n_chirps: usize = field!("n_chirps", 4);
        let subblocks: usize = field!("subblocks", 1);
        let num_modes: usize = field!("modes", 4);
        let active_modes: usize = field!("active_modes", 2);
        let points_per_mode: usize = field!("points_per_mode", 2);
        let parent = match take(&mut map, "parent").as_deref() {
            Some("qam") | None => ParentKind::Qam,
            Some("psk") => ParentKind::Psk,
            Some(other) => return Err(Error::Config(format!("unknown parent `{other}`"))),
        };
        let c1 = match take(&mut map, "c1").as_deref() {
            Some("auto") | None => None,
            Some(v) => Some(parse("c1", v)?),
        };
        let c2 = match take(&mut map, "c2").as_deref() {
            Some("golden") | None => None,
            Some(v) => Some(parse("c2", v)?),
        };
        let paths: usize = field!("paths", 3);
        let max_delay: usize = field!("max_delay", 1);
        let max_doppler: f64 = field!("max_doppler", 1.0);
        let snr_grid_db = match take(&mut map, "snr_db") {
            Some(v) => parse_snr_grid(&v)?,
            None => (0..=7).map(|i| 5.0 * i as f64).collect(),
        };
        let min_frame_errors: u64 = field!("min_frame_errors", 200);
        let max_frames: u64 = field!("max_frames", 1_000_000);
        let seed: u64 = field!("seed", 1);
        let workers: usize = field!("workers", 1);
        let spectral_efficiency = match take(&mut map, "spectral_efficiency") {
            Some(v) => Some(parse("spectral_efficiency", &v)?),
            None => None,
        };
        let geometry_draws: usize = field!("geometry_draws", 100);
        let active_chirps: usize = field!("active_chirps", 4);
        let qam_order: usize = field!("qam_order", 4);

        if let Some(key) = map.keys().next() {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }

        let cfg = Self {
            scheme,
            n_chirps,
            subblocks,
            num_modes,
            active_modes,
            points_per_mode,
            parent,
            c1,
            c2,
            paths,
            max_delay,
            max_doppler,
            snr_grid_db,
            min_frame_errors,
            max_frames,
            seed,
            workers,
            spectral_efficiency,
            geometry_draws,
            active_chirps,
            qam_order,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.snr_grid_db.is_empty() {
            return Err(Error::Config("snr grid is empty".into()));
        }
        if self.snr_grid_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("snr grid must be strictly increasing".into()));
        }
        if self.max_frames == 0 {
            return Err(Error::Config("max_frames must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn daft(&self) -> Result<DaftParams> {
        let base = DaftParams::recommended(self.n_chirps, self.max_doppler)?;
        Ok(DaftParams {
            n: self.n_chirps,
            c1: self.c1.unwrap_or(base.c1),
            c2: self.c2.unwrap_or(base.c2),
        })
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        let daft = self.daft()?;
        Ok(SystemParams::new(
            self.n_chirps,
            self.subblocks,
            self.num_modes,
            self.active_modes,
            self.points_per_mode,
            daft.c1,
            daft.c2,
        )?)
    }

    pub fn channel_model(&self) -> Result<ChannelModel> {
        Ok(ChannelModel::new(self.daft()?, self.paths, self.max_delay, self.max_doppler)?)
    }

    pub fn mode_set(&self) -> Result<ModeSet> {
        Ok(match self.parent {
            ParentKind::Qam => partition_qam(self.num_modes, self.points_per_mode)?,
            ParentKind::Psk => partition_psk(self.num_modes, self.points_per_mode)?,
        })
    }

    /// Spectral efficiency of the configured scheme, bit/s/Hz.
    pub fn scheme_spectral_efficiency(&self) -> Result<f64> {
        Ok(match self.scheme {
            Scheme::MmAfdmIm => self.system_params()?.spectral_efficiency(),
            Scheme::Afdm => {
                let afdm =
                    mmafdm_core::baseline::ClassicalAfdm::new(self.n_chirps, self.qam_order)?;
                afdm.spectral_efficiency()
            }
            Scheme::AfdmIm => {
                let im = mmafdm_core::baseline::ChirpActivationIm::new(
                    self.n_chirps,
                    self.active_chirps,
                    self.qam_order,
                )?;
                im.spectral_efficiency()
            }
        })
    }

    /// Refuse configs whose scheme cannot hit the declared comparison-set
    /// spectral efficiency exactly.
    pub fn enforce_spectral_efficiency(&self) -> Result<()> {
        if let Some(want) = self.spectral_efficiency {
            let got = self.scheme_spectral_efficiency()?;
            if (got - want).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "scheme `{}` runs at {got} bit/s/Hz, comparison set requires {want}",
                    self.scheme.name()
                )));
            }
        }
        Ok(())
    }

    /// FNV-1a hash over the semantic fields (worker count excluded: it must
    /// not affect results).
    pub fn content_hash(&self) -> u64 {
        let mut canon = format!(
            "scheme={};n={};g={};m={};k={};u={};parent={:?};c1={:?};c2={:?};p={};dmax={};amax={};",
            self.scheme.name(),
            self.n_chirps,
            self.subblocks,
            self.num_modes,
            self.active_modes,
            self.points_per_mode,
            self.parent,
            self.c1,
            self.c2,
            self.paths,
            self.max_delay,
            self.max_doppler,
        );
        canon.push_str(&format!(
            "snr={:?};mfe={};mf={};se={:?};gd={};ac={};qo={}",
            self.snr_grid_db,
            self.min_frame_errors,
            self.max_frames,
            self.spectral_efficiency,
            self.geometry_draws,
            self.active_chirps,
            self.qam_order,
        ));
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in canon.as_bytes() {
            hash ^= *byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        hash
    }
}

/// Either a comma list (`0,5,10`) or an inclusive range (`start:step:stop`).
fn parse_snr_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |msg: &str| Error::Config(format!("snr_db: {msg} (`{text}`)"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range needs start:step:stop"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
        let step: f64 = parts[1].trim().parse().map_err(|_| bad("bad step"))?;
        let stop: f64 = parts[2].trim().parse().map_err(|_| bad("bad stop"))?;
        if step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        let mut grid = Vec::new();
        let mut v = start;
        while v <= stop + 1e-9 {
            grid.push(v);
            v += step;
        }
        Ok(grid)
    } else {
        text.split(',')
            .map(|part| part.trim().parse().map_err(|_| bad("bad entry")))
            .collect()
    }
}
