//! Monte Carlo BER sweeps with deterministic, worker-count-independent
//! accounting.
//!
//! Each trial frame owns an RNG stream addressed by `(seed, snr index,
//! frame index)`, so a frame's bits, channel and noise do not depend on
//! scheduling. Frames are processed in fixed-size chunks: workers race
//! through a chunk's indices, the integer error counts are merged (integer
//! addition commutes, so merge order is irrelevant), and the stop rule is
//! evaluated only at chunk boundaries. The processed frame set is therefore
//! a pure function of `(config, seed)`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use mmafdm_core::baseline::{ChirpActivationIm, ClassicalAfdm};
use mmafdm_core::channel::apply_channel;
use mmafdm_core::codec;
use mmafdm_core::detector::MlDetector;
use mmafdm_core::rng::DetRng;

use crate::config::{ExperimentConfig, Scheme};
use crate::{Error, Result};

/// Frames per scheduling chunk. Fixed: it is part of the deterministic
/// accounting contract and must not depend on the worker count.
const CHUNK_FRAMES: u64 = 1024;

/// Accumulated record for one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrPointRecord {
    pub snr_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    /// Not part of the CSV contract (it would break run-to-run identity).
    pub wall_time_s: f64,
}

/// Result of a full sweep plus reproducibility metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scheme: String,
    pub seed: u64,
    pub points: Vec<SnrPointRecord>,
    pub config_hash: u64,
    pub code_version: String,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    /// Channel redraw policy baked into the harness.
    pub channel_redraw: &'static str,
}

/// Per-frame simulation outcome.
struct FrameOutcome {
    bit_errors: u64,
}

/// BER sweep for the multiple-mode scheme.
pub fn run_ber_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    if cfg.scheme != Scheme::MmAfdmIm {
        return Err(Error::Config("run_ber_sweep drives the mm_afdm_im scheme".into()));
    }
    cfg.enforce_spectral_efficiency()?;
    let sp = cfg.system_params()?;
    let ms = cfg.mode_set()?;
    let model = cfg.channel_model()?;
    let detector = MlDetector::new(&ms, &sp)?;
    let frame_bits = sp.frame_bits();
    if frame_bits >= 64 {
        return Err(Error::Config("frame too wide for the bit-word draw".into()));
    }

    let sim = move |rng: &mut DetRng, n0: f64| -> FrameOutcome {
        let word = rng.next_u64() & ((1u64 << frame_bits) - 1);
        let bits = codec::index_to_bits(word, frame_bits);
        let x = codec::assemble_frame(&bits, &ms, &sp).expect("addressable word");
        let ch = model.sample(rng);
        let y = apply_channel(&x, &ch, n0, rng).expect("frame length fixed");
        let det = detector.detect(&y, &ch.h_eff, &ms).expect("dimensions fixed");
        let bit_errors = bits
            .iter()
            .zip(&det.bits_hat)
            .filter(|(a, b)| a != b)
            .count() as u64;
        FrameOutcome { bit_errors }
    };
    sweep(cfg, frame_bits as u64, &sim)
}

/// BER sweep for classical AFDM (fixed constellation, no index bits).
pub fn run_benchmark_afdm(cfg: &ExperimentConfig) -> Result<SweepResult> {
    if cfg.scheme != Scheme::Afdm {
        return Err(Error::Config("run_benchmark_afdm drives the afdm scheme".into()));
    }
    cfg.enforce_spectral_efficiency()?;
    let afdm = ClassicalAfdm::new(cfg.n_chirps, cfg.qam_order)?;
    let model = cfg.channel_model()?;
    let frame_bits = afdm.bits_per_frame();
    check_budget(cfg.qam_order, cfg.n_chirps)?;
    if frame_bits >= 64 {
        return Err(Error::Config("frame too wide for the bit-word draw".into()));
    }

    let sim = move |rng: &mut DetRng, n0: f64| -> FrameOutcome {
        let word = rng.next_u64() & ((1u64 << frame_bits) - 1);
        let bits = codec::index_to_bits(word, frame_bits);
        let x = afdm.encode(&bits).expect("word sized to the frame");
        let ch = model.sample(rng);
        let y = apply_channel(&x, &ch, n0, rng).expect("frame length fixed");
        let (hat, _) = afdm.detect(&y, &ch.h_eff).expect("dimensions fixed");
        let bit_errors =
            bits.iter().zip(&hat).filter(|(a, b)| a != b).count() as u64;
        FrameOutcome { bit_errors }
    };
    sweep(cfg, frame_bits as u64, &sim)
}

/// BER sweep for chirp-activation index modulation.
pub fn run_benchmark_afdm_im(cfg: &ExperimentConfig) -> Result<SweepResult> {
    if cfg.scheme != Scheme::AfdmIm {
        return Err(Error::Config("run_benchmark_afdm_im drives the afdm_im scheme".into()));
    }
    cfg.enforce_spectral_efficiency()?;
    let im = ChirpActivationIm::new(cfg.n_chirps, cfg.active_chirps, cfg.qam_order)?;
    let model = cfg.channel_model()?;
    let frame_bits = im.bits_per_frame();
    if frame_bits >= 64 {
        return Err(Error::Config("frame too wide for the bit-word draw".into()));
    }
    if (1u128 << frame_bits) > mmafdm_core::detector::DEFAULT_CANDIDATE_BUDGET {
        return Err(Error::Core(mmafdm_core::Error::BudgetExceeded {
            candidates: 1u128 << frame_bits,
            budget: mmafdm_core::detector::DEFAULT_CANDIDATE_BUDGET,
        }));
    }

    let sim = move |rng: &mut DetRng, n0: f64| -> FrameOutcome {
        let word = rng.next_u64() & ((1u64 << frame_bits) - 1);
        let bits = codec::index_to_bits(word, frame_bits);
        let x = im.encode(&bits).expect("word sized to the frame");
        let ch = model.sample(rng);
        let y = apply_channel(&x, &ch, n0, rng).expect("frame length fixed");
        let (hat, _) = im.detect(&y, &ch.h_eff).expect("dimensions fixed");
        let bit_errors =
            bits.iter().zip(&hat).filter(|(a, b)| a != b).count() as u64;
        FrameOutcome { bit_errors }
    };
    sweep(cfg, frame_bits as u64, &sim)
}

/// Dispatch on the configured scheme.
pub fn run(cfg: &ExperimentConfig) -> Result<SweepResult> {
    match cfg.scheme {
        Scheme::MmAfdmIm => run_ber_sweep(cfg),
        Scheme::Afdm => run_benchmark_afdm(cfg),
        Scheme::AfdmIm => run_benchmark_afdm_im(cfg),
    }
}

fn check_budget(order: usize, chirps: usize) -> Result<()> {
    let candidates = (order as u128).pow(chirps as u32);
    if candidates > mmafdm_core::detector::DEFAULT_CANDIDATE_BUDGET {
        return Err(Error::Core(mmafdm_core::Error::BudgetExceeded {
            candidates,
            budget: mmafdm_core::detector::DEFAULT_CANDIDATE_BUDGET,
        }));
    }
    Ok(())
}

fn sweep<F>(cfg: &ExperimentConfig, frame_bits: u64, sim: &F) -> Result<SweepResult>
where
    F: Fn(&mut DetRng, f64) -> FrameOutcome + Sync,
{
    let mut points = Vec::with_capacity(cfg.snr_grid_db.len());
    for (snr_index, &snr_db) in cfg.snr_grid_db.iter().enumerate() {
        let n0 = 10f64.powf(-snr_db / 10.0);
        let start = Instant::now();
        let mut frames = 0u64;
        let mut bit_errors = 0u64;
        let mut frame_errors = 0u64;

        while frame_errors < cfg.min_frame_errors && frames < cfg.max_frames {
            let chunk_end = (frames + CHUNK_FRAMES).min(cfg.max_frames);
            let cursor = AtomicU64::new(frames);
            let (chunk_bits, chunk_frame_errs) = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..cfg.workers)
                    .map(|_| {
                        scope.spawn(|| {
                            let mut local_bits = 0u64;
                            let mut local_frames = 0u64;
                            loop {
                                let frame = cursor.fetch_add(1, Ordering::Relaxed);
                                if frame >= chunk_end {
                                    break;
                                }
                                let mut rng =
                                    DetRng::from_stream(cfg.seed, snr_index as u64, frame);
                                let outcome = sim(&mut rng, n0);
                                local_bits += outcome.bit_errors;
                                local_frames += u64::from(outcome.bit_errors > 0);
                            }
                            (local_bits, local_frames)
                        })
                    })
                    .collect();
                handles.into_iter().fold((0u64, 0u64), |acc, h| {
                    let (b, f) = h.join().expect("worker panicked");
                    (acc.0 + b, acc.1 + f)
                })
            });
            bit_errors += chunk_bits;
            frame_errors += chunk_frame_errs;
            frames = chunk_end;
        }

        points.push(SnrPointRecord {
            snr_db,
            frames,
            bit_errors,
            frame_errors,
            ber: bit_errors as f64 / (frames as f64 * frame_bits as f64),
            wall_time_s: start.elapsed().as_secs_f64(),
        });
    }

    Ok(SweepResult {
        scheme: cfg.scheme.name().to_string(),
        seed: cfg.seed,
        points,
        config_hash: cfg.content_hash(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        min_frame_errors: cfg.min_frame_errors,
        max_frames: cfg.max_frames,
        channel_redraw: "per-frame",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    fn small_cfg(extra: &str) -> ExperimentConfig {
        let text = format!(
            "n_chirps = 4\nsubblocks = 1\nmodes = 4\nactive_modes = 2\npoints_per_mode = 2\n\
             paths = 3\nsnr_db = 0,10\nmin_frame_errors = 30\nmax_frames = 3000\nseed = 5\n{extra}"
        );
        ExperimentConfig::parse(&text).unwrap()
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let mut cfg = small_cfg("workers = 1\n");
        let one = run_ber_sweep(&cfg).unwrap();
        cfg.workers = 4;
        let four = run_ber_sweep(&cfg).unwrap();
        assert_eq!(one.points.len(), four.points.len());
        for (a, b) in one.points.iter().zip(&four.points) {
            assert_eq!(a.frames, b.frames);
            assert_eq!(a.bit_errors, b.bit_errors);
            assert_eq!(a.frame_errors, b.frame_errors);
        }
    }

    #[test]
    fn noise_free_point_has_zero_errors() {
        // 60 dB is effectively noise-free for this search space; exact
        // identifiability at n0 = 0 is covered by the core tests
        let text = "n_chirps = 4\nsnr_db = 60\nmin_frame_errors = 10\nmax_frames = 1024\nseed = 2\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        let result = run_ber_sweep(&cfg).unwrap();
        assert_eq!(result.points[0].bit_errors, 0);
        assert_eq!(result.points[0].frames, 1024);
    }

    #[test]
    fn stop_rule_respects_frame_cap() {
        let cfg = small_cfg("");
        let result = run_ber_sweep(&cfg).unwrap();
        for point in &result.points {
            assert!(point.frames <= cfg.max_frames);
            assert!(
                point.frame_errors >= cfg.min_frame_errors || point.frames == cfg.max_frames
            );
            let expect_ber =
                point.bit_errors as f64 / (point.frames as f64 * 9.0);
            assert!((point.ber - expect_ber).abs() < 1e-18);
            assert!(point.ber <= 1.0);
        }
    }

    #[test]
    fn scheme_dispatch_checks() {
        let cfg = small_cfg("");
        assert!(run_benchmark_afdm(&cfg).is_err());
        assert!(run_benchmark_afdm_im(&cfg).is_err());
    }

    #[test]
    fn afdm_over_identity_channel_matches_qpsk_awgn() {
        // unit-gain flat channel: H_eff = I, so the sweep reduces to QPSK
        // over AWGN with per-bit error Q(sqrt(1/N0)) at Es/N0 = 1/N0
        use mmafdm_core::baseline::ClassicalAfdm;
        use mmafdm_core::channel::{apply_channel, ChannelRealization, PathTriplet};
        use mmafdm_core::codec::index_to_bits;
        use mmafdm_core::rng::DetRng;
        use mmafdm_core::transform::DaftParams;
        use mmafdm_core::Complex64;

        let daft = DaftParams::recommended(4, 1.0).unwrap();
        let ch = ChannelRealization::from_paths(
            vec![PathTriplet {
                gain: Complex64::new(1.0, 0.0),
                delay: 0,
                doppler: 0.0,
                angle: 0.0,
            }],
            &daft,
        );
        let afdm = ClassicalAfdm::new(4, 4).unwrap();
        let n0 = 10f64.powf(-10.0 / 10.0);
        let frames = 40_000u64;
        let mut errors = 0u64;
        for frame in 0..frames {
            let mut rng = DetRng::from_stream(11, 0, frame);
            let bits = index_to_bits(rng.next_u64() & 0xff, 8);
            let x = afdm.encode(&bits).unwrap();
            let y = apply_channel(&x, &ch, n0, &mut rng).unwrap();
            let (hat, _) = afdm.detect(&y, &ch.h_eff).unwrap();
            errors += bits.iter().zip(&hat).filter(|(a, b)| a != b).count() as u64;
        }
        let got = errors as f64 / (frames as f64 * 8.0);
        let want = 0.5 * libm::erfc((1.0 / n0).sqrt() / 2.0_f64.sqrt());
        let sigma = (want * (1.0 - want) / (frames as f64 * 8.0)).sqrt();
        assert!(
            (got - want).abs() < 5.0 * sigma + 0.02 * want,
            "ber {got} vs awgn-qpsk {want}"
        );
    }

    #[test]
    fn afdm_rayleigh_flat_fading_matches_closed_form() {
        // end-to-end through the config path: one flat path with a random
        // Rayleigh gain; coherent QPSK then averages to
        // BER = 1/2 (1 - sqrt(g/(1+g))) with g = Es/N0 / 2 per bit
        let text = "scheme = afdm\nn_chirps = 4\nqam_order = 4\npaths = 1\nmax_delay = 0\n\
                    max_doppler = 0.0\nsnr_db = 10\nmin_frame_errors = 100000\n\
                    max_frames = 30000\nseed = 11\nworkers = 2\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        let result = run_benchmark_afdm(&cfg).unwrap();
        let point = &result.points[0];
        let g = 10f64.powf(10.0 / 10.0) / 2.0;
        let want = 0.5 * (1.0 - (g / (1.0 + g)).sqrt());
        let n_bits = point.frames as f64 * 8.0;
        let sigma = (want * (1.0 - want) / n_bits).sqrt();
        let got = point.ber;
        assert!(
            (got - want).abs() < 5.0 * sigma + 0.02 * want,
            "ber {got} vs rayleigh-qpsk {want}"
        );
    }
}
