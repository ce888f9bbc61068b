//! Baseband building blocks for multiple-mode index-modulated AFDM links.
//!
//! Everything in this crate is a pure function (or an immutable value) over
//! complex baseband samples: the discrete affine Fourier transform pair, mode
//! sets partitioned from QAM/PSK parents, the index-modulation codec that
//! maps bits onto mode-activation and chirp-arrangement patterns, the
//! doubly-dispersive channel in its effective matrix form, the exhaustive
//! joint ML detector, and the union-bound error analysis that goes with it.
//!
//! The crate is `no_std` (with `alloc`); all IO, configuration and the Monte
//! Carlo harness live in the companion `mmafdm-sim` crate.
//!
//! ```
//! use mmafdm_core::channel::{apply_channel, ChannelModel};
//! use mmafdm_core::codec::{assemble_frame, SystemParams};
//! use mmafdm_core::detector::ml_detect;
//! use mmafdm_core::modes::partition_qam;
//! use mmafdm_core::rng::DetRng;
//! use mmafdm_core::transform::DaftParams;
//!
//! // 4 chirps, 4 modes of 2 points each carved from 8-QAM, 2 active
//! let daft = DaftParams::recommended(4, 1.0)?;
//! let sp = SystemParams::new(4, 1, 4, 2, 2, daft.c1, daft.c2)?;
//! let ms = partition_qam(4, 2)?;
//!
//! let bits = vec![true, false, true, true, false, false, true, false, true];
//! let x = assemble_frame(&bits, &ms, &sp)?;
//!
//! let mut rng = DetRng::new(7);
//! let ch = ChannelModel::new(daft, 3, 1, 1.0)?.sample(&mut rng);
//! let y = apply_channel(&x, &ch, 0.01, &mut rng)?;
//!
//! let detected = ml_detect(&y, &ch.h_eff, &ms, &sp)?;
//! assert_eq!(detected.bits_hat, bits);
//! # Ok::<(), mmafdm_core::Error>(())
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod baseline;
pub mod channel;
pub mod codec;
pub mod combin;
pub mod detector;
pub mod error;
pub mod linalg;
pub mod modes;
pub mod qfunc;
pub mod rng;
pub mod transform;

pub use error::Error;
pub use linalg::CMat;
pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
