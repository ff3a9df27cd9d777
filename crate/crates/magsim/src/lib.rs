//! Desk-scale simulator of a Faraday-rotation atomic magnetometer embedded
//! in a Mach-Zehnder interferometer with postselected amplification.
//!
//! The chain runs: spin dynamics in the vapor cell ([`spin`]) produce a
//! transverse polarization, optics ([`optics`]) turn it into a rotation
//! angle, the interferometer ([`mzi`]) amplifies it through exit-port
//! postselection, detectors ([`detection`]) read it out under shot noise and
//! saturation, and an imperfect analyzer ([`pbs`]) bounds how small a
//! polarization ratio survives calibration. [`config`] and [`runner`] wire
//! the chain into reproducible CSV-producing commands, exposed by the
//! `magsim` binary.
//!
//! ## Runnable examples
//!
//! One example per major capability; each prints a small table:
//!
//! ```bash
//! cargo run -p magsim --example qfi_anomaly         # Fisher information of the three state families
//! cargo run -p magsim --example amplification       # theta_tilde vs theta and the >100x point
//! cargo run -p magsim --example bloch_response      # spin steady state + driven response vs phasor
//! cargo run -p magsim --example faraday_signal      # polarization -> rotation-angle time series
//! cargo run -p magsim --example shot_noise          # Monte Carlo spreads vs shot-noise formulas
//! cargo run -p magsim --example detector_saturation # clipped detectors: postselected vs bare chain
//! cargo run -p magsim --example pbs_calibration     # cross-talk error ratio vs polarization ratio
//! ```
//!
//! ## CLI
//!
//! ```bash
//! magsim <fig2a|fig2b|fig3|fig6|snr|saturation> --config <path> [--out <dir>] [--seed <u64>] [--validate]
//! ```
//!
//! Presets for every command ship in `presets/`. Outputs are CSV files with
//! 17-significant-digit numeric fields plus a JSON metadata sidecar; a fixed
//! config and seed reproduce them byte for byte.

pub mod config;
pub mod detection;
pub mod error;
pub mod mzi;
pub mod optics;
pub mod pbs;
pub mod rng;
pub mod runner;
pub mod spin;

pub use error::{Error, Result};
