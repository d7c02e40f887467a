//! Simulator and optimizer for six-dimensional movable antennas (6DMA)
//! serving a secure multiuser downlink.
//!
//! A base station carries `B` antenna surfaces, each a small planar array
//! whose 3D position and 3D rotation can both be adjusted inside a bounded
//! deployment region. The station transmits to legitimate users while
//! cooperating eavesdroppers listen. This crate models the line-of-sight
//! channel of that system, builds MMSE transmit beamformers plus a
//! null-space artificial-noise beamformer, and jointly optimizes the
//! surface poses and the power split between data and noise to maximize
//! the sum secrecy rate.
//!
//! Modules, bottom up:
//!
//! - [`geometry`]: surface poses, rotation matrices, deployment regions,
//!   and the placement constraints with their linearizations.
//! - [`channel`]: directional element gain, steering vectors, and
//!   line-of-sight channel assembly.
//! - [`secrecy`]: SINRs, user and eavesdropper rates, sum secrecy rate.
//! - [`beamform`]: MMSE beamforming, null-space artificial noise, and the
//!   power-split search.
//! - [`psca`]: the alternating optimizer with its proximal subproblem
//!   solver and finite-difference gradients.
//! - [`scenario`]: random scene generation and the movement schemes
//!   (fully movable, fixed, circular track, rotation only).
//! - [`harness`]: config parsing, single runs, parameter sweeps, CSV
//!   output.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! - `geometry_tour`: poses, rotations, constraint checks.
//! - `channel_anatomy`: one channel vector taken apart term by term.
//! - `secure_beamforming`: MMSE + artificial noise on a fixed layout.
//! - `optimize_small_scene`: a full optimizer run with its trace.
//! - `scheme_faceoff`: all four movement schemes on the same scene.
//! - `power_sweep`: a small sweep written to CSV.

pub mod beamform;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod psca;
pub mod scenario;
pub mod secrecy;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
