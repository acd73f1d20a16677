//! Link-level simulation of spatial complementary code keying (SCCKM) over
//! MIMO-OFDM, with spatial modulation (SM) as the reference scheme.
//!
//! The crate is split along the signal chain:
//!
//! - [`codebook`]: Golay pairs, CCK codebooks of length 2, 4 and 8, the
//!   4-bit subset search and distance analysis.
//! - [`ofdm`]: unitary IDFT/DFT with cyclic prefix.
//! - [`channel`]: block-fading frequency-selective Rayleigh MIMO channel
//!   and AWGN.
//! - [`modem`]: SCCKM and SM mapping, zero-forcing equalization and ML
//!   detection.
//! - [`sim`] and [`report`]: seeded Monte Carlo BER sweeps and CSV output.

pub mod channel;
pub mod codebook;
pub mod config;
pub mod error;
pub mod modem;
pub mod ofdm;
pub mod report;
pub mod sim;

pub use num_complex::Complex64;

pub use error::{Error, Result};
