//! Physical-layer simulator for optical integrated sensing and
//! communication over intensity-modulation / direct-detection links.
//!
//! Three waveform families share one IM/DD channel model:
//!
//! * [`ofdm`]: DCO-OFDM with symbol-elimination ranging,
//! * [`lfm_cpm`]: chirped continuous-phase modulation with Viterbi decoding
//!   and correlation ranging,
//! * [`ppm`]: pulse position modulation, optionally spread by m-sequences,
//!   with matched-filter time-of-flight ranging.
//!
//! [`harness`] runs Monte-Carlo BER/RMSE sweeps, the DC-bias trade-off
//! scan and the weighted-sum power allocator. [`config`] reads experiment
//! files for the command-line tool.

pub mod channel;
pub mod config;
pub mod dsp;
mod error;
pub mod harness;
pub mod lfm_cpm;
pub mod ofdm;
pub mod ppm;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};
