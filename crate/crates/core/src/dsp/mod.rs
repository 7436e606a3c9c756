//! Signal containers and shared DSP primitives.

mod bias;
mod correlate;
mod fft;
mod hilbert;
mod lfsr;
mod rng;
mod waveform;

pub use bias::{dc_bias_and_clip, dc_bias_and_clip_complex, ClipStats};
pub use correlate::{cross_correlate, Correlation};
pub use fft::{dft, Direction};
pub use hilbert::hilbert_analytic;
pub use lfsr::{
    bipolar, lfsr_msequence, msequence, primitive_polynomial, PrimitivePolynomial,
    PRIMITIVE_POLYNOMIALS,
};
pub use rng::{SeedSpec, StreamRole};
pub use waveform::{ComplexFrame, RealWaveform};

pub(crate) use fft::transform_in_place;
pub(crate) use waveform::{mean, variance};
