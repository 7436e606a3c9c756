//! Unitary discrete Fourier transform.
//!
//! Both directions scale by `1/sqrt(N)`, so the transform preserves energy
//! (Parseval holds without extra factors).

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::waveform::ComplexFrame;
use crate::error::{config, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unitary transform of any length. Internal helper; the public
/// [`dft`] restricts itself to powers of two.
pub(crate) fn transform_in_place(buf: &mut [Complex64], direction: Direction) {
    let n = buf.len();
    if n == 0 {
        return;
    }
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match direction {
            Direction::Forward => p.plan_fft_forward(n),
            Direction::Inverse => p.plan_fft_inverse(n),
        }
    });
    fft.process(buf);
    let scale = 1.0 / (n as f64).sqrt();
    for z in buf.iter_mut() {
        *z *= scale;
    }
}

/// Unitary DFT of a power-of-two length frame.
pub fn dft(frame: &ComplexFrame, direction: Direction) -> Result<ComplexFrame> {
    let n = frame.len();
    if n == 0 || !n.is_power_of_two() {
        return config(format!("dft length must be a power of two >= 1, got {n}"));
    }
    let mut buf = frame.samples().to_vec();
    transform_in_place(&mut buf, direction);
    ComplexFrame::new(buf, frame.sample_rate())
}
