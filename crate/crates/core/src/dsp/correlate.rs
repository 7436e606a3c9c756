use num_complex::Complex64;

use super::fft::{transform_in_place, Direction};
use super::waveform::ComplexFrame;
use crate::error::{config, Result};

/// Sliding cross-correlation magnitudes over every valid lag.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    pub lags: Vec<usize>,
    pub magnitudes: Vec<f64>,
}

impl Correlation {
    /// Lag of the largest magnitude; ties go to the smallest lag.
    pub fn peak(&self) -> (usize, f64) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (&lag, &m) in self.lags.iter().zip(&self.magnitudes) {
            if m > best.1 {
                best = (lag, m);
            }
        }
        best
    }
}

// Above this many multiply-accumulates the FFT route is faster.
const DIRECT_LIMIT: usize = 1 << 16;

/// `|sum_i rx[k + i] * conj(template[i])|` for `k` in `0..=rx.len() - template.len()`.
pub fn cross_correlate(rx: &ComplexFrame, template: &ComplexFrame) -> Result<Correlation> {
    let m = template.len();
    let n = rx.len();
    if m == 0 {
        return config("cross_correlate: template is empty");
    }
    if m > n {
        return config(format!(
            "cross_correlate: template length {m} exceeds rx length {n}"
        ));
    }
    let n_lags = n - m + 1;
    let values = if n_lags * m <= DIRECT_LIMIT {
        direct(rx.samples(), template.samples(), n_lags)
    } else {
        via_fft(rx.samples(), template.samples(), n_lags)
    };
    Ok(Correlation {
        lags: (0..n_lags).collect(),
        magnitudes: values.iter().map(|z| z.norm()).collect(),
    })
}

fn direct(rx: &[Complex64], t: &[Complex64], n_lags: usize) -> Vec<Complex64> {
    (0..n_lags)
        .map(|k| {
            rx[k..k + t.len()]
                .iter()
                .zip(t)
                .map(|(a, b)| a * b.conj())
                .sum()
        })
        .collect()
}

fn via_fft(rx: &[Complex64], t: &[Complex64], n_lags: usize) -> Vec<Complex64> {
    let len = (rx.len() + t.len()).next_power_of_two();
    let mut a = rx.to_vec();
    a.resize(len, Complex64::new(0.0, 0.0));
    let mut b = t.to_vec();
    b.resize(len, Complex64::new(0.0, 0.0));
    transform_in_place(&mut a, Direction::Forward);
    transform_in_place(&mut b, Direction::Forward);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y.conj();
    }
    transform_in_place(&mut a, Direction::Inverse);
    // Two unitary forwards and one unitary inverse leave a factor 1/sqrt(len).
    let scale = (len as f64).sqrt();
    a.truncate(n_lags);
    for z in &mut a {
        *z *= scale;
    }
    a
}
