use num_complex::Complex64;

use super::fft::{transform_in_place, Direction};
use super::waveform::{ComplexFrame, RealWaveform};
use crate::error::{config, Result};

/// Analytic signal of a real waveform via a frequency-domain mask.
///
/// DC and Nyquist bins are kept, positive-frequency bins doubled and
/// negative-frequency bins zeroed. The mask acts on the whole frame, so the
/// result treats the input as one period of a periodic signal.
pub fn hilbert_analytic(x: &RealWaveform) -> Result<ComplexFrame> {
    let n = x.len();
    if n < 4 || n % 2 != 0 {
        return config(format!(
            "hilbert_analytic needs an even length >= 4, got {n}"
        ));
    }
    let mut buf: Vec<Complex64> = x.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_in_place(&mut buf, Direction::Forward);
    let half = n / 2;
    for z in &mut buf[1..half] {
        *z *= 2.0;
    }
    for z in &mut buf[half + 1..] {
        *z = Complex64::new(0.0, 0.0);
    }
    transform_in_place(&mut buf, Direction::Inverse);
    // The real part is the input by construction; restore it exactly.
    for (z, &v) in buf.iter_mut().zip(x.samples()) {
        z.re = v;
    }
    ComplexFrame::new(buf, x.sample_rate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_becomes_complex_exponential() {
        let n = 64;
        let f0 = 5.0;
        let x: Vec<f64> = (0..n)
            .map(|k| (2.0 * PI * f0 * k as f64 / n as f64).cos())
            .collect();
        let a = hilbert_analytic(&RealWaveform::new(x.clone(), 1.0).unwrap()).unwrap();
        for (k, z) in a.samples().iter().enumerate() {
            let want = Complex64::from_polar(1.0, 2.0 * PI * f0 * k as f64 / n as f64);
            assert!((z - want).norm() < 1e-6);
            assert_eq!(z.re, x[k]);
        }
    }

    #[test]
    fn odd_or_short_rejected() {
        assert!(hilbert_analytic(&RealWaveform::new(vec![0.0; 7], 1.0).unwrap()).is_err());
        assert!(hilbert_analytic(&RealWaveform::new(vec![0.0; 2], 1.0).unwrap()).is_err());
        assert!(hilbert_analytic(&RealWaveform::new(vec![0.0; 6], 1.0).unwrap()).is_ok());
    }
}
