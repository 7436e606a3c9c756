use num_complex::Complex64;

use crate::error::{config, data, Result};

/// A sampled real-valued intensity-domain signal.
///
/// Waveforms produced by a modulator after DC bias and clipping are tagged
/// optical, and every sample of an optical waveform is non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct RealWaveform {
    samples: Vec<f64>,
    sample_rate: f64,
    optical: bool,
}

impl RealWaveform {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        check_rate(sample_rate)?;
        Ok(Self {
            samples,
            sample_rate,
            optical: false,
        })
    }

    /// Builds an optical (non-negative) waveform. Fails if any sample is
    /// negative or NaN.
    pub fn optical(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        check_rate(sample_rate)?;
        if let Some(i) = samples.iter().position(|s| !(*s >= 0.0)) {
            return data(format!(
                "optical waveform sample {i} is {} (must be >= 0)",
                samples[i]
            ));
        }
        Ok(Self {
            samples,
            sample_rate,
            optical: true,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn is_optical(&self) -> bool {
        self.optical
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.samples)
    }

    /// Biased (divide-by-N) sample variance.
    pub fn variance(&self) -> f64 {
        variance(&self.samples)
    }

    /// Appends `extra` zero samples. Zero is a valid optical level, so the
    /// optical tag is preserved.
    pub fn zero_padded(&self, extra: usize) -> Self {
        let mut samples = Vec::with_capacity(self.samples.len() + extra);
        samples.extend_from_slice(&self.samples);
        samples.resize(self.samples.len() + extra, 0.0);
        Self {
            samples,
            sample_rate: self.sample_rate,
            optical: self.optical,
        }
    }

    pub fn to_complex(&self) -> ComplexFrame {
        ComplexFrame {
            samples: self.samples.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            sample_rate: self.sample_rate,
        }
    }
}

/// A block of complex baseband samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrame {
    samples: Vec<Complex64>,
    sample_rate: f64,
}

impl ComplexFrame {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Result<Self> {
        check_rate(sample_rate)?;
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Converts to a real waveform, requiring every imaginary part to be
    /// below `tol` in magnitude.
    pub fn to_real(&self, tol: f64) -> Result<RealWaveform> {
        if let Some(i) = self.samples.iter().position(|z| !(z.im.abs() < tol)) {
            return data(format!(
                "sample {i} has imaginary part {} (expected |im| < {tol})",
                self.samples[i].im
            ));
        }
        RealWaveform::new(
            self.samples.iter().map(|z| z.re).collect(),
            self.sample_rate,
        )
    }
}

fn check_rate(sample_rate: f64) -> Result<()> {
    if !(sample_rate > 0.0 && sample_rate.is_finite()) {
        return config(format!("sample_rate must be > 0, got {sample_rate}"));
    }
    Ok(())
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

pub(crate) fn variance(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64
}
