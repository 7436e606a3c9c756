use super::waveform::{variance, ComplexFrame, RealWaveform};
use crate::error::{config, data, Result};

/// Bookkeeping from [`dc_bias_and_clip`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClipStats {
    /// DC bias actually applied, `kappa * sigma`.
    pub bias: f64,
    /// Fraction of samples with `x + b < 0`.
    pub clipped_fraction: f64,
    /// Energy removed by clipping relative to the input AC energy.
    pub clipped_energy_fraction: f64,
}

/// Adds `b = kappa * sigma` (biased sample standard deviation) and clips at
/// zero. The result is tagged optical.
pub fn dc_bias_and_clip(x: &RealWaveform, kappa: f64) -> Result<(RealWaveform, ClipStats)> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return config(format!("bias factor must be a finite value >= 0, got {kappa}"));
    }
    if x.samples().iter().any(|v| v.is_nan()) {
        return data("dc_bias_and_clip: input contains NaN");
    }
    let n = x.len();
    let sigma = variance(x.samples()).sqrt();
    let b = kappa * sigma;
    let mut clipped = 0usize;
    let mut clipped_energy = 0.0;
    let mut ac_energy = 0.0;
    let out: Vec<f64> = x
        .samples()
        .iter()
        .map(|&v| {
            ac_energy += v * v;
            let y = v + b;
            if y < 0.0 {
                clipped += 1;
                clipped_energy += y * y;
                0.0
            } else {
                y
            }
        })
        .collect();
    let stats = ClipStats {
        bias: b,
        clipped_fraction: if n == 0 { 0.0 } else { clipped as f64 / n as f64 },
        clipped_energy_fraction: if ac_energy > 0.0 {
            clipped_energy / ac_energy
        } else {
            0.0
        },
    };
    Ok((RealWaveform::optical(out, x.sample_rate())?, stats))
}

/// Complex-input form: the frame must already be real (|im| < 1e-12).
pub fn dc_bias_and_clip_complex(
    x: &ComplexFrame,
    kappa: f64,
) -> Result<(RealWaveform, ClipStats)> {
    let real = x.to_real(1e-12)?;
    dc_bias_and_clip(&real, kappa)
}
