//! IM/DD free-space channel: line-of-sight communication path, monostatic
//! sensing path, and additive Gaussian receiver noise.

use rand_distr::{Distribution, StandardNormal};

use crate::dsp::{mean, variance, RealWaveform, SeedSpec};
use crate::error::{config, data, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Both channel paths plus the receiver front-end constants.
///
/// The sensing path gain is `aperture_gain * reflectance / distance^2`: the
/// beam lands entirely on a point target and the receive aperture is lumped
/// into `aperture_gain` (m^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub comm_gain: f64,
    pub target_distance_m: f64,
    pub reflectance: f64,
    pub aperture_gain_m2: f64,
    pub sample_rate_hz: f64,
    pub responsivity: f64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        let sample_rate_hz = 1e9;
        Self {
            comm_gain: 1.0,
            // 32-sample round trip at 1 GS/s.
            target_distance_m: distance_for_delay(32.0, sample_rate_hz),
            reflectance: 0.5,
            aperture_gain_m2: 1.0,
            sample_rate_hz,
            responsivity: 1.0,
        }
    }
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.comm_gain > 0.0 && self.comm_gain <= 1.0) {
            errs.push(format!("comm_gain must be in (0, 1], got {}", self.comm_gain));
        }
        if !(self.target_distance_m > 0.0 && self.target_distance_m.is_finite()) {
            errs.push(format!(
                "target distance must be > 0 m, got {}",
                self.target_distance_m
            ));
        }
        if !(0.0..=1.0).contains(&self.reflectance) {
            errs.push(format!("reflectance must be in [0, 1], got {}", self.reflectance));
        }
        if !(self.aperture_gain_m2 > 0.0 && self.aperture_gain_m2.is_finite()) {
            errs.push(format!(
                "aperture gain must be > 0, got {}",
                self.aperture_gain_m2
            ));
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            errs.push(format!("sample rate must be > 0, got {}", self.sample_rate_hz));
        }
        if !(self.responsivity > 0.0 && self.responsivity.is_finite()) {
            errs.push(format!("responsivity must be > 0, got {}", self.responsivity));
        }
        if errs.is_empty() {
            let hs = self.sensing_gain();
            if !(hs > 0.0) {
                errs.push("sensing gain is zero (reflectance 0)".to_string());
            } else if hs > 1.0 {
                errs.push(format!("sensing gain {hs} > 1 is unphysical"));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            config(errs.join("; "))
        }
    }

    pub fn sensing_gain(&self) -> f64 {
        self.aperture_gain_m2 * self.reflectance / (self.target_distance_m * self.target_distance_m)
    }

    pub fn round_trip_delay_s(&self) -> f64 {
        2.0 * self.target_distance_m / SPEED_OF_LIGHT
    }

    /// Round-trip delay quantized to the sample grid.
    pub fn delay_samples(&self) -> usize {
        (self.round_trip_delay_s() * self.sample_rate_hz).round() as usize
    }
}

/// Distance whose round trip lasts `delay_samples` at `sample_rate_hz`.
pub fn distance_for_delay(delay_samples: f64, sample_rate_hz: f64) -> f64 {
    SPEED_OF_LIGHT * delay_samples / (2.0 * sample_rate_hz)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SnrConvention {
    /// Signal power is the variance of the received intensity.
    #[default]
    ElectricalAc,
    /// Signal power is the squared mean received intensity, so DC bias
    /// counts as spent power.
    OpticalTotal,
}

impl SnrConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            SnrConvention::ElectricalAc => "electrical_ac",
            SnrConvention::OpticalTotal => "optical_total",
        }
    }
}

/// Additive white Gaussian noise, variance per real sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub variance: f64,
    pub convention: SnrConvention,
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self {
            variance: 0.0,
            convention: SnrConvention::ElectricalAc,
        }
    }

    pub fn new(variance: f64, convention: SnrConvention) -> Result<Self> {
        if !(variance >= 0.0 && variance.is_finite()) {
            return config(format!("noise variance must be finite and >= 0, got {variance}"));
        }
        Ok(Self {
            variance,
            convention,
        })
    }
}

fn check_optical(tx: &RealWaveform) -> Result<()> {
    if let Some(i) = tx.samples().iter().position(|v| !(*v >= 0.0)) {
        return data(format!(
            "transmit intensity must be non-negative, sample {i} is {}",
            tx.samples()[i]
        ));
    }
    Ok(())
}

fn add_noise(y: &mut [f64], noise: &NoiseSpec, seed: SeedSpec) {
    if noise.variance == 0.0 {
        return;
    }
    let sd = noise.variance.sqrt();
    let mut rng = seed.rng();
    for v in y.iter_mut() {
        let z: f64 = StandardNormal.sample(&mut rng);
        *v += sd * z;
    }
}

/// `y[n] = responsivity * h_c * tx[n] + w[n]`.
pub fn comm_propagate(
    tx: &RealWaveform,
    ch: &ChannelSpec,
    noise: &NoiseSpec,
    seed: SeedSpec,
) -> Result<RealWaveform> {
    ch.validate()?;
    check_optical(tx)?;
    let g = ch.responsivity * ch.comm_gain;
    let mut y: Vec<f64> = tx.samples().iter().map(|&v| g * v).collect();
    add_noise(&mut y, noise, seed);
    RealWaveform::new(y, tx.sample_rate())
}

/// `y[n] = responsivity * h_s * tx[n - D] + w[n]`, zero before the echo
/// arrives. The output has the same length as `tx`.
pub fn sense_propagate(
    tx: &RealWaveform,
    ch: &ChannelSpec,
    noise: &NoiseSpec,
    seed: SeedSpec,
) -> Result<RealWaveform> {
    ch.validate()?;
    check_optical(tx)?;
    let d = ch.delay_samples();
    if d >= tx.len() {
        return config(format!(
            "target beyond unambiguous range: delay {d} samples >= frame length {}",
            tx.len()
        ));
    }
    let g = ch.responsivity * ch.sensing_gain();
    let mut y = vec![0.0; tx.len()];
    for (out, &v) in y[d..].iter_mut().zip(tx.samples()) {
        *out = g * v;
    }
    add_noise(&mut y, noise, seed);
    RealWaveform::new(y, tx.sample_rate())
}

/// Noise variance that puts the receiver at `snr_db` for a path of
/// effective amplitude gain `gain`. `snr_db = +inf` gives zero noise.
pub fn noise_variance_for_snr(
    tx: &RealWaveform,
    snr_db: f64,
    convention: SnrConvention,
    gain: f64,
) -> Result<f64> {
    if snr_db.is_nan() {
        return config("snr_db is NaN");
    }
    let signal = match convention {
        SnrConvention::ElectricalAc => {
            let v = variance(tx.samples());
            if !(v > 0.0) {
                return config("ELECTRICAL_AC SNR needs a waveform with nonzero AC power");
            }
            gain * gain * v
        }
        SnrConvention::OpticalTotal => {
            let m = gain * mean(tx.samples());
            if !(m * m > 0.0) {
                return config("OPTICAL_TOTAL SNR needs a waveform with nonzero mean power");
            }
            m * m
        }
    };
    if snr_db == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(signal / 10f64.powf(snr_db / 10.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::StreamRole;

    fn seed(role: StreamRole) -> SeedSpec {
        SeedSpec::new(3, 0, 0, role)
    }

    fn ramp(n: usize) -> RealWaveform {
        RealWaveform::optical((0..n).map(|i| i as f64).collect(), 1e9).unwrap()
    }

    #[test]
    fn identity_and_half_gain() {
        let tx = ramp(16);
        let ch = ChannelSpec::default();
        let y = comm_propagate(&tx, &ch, &NoiseSpec::noiseless(), seed(StreamRole::CommNoise)).unwrap();
        assert_eq!(y.samples(), tx.samples());
        let half = ChannelSpec { comm_gain: 0.5, ..ch };
        let y = comm_propagate(&tx, &half, &NoiseSpec::noiseless(), seed(StreamRole::CommNoise)).unwrap();
        for (a, b) in y.samples().iter().zip(tx.samples()) {
            assert_eq!(*a, 0.5 * b);
        }
    }

    #[test]
    fn unit_noise_has_unit_variance() {
        let tx = RealWaveform::optical(vec![0.0; 1_000_000], 1e9).unwrap();
        let noise = NoiseSpec::new(1.0, SnrConvention::ElectricalAc).unwrap();
        let y = comm_propagate(&tx, &ChannelSpec::default(), &noise, seed(StreamRole::CommNoise)).unwrap();
        assert!((y.variance() - 1.0).abs() < 0.01);
    }

    #[test]
    fn negative_tx_rejected() {
        let tx = RealWaveform::new(vec![1.0, -1.0], 1e9).unwrap();
        assert!(comm_propagate(&tx, &ChannelSpec::default(), &NoiseSpec::noiseless(), seed(StreamRole::CommNoise)).is_err());
    }

    #[test]
    fn delay_of_one_and_a_half_metres() {
        let ch = ChannelSpec {
            target_distance_m: 1.5,
            ..ChannelSpec::default()
        };
        assert!((ch.round_trip_delay_s() - 3.0 / SPEED_OF_LIGHT).abs() < 1e-22);
        assert_eq!(ch.delay_samples(), 10);
    }

    #[test]
    fn zero_delay_unit_gain_echo_is_identity() {
        // d = 1 cm, gamma * rho / d^2 = 1.
        let ch = ChannelSpec {
            target_distance_m: 0.01,
            reflectance: 1.0,
            aperture_gain_m2: 1e-4,
            ..ChannelSpec::default()
        };
        assert_eq!(ch.delay_samples(), 0);
        let tx = ramp(8);
        let y = sense_propagate(&tx, &ch, &NoiseSpec::noiseless(), seed(StreamRole::SenseNoise)).unwrap();
        for (a, b) in y.samples().iter().zip(tx.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn echo_is_delayed_and_zero_before_arrival() {
        let ch = ChannelSpec::default();
        let d = ch.delay_samples();
        assert_eq!(d, 32);
        let tx = RealWaveform::optical(vec![1.0; 64], 1e9).unwrap();
        let y = sense_propagate(&tx, &ch, &NoiseSpec::noiseless(), seed(StreamRole::SenseNoise)).unwrap();
        assert!(y.samples()[..d].iter().all(|&v| v == 0.0));
        assert!(y.samples()[d..].iter().all(|&v| (v - ch.sensing_gain()).abs() < 1e-15));
    }

    #[test]
    fn reflectance_ratio() {
        let tx = RealWaveform::optical(vec![1.0; 64], 1e9).unwrap();
        let lo = ChannelSpec { reflectance: 0.2, ..ChannelSpec::default() };
        let hi = ChannelSpec { reflectance: 0.8, ..ChannelSpec::default() };
        let a = sense_propagate(&tx, &lo, &NoiseSpec::noiseless(), seed(StreamRole::SenseNoise)).unwrap();
        let b = sense_propagate(&tx, &hi, &NoiseSpec::noiseless(), seed(StreamRole::SenseNoise)).unwrap();
        let ratio = b.samples()[40] / a.samples()[40];
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn beyond_range_rejected() {
        let tx = RealWaveform::optical(vec![1.0; 32], 1e9).unwrap();
        let err = sense_propagate(&tx, &ChannelSpec::default(), &NoiseSpec::noiseless(), seed(StreamRole::SenseNoise));
        assert!(matches!(err, Err(crate::Error::Config(m)) if m.contains("unambiguous")));
    }

    #[test]
    fn channel_validation() {
        let bad = [
            ChannelSpec { comm_gain: 0.0, ..ChannelSpec::default() },
            ChannelSpec { comm_gain: 1.5, ..ChannelSpec::default() },
            ChannelSpec { reflectance: 1.2, ..ChannelSpec::default() },
            ChannelSpec { reflectance: 0.0, ..ChannelSpec::default() },
            ChannelSpec { target_distance_m: 0.1, ..ChannelSpec::default() },
            ChannelSpec { target_distance_m: -1.0, ..ChannelSpec::default() },
        ];
        for ch in bad {
            assert!(ch.validate().is_err(), "{ch:?}");
        }
        assert!(ChannelSpec::default().validate().is_ok());
    }

    #[test]
    fn snr_mapping() {
        // Var = 1 for +-1 around a mean of 1.
        let tx = RealWaveform::optical(vec![0.0, 2.0, 0.0, 2.0], 1.0).unwrap();
        let v = noise_variance_for_snr(&tx, 0.0, SnrConvention::ElectricalAc, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let v = noise_variance_for_snr(&tx, 20.0, SnrConvention::ElectricalAc, 1.0).unwrap();
        assert!((v - 0.01).abs() < 1e-15);
        let v = noise_variance_for_snr(&tx, 10.0, SnrConvention::OpticalTotal, 0.5).unwrap();
        assert!((v - 0.025).abs() < 1e-15);
        assert_eq!(
            noise_variance_for_snr(&tx, f64::INFINITY, SnrConvention::ElectricalAc, 1.0).unwrap(),
            0.0
        );
        let flat = RealWaveform::optical(vec![1.0; 4], 1.0).unwrap();
        assert!(noise_variance_for_snr(&flat, 0.0, SnrConvention::ElectricalAc, 1.0).is_err());
        assert!(noise_variance_for_snr(&flat, 0.0, SnrConvention::OpticalTotal, 1.0).is_ok());
    }
}
