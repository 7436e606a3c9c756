//! L-ary pulse position modulation with optional m-sequence spreading.
//!
//! A symbol occupies `L` slots; the slot indexed by the symbol carries the
//! pulse. Unspread, a slot is one chip of `samples_per_chip` samples at
//! `pulse_amplitude`. Spread, a slot is `2^m - 1` chips following a cyclic
//! rotation (the sequence phase) of the canonical m-sequence: `1` chips
//! at `pulse_amplitude`, `0` chips dark. The waveform is non-negative
//! without any DC bias.

use rand::Rng;

use crate::channel::SPEED_OF_LIGHT;
use crate::dsp::{cross_correlate, msequence, RealWaveform, SeedSpec};
use crate::error::{config, data, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spreading {
    pub degree: u32,
    /// Cyclic rotation of the canonical sequence, in chips.
    pub phase: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpmConfig {
    pub slots_per_symbol: usize,
    pub samples_per_chip: usize,
    pub n_symbols: usize,
    pub spreading: Option<Spreading>,
    pub pulse_amplitude: f64,
}

impl Default for PpmConfig {
    fn default() -> Self {
        Self {
            slots_per_symbol: 4,
            samples_per_chip: 4,
            n_symbols: 16,
            spreading: Some(Spreading { degree: 6, phase: 0 }),
            pulse_amplitude: 1.0,
        }
    }
}

impl PpmConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.slots_per_symbol < 2 || !self.slots_per_symbol.is_power_of_two() {
            errs.push(format!(
                "slots_per_symbol must be a power of two >= 2, got {}",
                self.slots_per_symbol
            ));
        }
        if self.samples_per_chip == 0 {
            errs.push("samples_per_chip must be >= 1".to_string());
        }
        if self.n_symbols == 0 {
            errs.push("n_symbols must be >= 1".to_string());
        }
        if !(self.pulse_amplitude > 0.0 && self.pulse_amplitude.is_finite()) {
            errs.push(format!(
                "pulse_amplitude must be > 0, got {}",
                self.pulse_amplitude
            ));
        }
        if let Some(s) = self.spreading {
            if !(2..=16).contains(&s.degree) {
                errs.push(format!("spreading degree must be in 2..=16, got {}", s.degree));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            config(errs.join("; "))
        }
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.slots_per_symbol.trailing_zeros() as usize
    }

    pub fn chips_per_slot(&self) -> usize {
        match self.spreading {
            Some(s) => (1 << s.degree) - 1,
            None => 1,
        }
    }

    pub fn slot_len(&self) -> usize {
        self.chips_per_slot() * self.samples_per_chip
    }

    pub fn symbol_len(&self) -> usize {
        self.slot_len() * self.slots_per_symbol
    }

    pub fn frame_len(&self) -> usize {
        self.symbol_len() * self.n_symbols
    }

    /// On/off chip pattern of a pulse-bearing slot.
    pub fn chip_pattern(&self) -> Result<Vec<bool>> {
        match self.spreading {
            None => Ok(vec![true]),
            Some(s) => {
                let mut seq = msequence(s.degree)?;
                let len = seq.len();
                seq.rotate_left(s.phase % len);
                Ok(seq)
            }
        }
    }
}

pub fn ppm_modulate(symbols: &[usize], cfg: &PpmConfig, sample_rate: f64) -> Result<RealWaveform> {
    cfg.validate()?;
    if symbols.len() != cfg.n_symbols {
        return data(format!(
            "expected {} symbols, got {}",
            cfg.n_symbols,
            symbols.len()
        ));
    }
    if let Some(&bad) = symbols.iter().find(|&&s| s >= cfg.slots_per_symbol) {
        return data(format!(
            "symbol {bad} out of range for {}-PPM",
            cfg.slots_per_symbol
        ));
    }
    let chips = cfg.chip_pattern()?;
    let mut y = vec![0.0; cfg.frame_len()];
    for (k, &s) in symbols.iter().enumerate() {
        let slot_start = k * cfg.symbol_len() + s * cfg.slot_len();
        for (c, &on) in chips.iter().enumerate() {
            if on {
                let start = slot_start + c * cfg.samples_per_chip;
                y[start..start + cfg.samples_per_chip].fill(cfg.pulse_amplitude);
            }
        }
    }
    RealWaveform::optical(y, sample_rate)
}

/// Per-symbol slot decisions: the slot whose correlation with the bipolar
/// chip template is largest (slot sum when unspread). Ties go to the lowest
/// slot.
pub fn ppm_demodulate(rx: &RealWaveform, cfg: &PpmConfig) -> Result<Vec<usize>> {
    cfg.validate()?;
    if rx.len() < cfg.frame_len() {
        return data(format!(
            "received {} samples, frame needs {}",
            rx.len(),
            cfg.frame_len()
        ));
    }
    let template: Vec<f64> = cfg
        .chip_pattern()?
        .iter()
        .flat_map(|&on| std::iter::repeat_n(if on { 1.0 } else { -1.0 }, cfg.samples_per_chip))
        .collect();
    let x = rx.samples();
    let out = (0..cfg.n_symbols)
        .map(|k| {
            let mut best = (0usize, f64::NEG_INFINITY);
            for slot in 0..cfg.slots_per_symbol {
                let start = k * cfg.symbol_len() + slot * cfg.slot_len();
                let stat: f64 = x[start..start + cfg.slot_len()]
                    .iter()
                    .zip(&template)
                    .map(|(a, b)| a * b)
                    .sum();
                if stat > best.1 {
                    best = (slot, stat);
                }
            }
            best.0
        })
        .collect();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TofEstimate {
    pub distance_m: f64,
    pub delay_samples: usize,
}

/// Matched filter against the transmitted frame (mean removed, so a DC
/// offset in the echo does not bias the peak).
pub fn ppm_tof_estimate(echo: &RealWaveform, tx: &RealWaveform) -> Result<TofEstimate> {
    if tx.is_empty() {
        return config("ToF template is empty");
    }
    if echo.len() < tx.len() {
        return data(format!(
            "echo of {} samples is shorter than the {}-sample template",
            echo.len(),
            tx.len()
        ));
    }
    let m = tx.mean();
    let template = RealWaveform::new(
        tx.samples().iter().map(|v| v - m).collect(),
        tx.sample_rate(),
    )?;
    let corr = cross_correlate(&echo.to_complex(), &template.to_complex())?;
    let (lag, _) = corr.peak();
    Ok(TofEstimate {
        distance_m: SPEED_OF_LIGHT * lag as f64 / (2.0 * echo.sample_rate()),
        delay_samples: lag,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    /// Sequence phase of the interferer's spreading code.
    pub phase: usize,
    /// Amplitude relative to the desired user's pulse amplitude.
    pub relative_amplitude: f64,
    /// Start offset in samples; `None` draws it uniformly over one frame.
    pub delay: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MuiSpec {
    pub interferers: Vec<Interferer>,
}

/// Adds continuously transmitting, frame-asynchronous interferers with
/// random data. Each interferer repeats its frame and is cyclically offset
/// by its delay.
pub fn inject_mui(
    rx: &RealWaveform,
    mui: &MuiSpec,
    cfg: &PpmConfig,
    seed: SeedSpec,
) -> Result<RealWaveform> {
    if let Some(bad) = mui.interferers.iter().find(|i| !(i.relative_amplitude >= 0.0)) {
        return config(format!(
            "interferer amplitude must be >= 0, got {}",
            bad.relative_amplitude
        ));
    }
    let mut y = rx.samples().to_vec();
    let mut rng = seed.rng();
    for intf in &mui.interferers {
        let icfg = PpmConfig {
            spreading: cfg.spreading.map(|s| Spreading { phase: intf.phase, ..s }),
            pulse_amplitude: cfg.pulse_amplitude,
            ..*cfg
        };
        let symbols: Vec<usize> = (0..icfg.n_symbols)
            .map(|_| rng.random_range(0..icfg.slots_per_symbol))
            .collect();
        let delay = match intf.delay {
            Some(d) => d,
            None => rng.random_range(0..icfg.frame_len()),
        };
        if intf.relative_amplitude == 0.0 {
            continue;
        }
        let frame = ppm_modulate(&symbols, &icfg, rx.sample_rate())?;
        let f = frame.samples();
        let len = f.len();
        for (n, v) in y.iter_mut().enumerate() {
            *v += intf.relative_amplitude * f[(n + len - delay % len) % len];
        }
    }
    RealWaveform::new(y, rx.sample_rate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::{lfsr_msequence, StreamRole};

    fn unspread(l: usize, sps: usize, n: usize) -> PpmConfig {
        PpmConfig {
            slots_per_symbol: l,
            samples_per_chip: sps,
            n_symbols: n,
            spreading: None,
            pulse_amplitude: 1.0,
        }
    }

    #[test]
    fn four_ppm_frame() {
        let c = PpmConfig { pulse_amplitude: 2.5, ..unspread(4, 1, 1) };
        assert_eq!(ppm_modulate(&[2], &c, 1.0).unwrap().samples(), &[0.0, 0.0, 2.5, 0.0]);
        assert_eq!(ppm_modulate(&[0], &c, 1.0).unwrap().samples(), &[2.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn spread_slot_follows_lfsr() {
        let c = PpmConfig { spreading: Some(Spreading { degree: 3, phase: 0 }), ..unspread(4, 1, 1) };
        let w = ppm_modulate(&[1], &c, 1.0).unwrap();
        let oracle = lfsr_msequence(3, &[1, 0], 0b111).unwrap();
        let slot = &w.samples()[7..14];
        for (s, &o) in slot.iter().zip(&oracle) {
            assert_eq!(*s, if o { 1.0 } else { 0.0 });
        }
        assert_eq!(slot.iter().filter(|&&v| v > 0.0).count(), 4);
        assert!(w.samples()[..7].iter().chain(&w.samples()[14..]).all(|&v| v == 0.0));
    }

    #[test]
    fn out_of_range_symbol() {
        assert!(matches!(
            ppm_modulate(&[4], &unspread(4, 1, 1), 1.0),
            Err(crate::Error::Data(_))
        ));
    }

    #[test]
    fn exhaustive_loopback_with_gain() {
        for spreading in [None, Some(Spreading { degree: 5, phase: 3 })] {
            let c = PpmConfig { spreading, ..unspread(4, 2, 4) };
            for v in 0..256usize {
                let syms: Vec<usize> = (0..4).map(|k| (v >> (2 * k)) & 3).collect();
                let w = ppm_modulate(&syms, &c, 1.0).unwrap();
                assert_eq!(ppm_demodulate(&w, &c).unwrap(), syms);
                let half = RealWaveform::new(w.samples().iter().map(|x| 0.5 * x).collect(), 1.0).unwrap();
                assert_eq!(ppm_demodulate(&half, &c).unwrap(), syms);
            }
        }
    }

    #[test]
    fn tof_on_grid() {
        let c = PpmConfig::default();
        let syms: Vec<usize> = (0..16).map(|k| (k * 3) % 4).collect();
        let tx = ppm_modulate(&syms, &c, 1e9).unwrap();
        for d in [0usize, 17] {
            let padded = tx.zero_padded(64);
            let mut echo = vec![0.0; padded.len()];
            echo[d..].copy_from_slice(&padded.samples()[..padded.len() - d]);
            let echo = RealWaveform::new(echo, 1e9).unwrap();
            let est = ppm_tof_estimate(&echo, &tx).unwrap();
            assert_eq!(est.delay_samples, d);
        }
        let short = RealWaveform::new(vec![0.0; 3], 1e9).unwrap();
        assert!(ppm_tof_estimate(&short, &tx).is_err());
    }

    #[test]
    fn zero_interference_is_identity() {
        let c = PpmConfig::default();
        let tx = ppm_modulate(&[1; 16], &c, 1e9).unwrap();
        let seed = SeedSpec::new(1, 0, 0, StreamRole::Interference);
        let y = inject_mui(&tx, &MuiSpec::default(), &c, seed).unwrap();
        assert_eq!(y.samples(), tx.samples());
        let silent = MuiSpec {
            interferers: vec![Interferer { phase: 9, relative_amplitude: 0.0, delay: None }],
        };
        let y = inject_mui(&tx, &silent, &c, seed).unwrap();
        assert_eq!(y.samples(), tx.samples());
    }

    #[test]
    fn interferer_with_other_phase_does_not_move_the_peak() {
        let c = PpmConfig { spreading: Some(Spreading { degree: 5, phase: 0 }), ..unspread(4, 1, 8) };
        let syms = [0, 1, 2, 3, 3, 2, 1, 0];
        let tx = ppm_modulate(&syms, &c, 1e9).unwrap();
        let d = 23;
        let padded = tx.zero_padded(64);
        let mut echo = vec![0.0; padded.len()];
        echo[d..].copy_from_slice(&padded.samples()[..padded.len() - d]);
        let echo = RealWaveform::new(echo, 1e9).unwrap();
        let mui = MuiSpec {
            interferers: vec![Interferer { phase: 11, relative_amplitude: 1.0, delay: Some(5) }],
        };
        let dirty = inject_mui(&echo, &mui, &c, SeedSpec::new(4, 0, 0, StreamRole::Interference)).unwrap();
        assert_eq!(ppm_tof_estimate(&dirty, &tx).unwrap().delay_samples, d);
    }
}
