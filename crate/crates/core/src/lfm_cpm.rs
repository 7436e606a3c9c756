//! Constant-modulus LFM-CPM transceiver.
//!
//! Binary full-response CPM (1REC pulse, rational modulation index `h`)
//! rides on a linear chirp. The complex baseband is
//! `s[n] = exp(j (pi mu t^2 + phi[n]))` with `t = n / fs`, where `phi`
//! advances by `pi h a_k` across symbol `k` (`a_k` in `{-1, +1}`). The
//! real passband at `f_if` is DC-biased and drives the laser.
//!
//! The receiver recovers the baseband with a Hilbert transform and
//! down-conversion. Communication removes the chirp, then runs a Viterbi
//! search over the `2 * den` phase states of `h = num/den`. Sensing
//! correlates against the full transmitted baseband.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::SPEED_OF_LIGHT;
use crate::dsp::{
    cross_correlate, dc_bias_and_clip, hilbert_analytic, ClipStats, ComplexFrame, RealWaveform,
};
use crate::error::{config, data, Result};

/// Modulation index as a reduced fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModIndex {
    pub num: u32,
    pub den: u32,
}

impl ModIndex {
    pub const HALF: ModIndex = ModIndex { num: 1, den: 2 };

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfmCpmConfig {
    pub samples_per_symbol: usize,
    pub n_symbols: usize,
    pub mod_index: ModIndex,
    /// Chirp rate `mu` in Hz/s.
    pub chirp_rate_hz_per_s: f64,
    pub intermediate_freq_hz: f64,
    pub sample_rate_hz: f64,
    pub bias_factor: f64,
}

impl LfmCpmConfig {
    /// Q = 8, h = 1/2, f_if = fs/8, chirp sweeping fs/4 over the frame,
    /// kappa = 1.5.
    pub fn with_defaults(n_symbols: usize, sample_rate_hz: f64) -> Self {
        let q = 8;
        let t_frame = (n_symbols * q) as f64 / sample_rate_hz;
        Self {
            samples_per_symbol: q,
            n_symbols,
            mod_index: ModIndex::HALF,
            chirp_rate_hz_per_s: sample_rate_hz / 4.0 / t_frame,
            intermediate_freq_hz: sample_rate_hz / 8.0,
            sample_rate_hz,
            bias_factor: 1.5,
        }
    }

    pub fn frame_len(&self) -> usize {
        self.samples_per_symbol * self.n_symbols
    }

    pub fn frame_duration_s(&self) -> f64 {
        self.frame_len() as f64 / self.sample_rate_hz
    }

    /// Peak CPM frequency deviation, `h / (2 T_sym)`.
    pub fn cpm_deviation_hz(&self) -> f64 {
        self.mod_index.value() * self.sample_rate_hz / (2.0 * self.samples_per_symbol as f64)
    }

    pub fn chirp_excursion_hz(&self) -> f64 {
        self.chirp_rate_hz_per_s * self.frame_duration_s()
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.samples_per_symbol < 4 {
            errs.push(format!(
                "samples_per_symbol must be >= 4, got {}",
                self.samples_per_symbol
            ));
        }
        if self.n_symbols == 0 {
            errs.push("n_symbols must be >= 1".to_string());
        }
        let h = self.mod_index;
        if h.num == 0 || h.den == 0 || gcd(h.num, h.den) != 1 {
            errs.push(format!(
                "mod_index must be a reduced positive fraction, got {}/{}",
                h.num, h.den
            ));
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            errs.push(format!("sample rate must be > 0, got {}", self.sample_rate_hz));
        }
        if !(self.bias_factor >= 0.0 && self.bias_factor.is_finite()) {
            errs.push(format!("bias_factor must be >= 0, got {}", self.bias_factor));
        }
        if !self.chirp_rate_hz_per_s.is_finite() || !self.intermediate_freq_hz.is_finite() {
            errs.push("chirp rate and intermediate frequency must be finite".to_string());
        }
        if errs.is_empty() {
            let sweep = self.chirp_excursion_hz();
            let dev = self.cpm_deviation_hz();
            let hi = self.intermediate_freq_hz + sweep.max(0.0) + dev;
            let lo = self.intermediate_freq_hz + sweep.min(0.0) - dev;
            if hi >= self.sample_rate_hz / 2.0 {
                errs.push(format!(
                    "passband reaches {hi} Hz, at or above Nyquist {} Hz",
                    self.sample_rate_hz / 2.0
                ));
            }
            if lo <= 0.0 {
                errs.push(format!("passband reaches down to {lo} Hz (must stay > 0)"));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            config(errs.join("; "))
        }
    }

    fn chirp_phase(&self, n: usize) -> f64 {
        let t = n as f64 / self.sample_rate_hz;
        PI * self.chirp_rate_hz_per_s * t * t
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn symbol(bit: bool) -> f64 {
    if bit {
        1.0
    } else {
        -1.0
    }
}

/// CPM phase trajectory without the chirp.
fn cpm_phase(bits: &[bool], cfg: &LfmCpmConfig) -> Vec<f64> {
    let q = cfg.samples_per_symbol;
    let step = PI * cfg.mod_index.value();
    let mut out = Vec::with_capacity(bits.len() * q);
    let mut acc = 0.0;
    for &b in bits {
        let a = symbol(b);
        for m in 0..q {
            out.push(acc + step * a * m as f64 / q as f64);
        }
        acc += step * a;
    }
    out
}

pub fn lfm_cpm_baseband(bits: &[bool], cfg: &LfmCpmConfig) -> Result<ComplexFrame> {
    cfg.validate()?;
    if bits.len() != cfg.n_symbols {
        return data(format!(
            "expected {} bits, got {}",
            cfg.n_symbols,
            bits.len()
        ));
    }
    let s = cpm_phase(bits, cfg)
        .into_iter()
        .enumerate()
        .map(|(n, phi)| Complex64::from_polar(1.0, cfg.chirp_phase(n) + phi))
        .collect();
    ComplexFrame::new(s, cfg.sample_rate_hz)
}

#[derive(Debug, Clone)]
pub struct LfmCpmFrame {
    pub optical: RealWaveform,
    /// Complex baseband, kept by the monostatic sensing receiver.
    pub reference: ComplexFrame,
    pub clip: ClipStats,
}

pub fn lfm_cpm_transmit(bits: &[bool], cfg: &LfmCpmConfig) -> Result<LfmCpmFrame> {
    let reference = lfm_cpm_baseband(bits, cfg)?;
    let w = 2.0 * PI * cfg.intermediate_freq_hz / cfg.sample_rate_hz;
    let passband: Vec<f64> = reference
        .samples()
        .iter()
        .enumerate()
        .map(|(n, s)| (s * Complex64::from_polar(1.0, w * n as f64)).re)
        .collect();
    let (optical, clip) =
        dc_bias_and_clip(&RealWaveform::new(passband, cfg.sample_rate_hz)?, cfg.bias_factor)?;
    Ok(LfmCpmFrame {
        optical,
        reference,
        clip,
    })
}

/// Mean removal, analytic signal, down-conversion from `f_if`.
pub fn lfm_cpm_front_end(rx: &RealWaveform, cfg: &LfmCpmConfig) -> Result<ComplexFrame> {
    cfg.validate()?;
    if rx.len() % 2 != 0 || rx.len() < 4 {
        return data(format!(
            "front end needs an even record of >= 4 samples, got {}",
            rx.len()
        ));
    }
    let m = rx.mean();
    let centred = RealWaveform::new(
        rx.samples().iter().map(|v| v - m).collect(),
        rx.sample_rate(),
    )?;
    let analytic = hilbert_analytic(&centred)?;
    let w = -2.0 * PI * cfg.intermediate_freq_hz / cfg.sample_rate_hz;
    let bb = analytic
        .samples()
        .iter()
        .enumerate()
        .map(|(n, z)| z * Complex64::from_polar(1.0, w * n as f64))
        .collect();
    ComplexFrame::new(bb, rx.sample_rate())
}

/// Phase-state trellis of binary full-response CPM.
///
/// State `p` is the accumulated phase `p * pi / den`. Input index 0 is
/// `a = -1`, index 1 is `a = +1`.
#[derive(Debug, Clone)]
pub struct CpmTrellis {
    pub n_states: usize,
    pub next_state: Vec<[usize; 2]>,
    /// `refs[p][i]` is the sample waveform of the transition from state `p`
    /// on input `i`.
    pub refs: Vec<[Vec<Complex64>; 2]>,
}

impl CpmTrellis {
    pub fn new(mod_index: ModIndex, samples_per_symbol: usize) -> Self {
        let n_states = 2 * mod_index.den as usize;
        let num = mod_index.num as usize;
        let h = mod_index.value();
        let q = samples_per_symbol;
        let mut next_state = Vec::with_capacity(n_states);
        let mut refs = Vec::with_capacity(n_states);
        for p in 0..n_states {
            next_state.push([(p + n_states - num % n_states) % n_states, (p + num) % n_states]);
            let base = PI * p as f64 / mod_index.den as f64;
            let wave = |a: f64| -> Vec<Complex64> {
                (0..q)
                    .map(|m| Complex64::from_polar(1.0, base + PI * h * a * m as f64 / q as f64))
                    .collect()
            };
            refs.push([wave(-1.0), wave(1.0)]);
        }
        Self {
            n_states,
            next_state,
            refs,
        }
    }

    /// Maximum-likelihood path by correlation metric, starting from state 0
    /// with full-frame traceback.
    pub fn decode(&self, rx: &[Complex64], samples_per_symbol: usize) -> Vec<bool> {
        let q = samples_per_symbol;
        let n_sym = rx.len() / q;
        let mut metric = vec![f64::NEG_INFINITY; self.n_states];
        metric[0] = 0.0;
        // (previous state, input) for every (symbol, state).
        let mut back = vec![(0usize, false); n_sym * self.n_states];
        let mut next = vec![f64::NEG_INFINITY; self.n_states];
        for k in 0..n_sym {
            let chunk = &rx[k * q..(k + 1) * q];
            next.fill(f64::NEG_INFINITY);
            for p in 0..self.n_states {
                if metric[p] == f64::NEG_INFINITY {
                    continue;
                }
                for input in 0..2 {
                    let corr: f64 = chunk
                        .iter()
                        .zip(&self.refs[p][input])
                        .map(|(r, s)| (r * s.conj()).re)
                        .sum();
                    let cand = metric[p] + corr;
                    let ns = self.next_state[p][input];
                    if cand > next[ns] {
                        next[ns] = cand;
                        back[k * self.n_states + ns] = (p, input == 1);
                    }
                }
            }
            std::mem::swap(&mut metric, &mut next);
        }
        let mut state = (0..self.n_states)
            .fold(0, |best, s| if metric[s] > metric[best] { s } else { best });
        let mut bits = vec![false; n_sym];
        for k in (0..n_sym).rev() {
            let (prev, bit) = back[k * self.n_states + state];
            bits[k] = bit;
            state = prev;
        }
        bits
    }
}

/// De-chirp then Viterbi. `bb` must start at the frame (genie timing).
pub fn dechirp_viterbi_decode(bb: &ComplexFrame, cfg: &LfmCpmConfig) -> Result<Vec<bool>> {
    let trellis = CpmTrellis::new(cfg.mod_index, cfg.samples_per_symbol);
    dechirp_viterbi_decode_with(bb, cfg, &trellis)
}

/// As [`dechirp_viterbi_decode`] with a prebuilt trellis.
pub fn dechirp_viterbi_decode_with(
    bb: &ComplexFrame,
    cfg: &LfmCpmConfig,
    trellis: &CpmTrellis,
) -> Result<Vec<bool>> {
    cfg.validate()?;
    let len = cfg.frame_len();
    if bb.len() < len {
        return data(format!(
            "baseband has {} samples, frame needs {len}",
            bb.len()
        ));
    }
    let dechirped: Vec<Complex64> = bb.samples()[..len]
        .iter()
        .enumerate()
        .map(|(n, z)| z * Complex64::from_polar(1.0, -cfg.chirp_phase(n)))
        .collect();
    Ok(trellis.decode(&dechirped, cfg.samples_per_symbol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagEstimate {
    pub distance_m: f64,
    pub delay_samples: usize,
}

/// Front end on the echo, correlation against the transmitted baseband,
/// peak lag to range.
pub fn xcorr_range_estimate(
    echo: &RealWaveform,
    reference: &ComplexFrame,
    cfg: &LfmCpmConfig,
) -> Result<LagEstimate> {
    if echo.len() < reference.len() {
        return data(format!(
            "echo of {} samples is shorter than the {}-sample reference",
            echo.len(),
            reference.len()
        ));
    }
    let bb = lfm_cpm_front_end(echo, cfg)?;
    let corr = cross_correlate(&bb, reference)?;
    let (lag, _) = corr.peak();
    Ok(LagEstimate {
        distance_m: SPEED_OF_LIGHT * lag as f64 / (2.0 * cfg.sample_rate_hz),
        delay_samples: lag,
    })
}
