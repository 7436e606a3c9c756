//! DCO-OFDM transceiver with symbol-elimination ranging.
//!
//! Frame layout per OFDM symbol: data on subcarriers `1..N/2`, zeros on DC
//! and Nyquist, conjugate mirrors on `N/2+1..N`, so the time signal is real.
//! Each symbol carries a cyclic prefix of `cp_len` samples. The whole frame
//! is DC-biased by `kappa * sigma` and clipped at zero.

mod qam;

use num_complex::Complex64;
use rand::Rng;

pub use qam::{qam_demap, qam_map, QamOrder};

use crate::channel::SPEED_OF_LIGHT;
use crate::dsp::{
    dc_bias_and_clip, transform_in_place, ClipStats, ComplexFrame, Direction, RealWaveform,
};
use crate::error::{config, data, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmConfig {
    pub n_fft: usize,
    pub cp_len: usize,
    pub qam_order: QamOrder,
    pub bias_factor: f64,
    pub n_symbols: usize,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        Self {
            n_fft: 256,
            cp_len: 64,
            qam_order: QamOrder::Qam4,
            bias_factor: 3.0,
            n_symbols: 16,
        }
    }
}

impl OfdmConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.n_fft < 8 || !self.n_fft.is_power_of_two() {
            errs.push(format!("n_fft must be a power of two >= 8, got {}", self.n_fft));
        }
        if !(self.bias_factor >= 0.0 && self.bias_factor.is_finite()) {
            errs.push(format!("bias_factor must be >= 0, got {}", self.bias_factor));
        }
        if self.n_symbols == 0 {
            errs.push("n_symbols must be >= 1".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            config(errs.join("; "))
        }
    }

    pub fn data_subcarriers(&self) -> usize {
        self.n_fft / 2 - 1
    }

    pub fn symbol_len(&self) -> usize {
        self.n_fft + self.cp_len
    }

    pub fn frame_len(&self) -> usize {
        self.symbol_len() * self.n_symbols
    }

    pub fn bits_per_frame(&self) -> usize {
        self.n_symbols * self.data_subcarriers() * self.qam_order.bits_per_symbol()
    }
}

/// Row-major matrix of subcarrier symbols: one row per OFDM symbol, one
/// column per data subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct QamSymbolGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl QamSymbolGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return config(format!(
                "grid data has {} entries, expected {rows} x {cols}",
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Maps a frame's worth of bits onto the configured constellation.
    pub fn from_bits(bits: &[bool], cfg: &OfdmConfig) -> Result<Self> {
        if bits.len() != cfg.bits_per_frame() {
            return data(format!(
                "expected {} bits per frame, got {}",
                cfg.bits_per_frame(),
                bits.len()
            ));
        }
        let symbols = qam_map(bits, cfg.qam_order)?;
        Self::new(cfg.n_symbols, cfg.data_subcarriers(), symbols)
    }

    pub fn random<R: Rng>(cfg: &OfdmConfig, rng: &mut R) -> Self {
        let bits: Vec<bool> = (0..cfg.bits_per_frame()).map(|_| rng.random()).collect();
        Self::from_bits(&bits, cfg).expect("bit count matches config")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn to_bits(&self, order: QamOrder) -> Vec<bool> {
        qam_demap(&self.data, order)
    }
}

/// Transmit side products of [`ofdm_modulate`].
#[derive(Debug, Clone)]
pub struct OfdmFrame {
    pub optical: RealWaveform,
    /// Pre-bias real baseband, kept as the sensing reference.
    pub baseband: ComplexFrame,
    pub clip: ClipStats,
}

fn check_grid(grid: &QamSymbolGrid, cfg: &OfdmConfig) -> Result<()> {
    cfg.validate()?;
    if grid.rows != cfg.n_symbols || grid.cols != cfg.data_subcarriers() {
        return config(format!(
            "grid is {} x {}, config expects {} x {}",
            grid.rows,
            grid.cols,
            cfg.n_symbols,
            cfg.data_subcarriers()
        ));
    }
    Ok(())
}

pub fn ofdm_modulate(grid: &QamSymbolGrid, cfg: &OfdmConfig, sample_rate: f64) -> Result<OfdmFrame> {
    check_grid(grid, cfg)?;
    let n = cfg.n_fft;
    let mut time = Vec::with_capacity(cfg.frame_len());
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for r in 0..grid.rows {
        buf.fill(Complex64::new(0.0, 0.0));
        for (k, &s) in grid.row(r).iter().enumerate() {
            buf[k + 1] = s;
            buf[n - k - 1] = s.conj();
        }
        transform_in_place(&mut buf, Direction::Inverse);
        time.extend_from_slice(&buf[n - cfg.cp_len..]);
        time.extend_from_slice(&buf);
    }
    let baseband = ComplexFrame::new(time, sample_rate)?;
    let real = baseband.to_real(1e-9)?;
    let (optical, clip) = dc_bias_and_clip(&real, cfg.bias_factor)?;
    Ok(OfdmFrame {
        optical,
        baseband,
        clip,
    })
}

fn frame_region<'a>(rx: &'a RealWaveform, cfg: &OfdmConfig, start: usize) -> Result<&'a [f64]> {
    let end = start + cfg.frame_len();
    if end > rx.len() {
        return data(format!(
            "frame [{start}, {end}) overruns received waveform of {} samples",
            rx.len()
        ));
    }
    Ok(&rx.samples()[start..end])
}

/// Spectrum of each OFDM symbol in `region`, mean removed first.
fn symbol_spectra(region: &[f64], cfg: &OfdmConfig) -> Vec<Vec<Complex64>> {
    let mean = region.iter().sum::<f64>() / region.len() as f64;
    (0..cfg.n_symbols)
        .map(|r| {
            let start = r * cfg.symbol_len() + cfg.cp_len;
            let mut buf: Vec<Complex64> = region[start..start + cfg.n_fft]
                .iter()
                .map(|&v| Complex64::new(v - mean, 0.0))
                .collect();
            transform_in_place(&mut buf, Direction::Forward);
            buf
        })
        .collect()
}

/// Conventional receiver with genie timing and a known flat gain.
pub fn ofdm_demodulate(
    rx: &RealWaveform,
    cfg: &OfdmConfig,
    frame_start: usize,
    gain: f64,
) -> Result<QamSymbolGrid> {
    cfg.validate()?;
    if !(gain > 0.0) {
        return config(format!("equalizer gain must be > 0, got {gain}"));
    }
    let region = frame_region(rx, cfg, frame_start)?;
    let cols = cfg.data_subcarriers();
    let mut out = Vec::with_capacity(cfg.n_symbols * cols);
    for spec in symbol_spectra(region, cfg) {
        out.extend(spec[1..=cols].iter().map(|z| z / gain));
    }
    QamSymbolGrid::new(cfg.n_symbols, cols, out)
}

/// Symbol-elimination channel estimate: per-bin quotient of received and
/// transmitted spectra, averaged over OFDM symbols. Data bins and their
/// conjugate mirrors are filled; DC and Nyquist are zero.
pub fn symbol_elimination_quotients(
    echo: &RealWaveform,
    tx_grid: &QamSymbolGrid,
    cfg: &OfdmConfig,
) -> Result<Vec<Complex64>> {
    check_grid(tx_grid, cfg)?;
    if tx_grid.data.iter().any(|z| z.norm_sqr() == 0.0) {
        return config("symbol elimination needs every transmitted symbol nonzero");
    }
    let region = frame_region(echo, cfg, 0)?;
    let n = cfg.n_fft;
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for (r, spec) in symbol_spectra(region, cfg).iter().enumerate() {
        for (k, &x) in tx_grid.row(r).iter().enumerate() {
            acc[k + 1] += spec[k + 1] / x;
            acc[n - k - 1] += spec[n - k - 1] / x.conj();
        }
    }
    let inv = 1.0 / cfg.n_symbols as f64;
    for z in &mut acc {
        *z *= inv;
    }
    Ok(acc)
}

/// A monostatic range estimate with its delay profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeEstimate {
    pub distance_m: f64,
    pub delay_samples: usize,
    pub profile: Vec<f64>,
}

pub(crate) fn argmax_first(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

pub fn delay_to_distance(delay_samples: f64, sample_rate: f64) -> f64 {
    SPEED_OF_LIGHT * delay_samples / (2.0 * sample_rate)
}

/// Range from the delay profile obtained by symbol elimination.
pub fn symbol_eliminate_range(
    echo: &RealWaveform,
    tx_grid: &QamSymbolGrid,
    cfg: &OfdmConfig,
    sample_rate: f64,
) -> Result<RangeEstimate> {
    let mut q = symbol_elimination_quotients(echo, tx_grid, cfg)?;
    transform_in_place(&mut q, Direction::Inverse);
    let profile: Vec<f64> = q.iter().map(|z| z.norm()).collect();
    let d = argmax_first(&profile);
    Ok(RangeEstimate {
        distance_m: delay_to_distance(d as f64, sample_rate),
        delay_samples: d,
        profile,
    })
}
