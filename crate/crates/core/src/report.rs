//! CSV rendering of results.
//!
//! All writers use `.` as the decimal separator, a fixed column order and
//! LF line endings. Floats are printed in their shortest round-trip form,
//! so equal results always render to identical bytes.

use std::fmt::Write as _;

use rand::Rng;

use crate::config::fmt_f64;
use crate::dsp::{ComplexFrame, RealWaveform, SeedSpec, StreamRole};
use crate::error::Result;
use crate::harness::{BiasScanEntry, SchemeConfig, SweepResult};
use crate::lfm_cpm::lfm_cpm_transmit;
use crate::ofdm::{ofdm_modulate, QamSymbolGrid};
use crate::ppm::ppm_modulate;

pub const SWEEP_HEADER: &str =
    "scheme,snr_db,snr_convention,qam_order,bias_factor,ber,ber_ci95,rmse_m,n_bits,n_trials,clip_fraction,seed";

fn push_rows(out: &mut String, r: &SweepResult) {
    let qam = r.qam_order.map(|q| q.to_string()).unwrap_or_default();
    for p in &r.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.scheme.as_str(),
            fmt_f64(p.snr_db),
            r.convention.as_str(),
            qam,
            fmt_f64(r.bias_factor),
            fmt_f64(p.ber),
            fmt_f64(p.ber_ci95),
            fmt_f64(p.rmse_m),
            p.n_bits,
            p.n_trials,
            fmt_f64(p.clip_fraction),
            r.master_seed,
        );
    }
}

/// One row per SNR point.
pub fn sweep_csv(r: &SweepResult) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    push_rows(&mut out, r);
    out
}

/// All scan entries in one long-format table, ordered by bias factor as
/// given.
pub fn bias_scan_csv(scan: &[BiasScanEntry]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for e in scan {
        push_rows(&mut out, &e.result);
    }
    out
}

/// File name for one entry of a bias scan, e.g. `sweep_kappa_1.5.csv`.
pub fn bias_scan_file_name(bias_factor: f64) -> String {
    format!("sweep_kappa_{}.csv", fmt_f64(bias_factor))
}

pub fn alloc_csv(gains_comm: &[f64], gains_sense: &[f64], power: &[f64]) -> String {
    let mut out = String::from("subcarrier,gain_comm,gain_sense,power\n");
    for (k, ((gc, gs), p)) in gains_comm.iter().zip(gains_sense).zip(power).enumerate() {
        let _ = writeln!(out, "{k},{},{},{}", fmt_f64(*gc), fmt_f64(*gs), fmt_f64(*p));
    }
    out
}

/// A single transmitted frame for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformDump {
    pub optical: RealWaveform,
    /// Baseband before biasing; absent for PPM.
    pub baseband: Option<ComplexFrame>,
}

/// Builds one frame of `scheme` from a random payload drawn with `seed`.
pub fn waveform_dump(scheme: &SchemeConfig, sample_rate_hz: f64, seed: u64) -> Result<WaveformDump> {
    let mut rng = SeedSpec::new(seed, 0, 0, StreamRole::Payload).rng();
    match scheme {
        SchemeConfig::DcoOfdm(cfg) => {
            cfg.validate()?;
            let grid = QamSymbolGrid::random(cfg, &mut rng);
            let f = ofdm_modulate(&grid, cfg, sample_rate_hz)?;
            Ok(WaveformDump {
                optical: f.optical,
                baseband: Some(f.baseband),
            })
        }
        SchemeConfig::LfmCpm(cfg) => {
            let bits: Vec<bool> = (0..cfg.n_symbols).map(|_| rng.random()).collect();
            let f = lfm_cpm_transmit(&bits, cfg)?;
            Ok(WaveformDump {
                optical: f.optical,
                baseband: Some(f.reference),
            })
        }
        SchemeConfig::Ppm(cfg) => {
            cfg.validate()?;
            let symbols: Vec<usize> = (0..cfg.n_symbols)
                .map(|_| rng.random_range(0..cfg.slots_per_symbol))
                .collect();
            Ok(WaveformDump {
                optical: ppm_modulate(&symbols, cfg, sample_rate_hz)?,
                baseband: None,
            })
        }
    }
}

pub fn waveform_csv(dump: &WaveformDump, include_baseband: bool) -> String {
    let bb = dump.baseband.as_ref().filter(|_| include_baseband);
    let mut out = String::from("index,optical_intensity");
    if bb.is_some() {
        out.push_str(",baseband_re,baseband_im");
    }
    out.push('\n');
    for (i, x) in dump.optical.samples().iter().enumerate() {
        let _ = write!(out, "{i},{}", fmt_f64(*x));
        if let Some(z) = bb.and_then(|b| b.samples().get(i)) {
            let _ = write!(out, ",{},{}", fmt_f64(z.re), fmt_f64(z.im));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SnrConvention;
    use crate::harness::{SchemeKind, SweepPoint};
    use crate::ofdm::OfdmConfig;
    use crate::ppm::PpmConfig;

    fn point(snr: f64) -> SweepPoint {
        SweepPoint {
            snr_db: snr,
            ber: 0.25,
            ber_ci_low: 0.2,
            ber_ci_high: 0.3,
            ber_ci95: 0.05,
            rmse_m: 0.5,
            n_bits: 100,
            n_trials: 16,
            n_error_events: 25,
            n_range_trials: 16,
            clip_fraction: 0.0,
            wall_time_s: 1.0,
        }
    }

    #[test]
    fn sweep_rows() {
        let r = SweepResult {
            scheme: SchemeKind::Ppm,
            convention: SnrConvention::OpticalTotal,
            qam_order: None,
            bias_factor: 0.0,
            master_seed: 7,
            quantization_floor_m: 0.04,
            points: vec![point(0.0), point(f64::INFINITY)],
        };
        let csv = sweep_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines[1], "ppm,0.0,optical_total,,0.0,0.25,0.05,0.5,100,16,0.0,7");
        assert!(lines[2].starts_with("ppm,inf,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn waveform_columns() {
        let ofdm = waveform_dump(&SchemeConfig::DcoOfdm(OfdmConfig { n_symbols: 1, ..OfdmConfig::default() }), 1e9, 3).unwrap();
        let csv = waveform_csv(&ofdm, true);
        assert!(csv.starts_with("index,optical_intensity,baseband_re,baseband_im\n"));
        assert_eq!(csv.lines().count(), 1 + 320);
        assert!(waveform_csv(&ofdm, false).starts_with("index,optical_intensity\n0,"));
        let ppm = waveform_dump(&SchemeConfig::Ppm(PpmConfig::default()), 1e9, 3).unwrap();
        assert!(ppm.baseband.is_none());
        assert!(waveform_csv(&ppm, true).starts_with("index,optical_intensity\n"));
    }

    #[test]
    fn alloc_rows() {
        let csv = alloc_csv(&[1.0, 4.0], &[0.0, 0.0], &[0.125, 0.875]);
        assert_eq!(csv, "subcarrier,gain_comm,gain_sense,power\n0,1.0,0.0,0.125\n1,4.0,0.0,0.875\n");
    }
}
