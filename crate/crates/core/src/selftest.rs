//! Built-in invariant checks, runnable from an installed binary.
//!
//! Each check compares a library routine against an independent oracle on
//! small inputs and finishes in well under a second.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dsp::{bipolar, dc_bias_and_clip, dft, hilbert_analytic, msequence, ComplexFrame, Direction, RealWaveform, SeedSpec, StreamRole};
use crate::harness::{allocate_power, q_function, run_sweep, with_threads, AllocationProblem, SchemeConfig, StopRule, SweepSpec};
use crate::lfm_cpm::{lfm_cpm_transmit, xcorr_range_estimate, LfmCpmConfig};
use crate::ofdm::{symbol_eliminate_range, ofdm_modulate, OfdmConfig, QamSymbolGrid};
use crate::ppm::{ppm_demodulate, ppm_modulate, ppm_tof_estimate, PpmConfig};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn seed(i: u64) -> SeedSpec {
    SeedSpec::new(0x5e1f, 0, i, StreamRole::Payload)
}

/// Runs every check; the run passes if all entries pass.
pub fn run_selftest() -> Vec<Check> {
    vec![
        check("dft_matches_direct_sum", dft_vs_direct),
        check("hilbert_suppresses_negative_frequencies", hilbert_leakage),
        check("msequence_balance_and_autocorrelation", msequence_props),
        check("gaussian_clip_fraction", clip_fraction),
        check("ofdm_noiseless_delay_exact", ofdm_delay),
        check("lfm_cpm_noiseless_lag_exact", lfm_lag),
        check("ppm_noiseless_decode_and_tof", ppm_exact),
        check("allocator_kkt", allocator),
        check("sweep_thread_independent", sweep_determinism),
    ]
}

fn dft_vs_direct() -> Result<(bool, String)> {
    let mut rng = seed(1).rng();
    let mut worst = 0f64;
    for n in [1usize, 2, 8, 64] {
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let got = dft(&ComplexFrame::new(x.clone(), 1.0)?, Direction::Forward)?;
        for (k, g) in got.samples().iter().enumerate() {
            let want: Complex64 = x
                .iter()
                .enumerate()
                .map(|(t, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * t) as f64 / n as f64))
                .sum::<Complex64>()
                / (n as f64).sqrt();
            worst = worst.max((g - want).norm());
        }
    }
    Ok((worst < 1e-9, format!("max error {worst:.2e}")))
}

fn hilbert_leakage() -> Result<(bool, String)> {
    let mut rng = seed(2).rng();
    let n = 256;
    let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let z = hilbert_analytic(&RealWaveform::new(x, 1.0)?)?;
    let spec = dft(&z, Direction::Forward)?;
    let total: f64 = spec.samples().iter().map(|c| c.norm_sqr()).sum();
    let neg: f64 = spec.samples()[n / 2 + 1..].iter().map(|c| c.norm_sqr()).sum();
    let ratio = (neg / total).sqrt();
    Ok((ratio < 1e-12, format!("negative-band amplitude ratio {ratio:.2e}")))
}

fn msequence_props() -> Result<(bool, String)> {
    for m in 2..=10u32 {
        let s = bipolar(&msequence(m)?);
        let n = s.len();
        let sum: f64 = s.iter().sum();
        if sum != -1.0 && sum != 1.0 {
            return Ok((false, format!("degree {m}: unbalanced, sum {sum}")));
        }
        for lag in 1..n {
            let r: f64 = (0..n).map(|i| s[i] * s[(i + lag) % n]).sum();
            if r != -1.0 {
                return Ok((false, format!("degree {m}: autocorrelation {r} at lag {lag}")));
            }
        }
    }
    Ok((true, "degrees 2..=10".into()))
}

fn clip_fraction() -> Result<(bool, String)> {
    let mut rng = seed(3).rng();
    let x: Vec<f64> = (0..1_000_000).map(|_| rng.sample(StandardNormal)).collect();
    let (_, stats) = dc_bias_and_clip(&RealWaveform::new(x, 1.0)?, 3.0)?;
    let want = q_function(3.0);
    let rel = (stats.clipped_fraction - want).abs() / want;
    Ok((rel < 0.2, format!("{:.3e} vs Q(3) = {want:.3e}", stats.clipped_fraction)))
}

/// Attenuated copy of `tx` delayed by `d` samples, same length.
fn delayed(tx: &RealWaveform, d: usize) -> Result<RealWaveform> {
    let mut y = vec![0.0; tx.len()];
    for (i, v) in tx.samples().iter().enumerate().take(tx.len().saturating_sub(d)) {
        y[i + d] = 0.3 * v;
    }
    RealWaveform::new(y, tx.sample_rate())
}

fn ofdm_delay() -> Result<(bool, String)> {
    let cfg = OfdmConfig {
        n_symbols: 2,
        ..OfdmConfig::default()
    };
    let fs = 1e9;
    let grid = QamSymbolGrid::random(&cfg, &mut seed(4).rng());
    let tx = ofdm_modulate(&grid, &cfg, fs)?.optical;
    for d in 0..cfg.cp_len {
        let echo = delayed(&tx, d)?;
        let est = symbol_eliminate_range(&echo, &grid, &cfg, fs)?;
        if est.delay_samples != d {
            return Ok((false, format!("delay {d} estimated as {}", est.delay_samples)));
        }
    }
    Ok((true, format!("delays 0..{}", cfg.cp_len)))
}

fn lfm_lag() -> Result<(bool, String)> {
    let fs = 1e9;
    let cfg = LfmCpmConfig::with_defaults(64, fs);
    let mut rng = seed(6).rng();
    let bits: Vec<bool> = (0..cfg.n_symbols).map(|_| rng.random()).collect();
    let frame = lfm_cpm_transmit(&bits, &cfg)?;
    let padded = frame.optical.zero_padded(102);
    for d in [0usize, 1, 17, 100] {
        let echo = delayed(&padded, d)?;
        let est = xcorr_range_estimate(&echo, &frame.reference, &cfg)?;
        if est.delay_samples != d {
            return Ok((false, format!("delay {d} estimated as {}", est.delay_samples)));
        }
    }
    Ok((true, "delays 0, 1, 17, 100".into()))
}

fn ppm_exact() -> Result<(bool, String)> {
    let fs = 1e9;
    let cfg = PpmConfig {
        n_symbols: 1,
        ..PpmConfig::default()
    };
    for sym in 0..cfg.slots_per_symbol {
        let tx = ppm_modulate(&[sym], &cfg, fs)?;
        if ppm_demodulate(&tx, &cfg)? != [sym] {
            return Ok((false, format!("symbol {sym} misdecoded")));
        }
        let d = 5;
        let echo = delayed(&tx.zero_padded(d + 1), d)?;
        let est = ppm_tof_estimate(&echo, &tx)?;
        if est.delay_samples != d {
            return Ok((false, format!("symbol {sym}: delay {d} estimated as {}", est.delay_samples)));
        }
    }
    Ok((true, format!("{} symbols", cfg.slots_per_symbol)))
}

fn allocator() -> Result<(bool, String)> {
    let p = AllocationProblem {
        gains_comm: vec![0.1, 1.0, 2.5, 0.0, 4.0],
        gains_sense: vec![1.0, 0.2, 0.0, 0.7, 3.0],
        noise_variance: 0.5,
        total_power: 2.0,
        weight: 0.3,
    };
    let powers = allocate_power(&p)?;
    let kkt = p.kkt_violation(&powers);
    let budget = (powers.iter().sum::<f64>() - p.total_power).abs();
    Ok((
        kkt < 1e-6 && budget <= 1e-6 * p.total_power,
        format!("KKT violation {kkt:.2e}, budget error {budget:.2e}"),
    ))
}

fn sweep_determinism() -> Result<(bool, String)> {
    let mut spec = SweepSpec::new(
        SchemeConfig::DcoOfdm(OfdmConfig {
            n_symbols: 2,
            ..OfdmConfig::default()
        }),
        vec![0.0, 6.0],
    );
    spec.stop = StopRule {
        min_bits: 0,
        min_trials: 16,
        max_trials: 32,
        target_errors: 1,
    };
    let one = with_threads(Some(1), || run_sweep(&spec))??;
    let four = with_threads(Some(4), || run_sweep(&spec))??;
    Ok((one.same_statistics(&four), "1 vs 4 threads".into()))
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
