//! Monte-Carlo experiment engine.
//!
//! A sweep runs independent trials at each SNR grid point. Each trial draws
//! a payload and a target distance, sends the frame through the
//! communication and sensing channels with independent noise, and records
//! bit errors and the squared range error.
//!
//! Every random draw is keyed by `(seed, trial, role)`. By default the
//! point index is left out of the key (common random numbers), so the same
//! payloads, targets and unit noise realizations are reused at every SNR
//! and only the noise scale changes.
//!
//! Trials run in fixed batches on the rayon pool. The stop rule is checked
//! between batches, so the trial count never depends on the thread count.

mod alloc;
mod stats;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

pub use alloc::{allocate_power, AllocationProblem};
pub use stats::{q_function, wilson_interval, Z95};

use crate::channel::{
    comm_propagate, noise_variance_for_snr, sense_propagate, ChannelSpec, NoiseSpec,
    SnrConvention, SPEED_OF_LIGHT,
};
use crate::dsp::{RealWaveform, SeedSpec, StreamRole};
use crate::error::{config, Result};
use crate::lfm_cpm::{
    dechirp_viterbi_decode_with, lfm_cpm_front_end, lfm_cpm_transmit, xcorr_range_estimate,
    CpmTrellis, LfmCpmConfig,
};
use crate::ofdm::{ofdm_demodulate, ofdm_modulate, symbol_eliminate_range, OfdmConfig, QamSymbolGrid};
use crate::ppm::{ppm_demodulate, ppm_modulate, ppm_tof_estimate, PpmConfig};

/// Trials per batch between stop-rule checks.
pub const BATCH: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    DcoOfdm,
    LfmCpm,
    Ppm,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::DcoOfdm => "dco_ofdm",
            SchemeKind::LfmCpm => "lfm_cpm",
            SchemeKind::Ppm => "ppm",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeConfig {
    DcoOfdm(OfdmConfig),
    LfmCpm(LfmCpmConfig),
    Ppm(PpmConfig),
}

impl SchemeConfig {
    pub fn kind(&self) -> SchemeKind {
        match self {
            SchemeConfig::DcoOfdm(_) => SchemeKind::DcoOfdm,
            SchemeConfig::LfmCpm(_) => SchemeKind::LfmCpm,
            SchemeConfig::Ppm(_) => SchemeKind::Ppm,
        }
    }

    pub fn bias_factor(&self) -> f64 {
        match self {
            SchemeConfig::DcoOfdm(c) => c.bias_factor,
            SchemeConfig::LfmCpm(c) => c.bias_factor,
            SchemeConfig::Ppm(_) => 0.0,
        }
    }

    pub fn qam_order(&self) -> Option<u32> {
        match self {
            SchemeConfig::DcoOfdm(c) => Some(c.qam_order.order()),
            _ => None,
        }
    }
}

/// Channel parameters of a sweep. The target distance is drawn uniformly
/// from `[distance_min_m, distance_max_m]` for every trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepChannel {
    pub comm_gain: f64,
    pub distance_min_m: f64,
    pub distance_max_m: f64,
    pub reflectance: f64,
    pub aperture_gain_m2: f64,
    pub sample_rate_hz: f64,
    pub responsivity: f64,
    /// Sensing receiver input SNR relative to the swept SNR.
    pub sensing_snr_offset_db: f64,
}

impl Default for SweepChannel {
    fn default() -> Self {
        Self {
            comm_gain: 1.0,
            distance_min_m: 2.4,
            distance_max_m: 7.2,
            reflectance: 0.5,
            aperture_gain_m2: 1.0,
            sample_rate_hz: 1e9,
            responsivity: 1.0,
            sensing_snr_offset_db: 0.0,
        }
    }
}

impl SweepChannel {
    pub fn at_distance(&self, distance_m: f64) -> ChannelSpec {
        ChannelSpec {
            comm_gain: self.comm_gain,
            target_distance_m: distance_m,
            reflectance: self.reflectance,
            aperture_gain_m2: self.aperture_gain_m2,
            sample_rate_hz: self.sample_rate_hz,
            responsivity: self.responsivity,
        }
    }

    /// Largest round-trip delay in samples over the distance interval.
    pub fn max_delay_samples(&self) -> usize {
        self.at_distance(self.distance_max_m).delay_samples()
    }

    /// RMSE of rounding a uniform delay to the sample grid,
    /// `c / (2 fs sqrt(12))`.
    pub fn quantization_floor_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.sample_rate_hz * 12f64.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub min_bits: u64,
    pub min_trials: u64,
    pub max_trials: u64,
    pub target_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_bits: 1_000_000,
            min_trials: 256,
            max_trials: 1024,
            target_errors: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scheme: SchemeConfig,
    pub channel: SweepChannel,
    pub snr_db: Vec<f64>,
    pub convention: SnrConvention,
    pub stop: StopRule,
    pub master_seed: u64,
    pub common_random_numbers: bool,
}

impl SweepSpec {
    pub fn new(scheme: SchemeConfig, snr_db: Vec<f64>) -> Self {
        Self {
            scheme,
            channel: SweepChannel::default(),
            snr_db,
            convention: SnrConvention::ElectricalAc,
            stop: StopRule::default(),
            master_seed: 1,
            common_random_numbers: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        match &self.scheme {
            SchemeConfig::DcoOfdm(c) => push_err(&mut errs, c.validate()),
            SchemeConfig::LfmCpm(c) => {
                push_err(&mut errs, c.validate());
                if c.sample_rate_hz != self.channel.sample_rate_hz {
                    errs.push(format!(
                        "lfm_cpm sample rate {} differs from channel sample rate {}",
                        c.sample_rate_hz, self.channel.sample_rate_hz
                    ));
                }
            }
            SchemeConfig::Ppm(c) => push_err(&mut errs, c.validate()),
        }
        if self.snr_db.is_empty() {
            errs.push("snr_db_grid must not be empty".to_string());
        }
        if self.snr_db.iter().any(|s| s.is_nan()) {
            errs.push("snr_db_grid contains NaN".to_string());
        }
        if self.snr_db.windows(2).any(|w| !(w[1] > w[0])) {
            errs.push("snr_db_grid must be strictly increasing".to_string());
        }
        let s = &self.stop;
        if s.min_trials == 0 {
            errs.push("min_trials must be >= 1".to_string());
        }
        if s.max_trials < s.min_trials {
            errs.push(format!(
                "max_trials ({}) must be >= min_trials ({})",
                s.max_trials, s.min_trials
            ));
        }
        let ch = &self.channel;
        if !(ch.distance_min_m > 0.0 && ch.distance_min_m <= ch.distance_max_m) {
            errs.push(format!(
                "need 0 < distance_min_m <= distance_max_m, got {} and {}",
                ch.distance_min_m, ch.distance_max_m
            ));
        } else {
            push_err(&mut errs, ch.at_distance(ch.distance_min_m).validate());
            push_err(&mut errs, ch.at_distance(ch.distance_max_m).validate());
            if let SchemeConfig::DcoOfdm(c) = &self.scheme {
                let d = ch.max_delay_samples();
                if d > c.cp_len {
                    errs.push(format!(
                        "maximum echo delay {d} samples exceeds cp_len {}",
                        c.cp_len
                    ));
                }
            }
        }
        if !ch.sensing_snr_offset_db.is_finite() {
            errs.push("sensing_snr_offset_db must be finite".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            config(errs.join("; "))
        }
    }

    /// Zero samples appended to the sensing frame so that the farthest echo
    /// still fits; the total length is kept even for the Hilbert front end.
    fn listen_guard(&self, frame_len: usize) -> usize {
        let guard = self.channel.max_delay_samples() + 1;
        guard + (frame_len + guard) % 2
    }

    fn seed(&self, point: usize, trial: u64, role: StreamRole) -> SeedSpec {
        let point = if self.common_random_numbers { 0 } else { point as u64 };
        SeedSpec::new(self.master_seed, point, trial, role)
    }
}

fn push_err(errs: &mut Vec<String>, r: Result<()>) {
    if let Err(e) = r {
        errs.push(e.to_string());
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrialRecord {
    pub bits: u64,
    pub bit_errors: u64,
    pub range_error_m: f64,
    pub clip_fraction: f64,
}

impl TrialRecord {
    pub fn squared_range_error(&self) -> f64 {
        self.range_error_m * self.range_error_m
    }
}

fn count_errors(a: &[bool], b: &[bool]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

struct Paths {
    ch: ChannelSpec,
    comm: NoiseSpec,
    sense: NoiseSpec,
}

fn paths(spec: &SweepSpec, tx: &RealWaveform, snr_db: f64, distance: f64) -> Result<Paths> {
    let ch = spec.channel.at_distance(distance);
    let comm_gain = ch.responsivity * ch.comm_gain;
    let sense_gain = ch.responsivity * ch.sensing_gain();
    let comm = NoiseSpec::new(
        noise_variance_for_snr(tx, snr_db, spec.convention, comm_gain)?,
        spec.convention,
    )?;
    let sense = NoiseSpec::new(
        noise_variance_for_snr(
            tx,
            snr_db + spec.channel.sensing_snr_offset_db,
            spec.convention,
            sense_gain,
        )?,
        spec.convention,
    )?;
    Ok(Paths { ch, comm, sense })
}

/// Runs trial `trial` at grid point `point`.
pub fn run_trial(spec: &SweepSpec, point: usize, trial: u64) -> Result<TrialRecord> {
    let snr_db = match spec.snr_db.get(point) {
        Some(&s) => s,
        None => return config(format!("grid point {point} out of range")),
    };
    let seed = |role| spec.seed(point, trial, role);
    let ch = &spec.channel;
    let fs = ch.sample_rate_hz;
    let distance = {
        let mut r = seed(StreamRole::Target).rng();
        let u: f64 = r.random();
        ch.distance_min_m + u * (ch.distance_max_m - ch.distance_min_m)
    };
    let mut payload = seed(StreamRole::Payload).rng();

    match &spec.scheme {
        SchemeConfig::DcoOfdm(cfg) => {
            let grid = QamSymbolGrid::random(cfg, &mut payload);
            let frame = ofdm_modulate(&grid, cfg, fs)?;
            let p = paths(spec, &frame.optical, snr_db, distance)?;
            let rx = comm_propagate(&frame.optical, &p.ch, &p.comm, seed(StreamRole::CommNoise))?;
            let eq = p.ch.responsivity * p.ch.comm_gain;
            let rx_grid = ofdm_demodulate(&rx, cfg, 0, eq)?;
            let tx_bits = grid.to_bits(cfg.qam_order);
            let bit_errors = count_errors(&rx_grid.to_bits(cfg.qam_order), &tx_bits);
            let echo = sense_propagate(&frame.optical, &p.ch, &p.sense, seed(StreamRole::SenseNoise))?;
            let est = symbol_eliminate_range(&echo, &grid, cfg, fs)?;
            Ok(TrialRecord {
                bits: tx_bits.len() as u64,
                bit_errors,
                range_error_m: est.distance_m - distance,
                clip_fraction: frame.clip.clipped_fraction,
            })
        }
        SchemeConfig::LfmCpm(cfg) => {
            let bits: Vec<bool> = (0..cfg.n_symbols).map(|_| payload.random()).collect();
            let frame = lfm_cpm_transmit(&bits, cfg)?;
            let p = paths(spec, &frame.optical, snr_db, distance)?;
            let rx = comm_propagate(&frame.optical, &p.ch, &p.comm, seed(StreamRole::CommNoise))?;
            let bb = lfm_cpm_front_end(&rx, cfg)?;
            let trellis = CpmTrellis::new(cfg.mod_index, cfg.samples_per_symbol);
            let decoded = dechirp_viterbi_decode_with(&bb, cfg, &trellis)?;
            let padded = frame.optical.zero_padded(spec.listen_guard(frame.optical.len()));
            let echo = sense_propagate(&padded, &p.ch, &p.sense, seed(StreamRole::SenseNoise))?;
            let est = xcorr_range_estimate(&echo, &frame.reference, cfg)?;
            Ok(TrialRecord {
                bits: bits.len() as u64,
                bit_errors: count_errors(&decoded, &bits),
                range_error_m: est.distance_m - distance,
                clip_fraction: frame.clip.clipped_fraction,
            })
        }
        SchemeConfig::Ppm(cfg) => {
            let k = cfg.bits_per_symbol();
            let symbols: Vec<usize> = (0..cfg.n_symbols)
                .map(|_| payload.random_range(0..cfg.slots_per_symbol))
                .collect();
            let tx = ppm_modulate(&symbols, cfg, fs)?;
            let p = paths(spec, &tx, snr_db, distance)?;
            let rx = comm_propagate(&tx, &p.ch, &p.comm, seed(StreamRole::CommNoise))?;
            let decided = ppm_demodulate(&rx, cfg)?;
            let bit_errors = symbols
                .iter()
                .zip(&decided)
                .map(|(a, b)| u64::from((a ^ b).count_ones()))
                .sum();
            let padded = tx.zero_padded(spec.listen_guard(tx.len()));
            let echo = sense_propagate(&padded, &p.ch, &p.sense, seed(StreamRole::SenseNoise))?;
            let est = ppm_tof_estimate(&echo, &tx)?;
            Ok(TrialRecord {
                bits: (symbols.len() * k) as u64,
                bit_errors,
                range_error_m: est.distance_m - distance,
                clip_fraction: 0.0,
            })
        }
    }
}

/// Aggregated statistics at one SNR grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub ber_ci_low: f64,
    pub ber_ci_high: f64,
    /// Half-width of the Wilson 95% interval.
    pub ber_ci95: f64,
    /// Root-mean-square range error over the first `n_range_trials` trials.
    pub rmse_m: f64,
    pub n_bits: u64,
    pub n_trials: u64,
    pub n_error_events: u64,
    pub n_range_trials: u64,
    pub clip_fraction: f64,
    pub wall_time_s: f64,
}

impl SweepPoint {
    /// Equality on everything except wall time.
    pub fn same_statistics(&self, other: &Self) -> bool {
        Self {
            wall_time_s: 0.0,
            ..self.clone()
        } == Self {
            wall_time_s: 0.0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scheme: SchemeKind,
    pub convention: SnrConvention,
    pub qam_order: Option<u32>,
    pub bias_factor: f64,
    pub master_seed: u64,
    pub quantization_floor_m: f64,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn same_statistics(&self, other: &Self) -> bool {
        self.scheme == other.scheme
            && self.convention == other.convention
            && self.qam_order == other.qam_order
            && self.bias_factor == other.bias_factor
            && self.master_seed == other.master_seed
            && self.points.len() == other.points.len()
            && self.points.iter().zip(&other.points).all(|(a, b)| a.same_statistics(b))
    }

    pub fn ber(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ber).collect()
    }

    pub fn rmse(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.rmse_m).collect()
    }

    /// Lowest grid SNR from which every later point has BER <= `threshold`.
    pub fn ber_settling_snr(&self, threshold: f64) -> Option<f64> {
        settling(&self.points, |p| p.ber <= threshold)
    }

    /// Lowest grid SNR from which every later point has
    /// RMSE <= `factor` * quantization floor.
    pub fn rmse_settling_snr(&self, factor: f64) -> Option<f64> {
        let limit = factor * self.quantization_floor_m;
        settling(&self.points, |p| p.rmse_m <= limit)
    }
}

fn settling(points: &[SweepPoint], ok: impl Fn(&SweepPoint) -> bool) -> Option<f64> {
    let mut first = None;
    for p in points.iter().rev() {
        if ok(p) {
            first = Some(p.snr_db);
        } else {
            break;
        }
    }
    first
}

fn run_point(spec: &SweepSpec, point: usize) -> Result<SweepPoint> {
    let start = Instant::now();
    let stop = &spec.stop;
    let mut trials = 0u64;
    let mut bits = 0u64;
    let mut errors = 0u64;
    let mut clip_sum = 0.0;
    let mut sq_err_sum = 0.0;
    let mut range_trials = 0u64;
    loop {
        let batch: Vec<TrialRecord> = (trials..trials + BATCH)
            .into_par_iter()
            .map(|t| run_trial(spec, point, t))
            .collect::<Result<_>>()?;
        for (i, rec) in batch.iter().enumerate() {
            bits += rec.bits;
            errors += rec.bit_errors;
            clip_sum += rec.clip_fraction;
            if trials + (i as u64) < stop.min_trials {
                sq_err_sum += rec.squared_range_error();
                range_trials += 1;
            }
        }
        trials += BATCH;
        let enough = bits >= stop.min_bits && trials >= stop.min_trials && errors >= stop.target_errors;
        if enough || trials >= stop.max_trials {
            break;
        }
    }
    let (lo, hi) = wilson_interval(errors, bits);
    Ok(SweepPoint {
        snr_db: spec.snr_db[point],
        ber: if bits == 0 { 0.0 } else { errors as f64 / bits as f64 },
        ber_ci_low: lo,
        ber_ci_high: hi,
        ber_ci95: 0.5 * (hi - lo),
        rmse_m: (sq_err_sum / range_trials as f64).sqrt(),
        n_bits: bits,
        n_trials: trials,
        n_error_events: errors,
        n_range_trials: range_trials,
        clip_fraction: clip_sum / trials as f64,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Runs every grid point on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = (0..spec.snr_db.len())
        .map(|i| run_point(spec, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        scheme: spec.scheme.kind(),
        convention: spec.convention,
        qam_order: spec.scheme.qam_order(),
        bias_factor: spec.scheme.bias_factor(),
        master_seed: spec.master_seed,
        quantization_floor_m: spec.channel.quantization_floor_m(),
        points,
    })
}

/// Runs `f` on a dedicated pool of `threads` workers (`None`: rayon's
/// default pool).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => config("thread count must be >= 1"),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| crate::Error::Config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasScanEntry {
    pub bias_factor: f64,
    pub result: SweepResult,
}

/// DCO-OFDM sweeps at several bias factors under the optical-total SNR
/// convention, so the DC component counts against the power budget.
pub fn bias_tradeoff_scan(base: &SweepSpec, bias_factors: &[f64]) -> Result<Vec<BiasScanEntry>> {
    let SchemeConfig::DcoOfdm(cfg) = &base.scheme else {
        return config("the bias trade-off scan needs the dco_ofdm scheme");
    };
    if bias_factors.is_empty() {
        return config("bias scan needs at least one bias factor");
    }
    bias_factors
        .iter()
        .map(|&kappa| {
            let spec = SweepSpec {
                scheme: SchemeConfig::DcoOfdm(OfdmConfig {
                    bias_factor: kappa,
                    ..*cfg
                }),
                convention: SnrConvention::OpticalTotal,
                ..base.clone()
            };
            Ok(BiasScanEntry {
                bias_factor: kappa,
                result: run_sweep(&spec)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppm::Spreading;

    fn small_ofdm(snr: Vec<f64>) -> SweepSpec {
        let mut s = SweepSpec::new(SchemeConfig::DcoOfdm(OfdmConfig { n_symbols: 4, ..OfdmConfig::default() }), snr);
        s.stop = StopRule { min_bits: 0, min_trials: 16, max_trials: 32, target_errors: 100 };
        s
    }

    #[test]
    fn noiseless_trials_are_error_free() {
        let lfm = LfmCpmConfig::with_defaults(32, 1e9);
        let ppm = PpmConfig { n_symbols: 4, spreading: Some(Spreading { degree: 5, phase: 0 }), ..PpmConfig::default() };
        for scheme in [
            SchemeConfig::DcoOfdm(OfdmConfig { n_symbols: 4, bias_factor: 6.0, ..OfdmConfig::default() }),
            SchemeConfig::LfmCpm(lfm),
            SchemeConfig::Ppm(ppm),
        ] {
            let spec = SweepSpec::new(scheme, vec![f64::INFINITY]);
            for t in 0..8 {
                let rec = run_trial(&spec, 0, t).unwrap();
                assert_eq!(rec.bit_errors, 0);
                // Off-grid targets leave at most half a sample of range error.
                assert!(rec.range_error_m.abs() <= 0.5 * SPEED_OF_LIGHT / 2e9 + 1e-12);
            }
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let spec = small_ofdm(vec![5.0]);
        assert_eq!(run_trial(&spec, 0, 3).unwrap(), run_trial(&spec, 0, 3).unwrap());
        assert_ne!(run_trial(&spec, 0, 3).unwrap(), run_trial(&spec, 0, 4).unwrap());
    }

    #[test]
    fn high_snr_ofdm_frame_is_clean() {
        let spec = small_ofdm(vec![25.0]);
        assert_eq!(run_trial(&spec, 0, 0).unwrap().bit_errors, 0);
    }

    #[test]
    fn sweep_counters_are_consistent() {
        let r = run_sweep(&small_ofdm(vec![0.0, 10.0])).unwrap();
        for p in &r.points {
            assert!(p.n_error_events <= p.n_bits);
            assert!((0.0..=1.0).contains(&p.ber));
            assert!(p.ber_ci_low <= p.ber && p.ber <= p.ber_ci_high);
            assert!(p.rmse_m >= 0.0);
            assert_eq!(p.n_trials % BATCH, 0);
            assert_eq!(p.n_range_trials, 16);
        }
    }

    #[test]
    fn validation_catches_grid_and_geometry() {
        let mut s = small_ofdm(vec![10.0, 5.0]);
        assert!(s.validate().unwrap_err().to_string().contains("strictly increasing"));
        s.snr_db = vec![0.0];
        s.channel.distance_max_m = 20.0;
        assert!(s.validate().unwrap_err().to_string().contains("cp_len"));
        s.channel.distance_max_m = 1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn scan_requires_ofdm() {
        let spec = SweepSpec::new(SchemeConfig::Ppm(PpmConfig::default()), vec![0.0]);
        assert!(bias_tradeoff_scan(&spec, &[1.0]).is_err());
    }

    #[test]
    fn settling_snr_needs_the_whole_tail() {
        let mk = |snr: f64, ber: f64| SweepPoint {
            snr_db: snr, ber, ber_ci_low: 0.0, ber_ci_high: 0.0, ber_ci95: 0.0, rmse_m: 0.0,
            n_bits: 0, n_trials: 0, n_error_events: 0, n_range_trials: 0, clip_fraction: 0.0, wall_time_s: 0.0,
        };
        let r = SweepResult {
            scheme: SchemeKind::DcoOfdm, convention: SnrConvention::ElectricalAc, qam_order: Some(4),
            bias_factor: 3.0, master_seed: 0, quantization_floor_m: 1.0,
            points: vec![mk(0.0, 0.001), mk(1.0, 0.1), mk(2.0, 0.005), mk(3.0, 0.0)],
        };
        assert_eq!(r.ber_settling_snr(0.01), Some(2.0));
        assert_eq!(r.ber_settling_snr(1e-9), Some(3.0));
    }
}
