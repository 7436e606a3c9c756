//! Experiment configuration files.
//!
//! The format is TOML with a fixed set of sections and keys. Parsing is
//! strict: unknown sections or keys, type mismatches and invariant
//! violations are all collected and reported together, one per line, each
//! prefixed with its `section.key` path.
//!
//! ```toml
//! [experiment]
//! scheme = "dco_ofdm"
//! snr_db_grid = [0.0, 5.0, 10.0]
//!
//! [dco_ofdm]
//! qam_order = 16
//! ```

use std::fmt::Write as _;
use std::path::Path;

use toml::{Table, Value};

use crate::channel::SnrConvention;
use crate::error::{Error, Result};
use crate::harness::{AllocationProblem, SchemeConfig, SchemeKind, StopRule, SweepChannel, SweepSpec};
use crate::lfm_cpm::{LfmCpmConfig, ModIndex};
use crate::ofdm::{OfdmConfig, QamOrder};
use crate::ppm::{PpmConfig, Spreading};

const DEFAULT_LFM_SYMBOLS: usize = 256;
const DEFAULT_BIAS_SCAN: [f64; 3] = [1.0, 2.0, 3.0];

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "experiment",
        &[
            "scheme",
            "snr_db_grid",
            "snr_convention",
            "seed",
            "common_random_numbers",
            "min_bits",
            "min_trials",
            "max_trials",
            "target_errors",
        ],
    ),
    (
        "channel",
        &[
            "comm_gain",
            "distance_min_m",
            "distance_max_m",
            "reflectance",
            "aperture_gain_m2",
            "sample_rate_hz",
            "responsivity_a_per_w",
            "sensing_snr_offset_db",
        ],
    ),
    (
        "dco_ofdm",
        &["n_fft", "cp_len", "qam_order", "bias_factor", "n_symbols"],
    ),
    (
        "lfm_cpm",
        &[
            "samples_per_symbol",
            "n_symbols",
            "mod_index_num",
            "mod_index_den",
            "chirp_rate_hz_per_s",
            "intermediate_freq_hz",
            "bias_factor",
        ],
    ),
    (
        "ppm",
        &[
            "slots_per_symbol",
            "samples_per_chip",
            "n_symbols",
            "spreading",
            "msequence_degree",
            "code_phase",
            "pulse_amplitude",
        ],
    ),
    ("scan", &["bias_factors"]),
    (
        "allocation",
        &["gains_comm", "gains_sense", "noise_power_w", "total_power_w", "weight"],
    ),
    ("output", &["dir"]),
    ("dump", &["include_baseband"]),
];

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Option<SchemeKind>,
    pub snr_db_grid: Option<Vec<f64>>,
    pub convention: SnrConvention,
    pub seed: u64,
    pub common_random_numbers: bool,
    pub stop: StopRule,
    pub channel: SweepChannel,
    pub dco_ofdm: OfdmConfig,
    pub lfm_cpm: LfmCpmConfig,
    pub ppm: PpmConfig,
    pub bias_factors: Vec<f64>,
    pub allocation: Option<AllocationProblem>,
    pub output_dir: Option<String>,
    pub include_baseband: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let channel = SweepChannel::default();
        Self {
            scheme: None,
            snr_db_grid: None,
            convention: SnrConvention::ElectricalAc,
            seed: 1,
            common_random_numbers: true,
            stop: StopRule::default(),
            channel,
            dco_ofdm: OfdmConfig::default(),
            lfm_cpm: LfmCpmConfig::with_defaults(DEFAULT_LFM_SYMBOLS, channel.sample_rate_hz),
            ppm: PpmConfig::default(),
            bias_factors: DEFAULT_BIAS_SCAN.to_vec(),
            allocation: None,
            output_dir: None,
            include_baseband: true,
        }
    }
}

pub fn parse_scheme(s: &str) -> Option<SchemeKind> {
    match s {
        "dco_ofdm" => Some(SchemeKind::DcoOfdm),
        "lfm_cpm" => Some(SchemeKind::LfmCpm),
        "ppm" => Some(SchemeKind::Ppm),
        _ => None,
    }
}

pub fn parse_convention(s: &str) -> Option<SnrConvention> {
    match s {
        "electrical_ac" => Some(SnrConvention::ElectricalAc),
        "optical_total" => Some(SnrConvention::OpticalTotal),
        _ => None,
    }
}

struct Reader<'a> {
    doc: &'a Table,
    errs: Vec<String>,
}

impl<'a> Reader<'a> {
    fn get(&self, section: &str, key: &str) -> Option<&'a Value> {
        self.doc.get(section)?.as_table()?.get(key)
    }

    fn has_section(&self, section: &str) -> bool {
        self.doc.get(section).is_some()
    }

    fn bad(&mut self, section: &str, key: &str, why: impl std::fmt::Display) {
        self.errs.push(format!("{section}.{key}: {why}"));
    }

    fn f64(&mut self, section: &str, key: &str, default: f64) -> f64 {
        match self.get(section, key) {
            None => default,
            Some(Value::Float(x)) => *x,
            Some(Value::Integer(i)) => *i as f64,
            Some(v) => {
                self.bad(section, key, format!("expected a number, got {}", v.type_str()));
                default
            }
        }
    }

    fn opt_f64(&mut self, section: &str, key: &str) -> Option<f64> {
        self.get(section, key)?;
        Some(self.f64(section, key, f64::NAN))
    }

    fn u64(&mut self, section: &str, key: &str, default: u64) -> u64 {
        match self.get(section, key) {
            None => default,
            Some(Value::Integer(i)) if *i >= 0 => *i as u64,
            Some(Value::Integer(i)) => {
                self.bad(section, key, format!("must be >= 0, got {i}"));
                default
            }
            Some(v) => {
                self.bad(section, key, format!("expected an integer, got {}", v.type_str()));
                default
            }
        }
    }

    fn usize(&mut self, section: &str, key: &str, default: usize) -> usize {
        self.u64(section, key, default as u64) as usize
    }

    fn bool(&mut self, section: &str, key: &str, default: bool) -> bool {
        match self.get(section, key) {
            None => default,
            Some(Value::Boolean(b)) => *b,
            Some(v) => {
                self.bad(section, key, format!("expected a boolean, got {}", v.type_str()));
                default
            }
        }
    }

    fn str(&mut self, section: &str, key: &str) -> Option<&'a str> {
        match self.get(section, key)? {
            Value::String(s) => Some(s),
            v => {
                self.bad(section, key, format!("expected a string, got {}", v.type_str()));
                None
            }
        }
    }

    fn f64_list(&mut self, section: &str, key: &str) -> Option<Vec<f64>> {
        let Value::Array(items) = self.get(section, key)? else {
            self.bad(section, key, "expected an array of numbers");
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for v in items {
            match v {
                Value::Float(x) => out.push(*x),
                Value::Integer(i) => out.push(*i as f64),
                _ => {
                    self.bad(section, key, "expected an array of numbers");
                    return None;
                }
            }
        }
        Some(out)
    }

    /// Seeds may exceed the TOML integer range, so a decimal string is
    /// accepted too.
    fn seed(&mut self, default: u64) -> u64 {
        match self.get("experiment", "seed") {
            None => default,
            Some(Value::String(s)) => s.parse().unwrap_or_else(|_| {
                self.bad("experiment", "seed", format!("not an unsigned 64-bit integer: {s:?}"));
                default
            }),
            Some(_) => self.u64("experiment", "seed", default),
        }
    }

    fn absorb(&mut self, section: &str, r: Result<()>) {
        if let Err(e) = r {
            for msg in e.message().split("; ") {
                self.errs.push(format!("{section}: {msg}"));
            }
        }
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(format!("malformed config: {}", e.message())))?;
    let mut r = Reader {
        doc: &doc,
        errs: Vec::new(),
    };

    for (name, value) in &doc {
        let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| s == name) else {
            r.errs.push(format!("{name}: unknown section"));
            continue;
        };
        let Some(table) = value.as_table() else {
            r.errs.push(format!("{name}: expected a section"));
            continue;
        };
        for key in table.keys() {
            if !keys.contains(&key.as_str()) {
                r.errs.push(format!("{name}.{key}: unknown key"));
            }
        }
    }

    let d = ExperimentConfig::default();
    let mut cfg = ExperimentConfig::default();

    const EX: &str = "experiment";
    if let Some(s) = r.str(EX, "scheme") {
        cfg.scheme = parse_scheme(s);
        if cfg.scheme.is_none() {
            r.bad(EX, "scheme", format!("must be one of dco_ofdm, lfm_cpm, ppm; got {s:?}"));
        }
    }
    cfg.snr_db_grid = r.f64_list(EX, "snr_db_grid");
    if let Some(s) = r.str(EX, "snr_convention") {
        match parse_convention(s) {
            Some(c) => cfg.convention = c,
            None => r.bad(
                EX,
                "snr_convention",
                format!("must be electrical_ac or optical_total; got {s:?}"),
            ),
        }
    }
    cfg.seed = r.seed(d.seed);
    cfg.common_random_numbers = r.bool(EX, "common_random_numbers", d.common_random_numbers);
    cfg.stop = StopRule {
        min_bits: r.u64(EX, "min_bits", d.stop.min_bits),
        min_trials: r.u64(EX, "min_trials", d.stop.min_trials),
        max_trials: r.u64(EX, "max_trials", d.stop.max_trials),
        target_errors: r.u64(EX, "target_errors", d.stop.target_errors),
    };

    const CH: &str = "channel";
    let dc = d.channel;
    cfg.channel = SweepChannel {
        comm_gain: r.f64(CH, "comm_gain", dc.comm_gain),
        distance_min_m: r.f64(CH, "distance_min_m", dc.distance_min_m),
        distance_max_m: r.f64(CH, "distance_max_m", dc.distance_max_m),
        reflectance: r.f64(CH, "reflectance", dc.reflectance),
        aperture_gain_m2: r.f64(CH, "aperture_gain_m2", dc.aperture_gain_m2),
        sample_rate_hz: r.f64(CH, "sample_rate_hz", dc.sample_rate_hz),
        responsivity: r.f64(CH, "responsivity_a_per_w", dc.responsivity),
        sensing_snr_offset_db: r.f64(CH, "sensing_snr_offset_db", dc.sensing_snr_offset_db),
    };
    let fs = cfg.channel.sample_rate_hz;

    const OF: &str = "dco_ofdm";
    let od = d.dco_ofdm;
    let qam = r.u64(OF, "qam_order", u64::from(od.qam_order.order()));
    let qam_order = match QamOrder::from_order(qam.min(u64::from(u32::MAX)) as u32) {
        Ok(q) => q,
        Err(e) => {
            r.bad(OF, "qam_order", e.message());
            od.qam_order
        }
    };
    cfg.dco_ofdm = OfdmConfig {
        n_fft: r.usize(OF, "n_fft", od.n_fft),
        cp_len: r.usize(OF, "cp_len", od.cp_len),
        qam_order,
        bias_factor: r.f64(OF, "bias_factor", od.bias_factor),
        n_symbols: r.usize(OF, "n_symbols", od.n_symbols),
    };

    const LF: &str = "lfm_cpm";
    let n_lfm = r.usize(LF, "n_symbols", DEFAULT_LFM_SYMBOLS);
    let mut lfm = LfmCpmConfig::with_defaults(n_lfm.max(1), fs);
    lfm.n_symbols = n_lfm;
    lfm.samples_per_symbol = r.usize(LF, "samples_per_symbol", lfm.samples_per_symbol);
    lfm.mod_index = ModIndex {
        num: r.u64(LF, "mod_index_num", u64::from(lfm.mod_index.num)).min(u64::from(u32::MAX)) as u32,
        den: r.u64(LF, "mod_index_den", u64::from(lfm.mod_index.den)).min(u64::from(u32::MAX)) as u32,
    };
    // The default sweep spans a quarter of the sample rate over the frame.
    lfm.chirp_rate_hz_per_s = r
        .opt_f64(LF, "chirp_rate_hz_per_s")
        .unwrap_or_else(|| fs / 4.0 / lfm.frame_duration_s());
    lfm.intermediate_freq_hz = r.f64(LF, "intermediate_freq_hz", lfm.intermediate_freq_hz);
    lfm.bias_factor = r.f64(LF, "bias_factor", lfm.bias_factor);
    cfg.lfm_cpm = lfm;

    const PP: &str = "ppm";
    let pd = d.ppm;
    let spread_default = pd.spreading.unwrap_or(Spreading { degree: 6, phase: 0 });
    let spreading = r.bool(PP, "spreading", pd.spreading.is_some());
    let degree = r.u64(PP, "msequence_degree", u64::from(spread_default.degree));
    let phase = r.usize(PP, "code_phase", spread_default.phase);
    if !spreading && (r.get(PP, "msequence_degree").is_some() || r.get(PP, "code_phase").is_some()) {
        r.errs
            .push("ppm: msequence_degree and code_phase need spreading = true".to_string());
    }
    cfg.ppm = PpmConfig {
        slots_per_symbol: r.usize(PP, "slots_per_symbol", pd.slots_per_symbol),
        samples_per_chip: r.usize(PP, "samples_per_chip", pd.samples_per_chip),
        n_symbols: r.usize(PP, "n_symbols", pd.n_symbols),
        spreading: spreading.then_some(Spreading {
            degree: degree.min(u64::from(u32::MAX)) as u32,
            phase,
        }),
        pulse_amplitude: r.f64(PP, "pulse_amplitude", pd.pulse_amplitude),
    };

    if let Some(k) = r.f64_list("scan", "bias_factors") {
        cfg.bias_factors = k;
    }

    const AL: &str = "allocation";
    if r.has_section(AL) {
        let gains_comm = r.f64_list(AL, "gains_comm");
        let gains_sense = r.f64_list(AL, "gains_sense");
        match (gains_comm, gains_sense) {
            (Some(gc), Some(gs)) => {
                let p = AllocationProblem {
                    gains_comm: gc,
                    gains_sense: gs,
                    noise_variance: r.f64(AL, "noise_power_w", 1.0),
                    total_power: r.f64(AL, "total_power_w", 1.0),
                    weight: r.f64(AL, "weight", 0.5),
                };
                let v = p.validate();
                r.absorb(AL, v);
                cfg.allocation = Some(p);
            }
            (gc, gs) => {
                if gc.is_none() {
                    r.bad(AL, "gains_comm", "required");
                }
                if gs.is_none() {
                    r.bad(AL, "gains_sense", "required");
                }
            }
        }
    }

    if let Some(dir) = r.str("output", "dir") {
        cfg.output_dir = Some(dir.to_string());
    }
    cfg.include_baseband = r.bool("dump", "include_baseband", d.include_baseband);

    if r.errs.is_empty() {
        cfg.check(&mut r.errs);
    }
    if r.errs.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(r.errs.join("\n")))
    }
}

impl ExperimentConfig {
    fn check(&self, errs: &mut Vec<String>) {
        let mut r = Reader {
            doc: &Table::new(),
            errs: Vec::new(),
        };
        r.absorb("dco_ofdm", self.dco_ofdm.validate());
        r.absorb("lfm_cpm", self.lfm_cpm.validate());
        r.absorb("ppm", self.ppm.validate());
        if let Some(grid) = &self.snr_db_grid {
            if grid.is_empty() {
                r.bad("experiment", "snr_db_grid", "must not be empty");
            }
            if grid.iter().any(|s| s.is_nan()) {
                r.bad("experiment", "snr_db_grid", "contains NaN");
            }
            if grid.windows(2).any(|w| !(w[1] > w[0])) {
                r.errs.push("experiment.snr_db_grid: snr_db_grid must be strictly increasing".to_string());
            }
        }
        if self.bias_factors.is_empty() || self.bias_factors.iter().any(|k| !(*k >= 0.0 && k.is_finite())) {
            r.bad("scan", "bias_factors", "must be a non-empty list of finite values >= 0");
        }
        if let (Some(scheme), Some(_)) = (self.scheme, &self.snr_db_grid) {
            if r.errs.is_empty() {
                let spec = self.sweep_spec_for(scheme);
                if let Some(spec) = spec {
                    r.absorb("experiment", spec.validate());
                }
            }
        }
        errs.append(&mut r.errs);
    }

    pub fn scheme_config(&self, scheme: SchemeKind) -> SchemeConfig {
        match scheme {
            SchemeKind::DcoOfdm => SchemeConfig::DcoOfdm(self.dco_ofdm),
            SchemeKind::LfmCpm => SchemeConfig::LfmCpm(self.lfm_cpm),
            SchemeKind::Ppm => SchemeConfig::Ppm(self.ppm),
        }
    }

    fn sweep_spec_for(&self, scheme: SchemeKind) -> Option<SweepSpec> {
        Some(SweepSpec {
            scheme: self.scheme_config(scheme),
            channel: self.channel,
            snr_db: self.snr_db_grid.clone()?,
            convention: self.convention,
            stop: self.stop,
            master_seed: self.seed,
            common_random_numbers: self.common_random_numbers,
        })
    }

    /// The sweep described by this configuration. Needs `experiment.scheme`
    /// and `experiment.snr_db_grid`.
    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let mut missing = Vec::new();
        if self.scheme.is_none() {
            missing.push("experiment.scheme: required");
        }
        if self.snr_db_grid.is_none() {
            missing.push("experiment.snr_db_grid: required");
        }
        if !missing.is_empty() {
            return Err(Error::Config(missing.join("\n")));
        }
        let spec = self.sweep_spec_for(self.scheme.unwrap_or(SchemeKind::DcoOfdm)).expect("grid present");
        spec.validate()?;
        Ok(spec)
    }

    /// Renders the configuration with every default filled in. Parsing the
    /// result yields an identical configuration.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let f = |x: f64| fmt_f64(x);
        let list = |v: &[f64]| {
            let items: Vec<String> = v.iter().map(|&x| fmt_f64(x)).collect();
            format!("[{}]", items.join(", "))
        };
        let _ = writeln!(s, "[experiment]");
        if let Some(k) = self.scheme {
            let _ = writeln!(s, "scheme = \"{}\"", k.as_str());
        }
        if let Some(g) = &self.snr_db_grid {
            let _ = writeln!(s, "snr_db_grid = {}", list(g));
        }
        let _ = writeln!(s, "snr_convention = \"{}\"", self.convention.as_str());
        if self.seed <= i64::MAX as u64 {
            let _ = writeln!(s, "seed = {}", self.seed);
        } else {
            let _ = writeln!(s, "seed = \"{}\"", self.seed);
        }
        let _ = writeln!(s, "common_random_numbers = {}", self.common_random_numbers);
        let st = &self.stop;
        let _ = writeln!(s, "min_bits = {}", st.min_bits);
        let _ = writeln!(s, "min_trials = {}", st.min_trials);
        let _ = writeln!(s, "max_trials = {}", st.max_trials);
        let _ = writeln!(s, "target_errors = {}", st.target_errors);

        let c = &self.channel;
        let _ = writeln!(s, "\n[channel]");
        let _ = writeln!(s, "comm_gain = {}", f(c.comm_gain));
        let _ = writeln!(s, "distance_min_m = {}", f(c.distance_min_m));
        let _ = writeln!(s, "distance_max_m = {}", f(c.distance_max_m));
        let _ = writeln!(s, "reflectance = {}", f(c.reflectance));
        let _ = writeln!(s, "aperture_gain_m2 = {}", f(c.aperture_gain_m2));
        let _ = writeln!(s, "sample_rate_hz = {}", f(c.sample_rate_hz));
        let _ = writeln!(s, "responsivity_a_per_w = {}", f(c.responsivity));
        let _ = writeln!(s, "sensing_snr_offset_db = {}", f(c.sensing_snr_offset_db));

        let o = &self.dco_ofdm;
        let _ = writeln!(s, "\n[dco_ofdm]");
        let _ = writeln!(s, "n_fft = {}", o.n_fft);
        let _ = writeln!(s, "cp_len = {}", o.cp_len);
        let _ = writeln!(s, "qam_order = {}", o.qam_order.order());
        let _ = writeln!(s, "bias_factor = {}", f(o.bias_factor));
        let _ = writeln!(s, "n_symbols = {}", o.n_symbols);

        let l = &self.lfm_cpm;
        let _ = writeln!(s, "\n[lfm_cpm]");
        let _ = writeln!(s, "samples_per_symbol = {}", l.samples_per_symbol);
        let _ = writeln!(s, "n_symbols = {}", l.n_symbols);
        let _ = writeln!(s, "mod_index_num = {}", l.mod_index.num);
        let _ = writeln!(s, "mod_index_den = {}", l.mod_index.den);
        let _ = writeln!(s, "chirp_rate_hz_per_s = {}", f(l.chirp_rate_hz_per_s));
        let _ = writeln!(s, "intermediate_freq_hz = {}", f(l.intermediate_freq_hz));
        let _ = writeln!(s, "bias_factor = {}", f(l.bias_factor));

        let p = &self.ppm;
        let _ = writeln!(s, "\n[ppm]");
        let _ = writeln!(s, "slots_per_symbol = {}", p.slots_per_symbol);
        let _ = writeln!(s, "samples_per_chip = {}", p.samples_per_chip);
        let _ = writeln!(s, "n_symbols = {}", p.n_symbols);
        let _ = writeln!(s, "spreading = {}", p.spreading.is_some());
        if let Some(sp) = p.spreading {
            let _ = writeln!(s, "msequence_degree = {}", sp.degree);
            let _ = writeln!(s, "code_phase = {}", sp.phase);
        }
        let _ = writeln!(s, "pulse_amplitude = {}", f(p.pulse_amplitude));

        let _ = writeln!(s, "\n[scan]");
        let _ = writeln!(s, "bias_factors = {}", list(&self.bias_factors));

        if let Some(a) = &self.allocation {
            let _ = writeln!(s, "\n[allocation]");
            let _ = writeln!(s, "gains_comm = {}", list(&a.gains_comm));
            let _ = writeln!(s, "gains_sense = {}", list(&a.gains_sense));
            let _ = writeln!(s, "noise_power_w = {}", f(a.noise_variance));
            let _ = writeln!(s, "total_power_w = {}", f(a.total_power));
            let _ = writeln!(s, "weight = {}", f(a.weight));
        }
        if let Some(dir) = &self.output_dir {
            let _ = writeln!(s, "\n[output]");
            let _ = writeln!(s, "dir = {}", Value::String(dir.clone()));
        }
        let _ = writeln!(s, "\n[dump]");
        let _ = writeln!(s, "include_baseband = {}", self.include_baseband);
        s
    }
}

/// Shortest round-tripping float literal that TOML reads back as a float.
pub(crate) fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    let s = format!("{x:?}");
    if s.contains(['.', 'e', 'E']) {
        s
    } else {
        format!("{s}.0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[experiment]\nscheme = \"dco_ofdm\"\nsnr_db_grid = [0, 5, 10]\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        let o = cfg.dco_ofdm;
        assert_eq!((o.n_fft, o.cp_len, o.bias_factor, o.qam_order), (256, 64, 3.0, QamOrder::Qam4));
        assert_eq!(cfg.scheme, Some(SchemeKind::DcoOfdm));
        assert_eq!(cfg.sweep_spec().unwrap().snr_db, vec![0.0, 5.0, 10.0]);
    }

    #[test]
    fn grid_order_is_checked() {
        let e = parse_config("[experiment]\nscheme = \"ppm\"\nsnr_db_grid = [10, 5]\n").unwrap_err();
        assert!(e.to_string().contains("snr_db_grid must be strictly increasing"));
    }

    #[test]
    fn qam_order_error_lists_allowed_values() {
        let e = parse_config(&format!("{MINIMAL}[dco_ofdm]\nqam_order = 8\n")).unwrap_err();
        assert!(e.to_string().contains("{4, 16}"), "{e}");
    }

    #[test]
    fn all_violations_are_reported() {
        let text = "[experiment]\nscheme = \"qpsk\"\nbogus = 1\n[channel]\nreflectance = \"high\"\n[extra]\n";
        let msg = parse_config(text).unwrap_err().to_string();
        for needle in ["experiment.scheme", "experiment.bogus: unknown key", "channel.reflectance", "extra: unknown section"] {
            assert!(msg.contains(needle), "missing {needle:?} in {msg}");
        }
        assert_eq!(msg.lines().count(), 4);
    }

    #[test]
    fn sweep_needs_scheme_and_grid() {
        let cfg = parse_config("[dco_ofdm]\nqam_order = 16\n").unwrap();
        let msg = cfg.sweep_spec().unwrap_err().to_string();
        assert!(msg.contains("experiment.scheme") && msg.contains("experiment.snr_db_grid"));
    }

    #[test]
    fn rendered_config_round_trips() {
        let text = format!(
            "{MINIMAL}seed = 18446744073709551615\n[allocation]\ngains_comm = [1, 4]\ngains_sense = [0.5, 0.1]\n[output]\ndir = \"out dir\"\n[ppm]\nspreading = false\n"
        );
        // Integers above the TOML range must be quoted.
        assert!(parse_config(&text).is_err());
        let text = text.replace("18446744073709551615", "\"18446744073709551615\"");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.seed, u64::MAX);
        let again = parse_config(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
        let lfm = parse_config(&format!("{MINIMAL}[experiment]\n")).unwrap_err();
        assert!(lfm.to_string().contains("malformed"));
    }

    #[test]
    fn geometry_beyond_prefix_is_rejected() {
        let e = parse_config(&format!("{MINIMAL}[channel]\ndistance_max_m = 30.0\n")).unwrap_err();
        assert!(e.to_string().contains("cp_len"), "{e}");
    }

    #[test]
    fn float_literals() {
        assert_eq!(fmt_f64(1e9), "1000000000.0");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(1e-7), "1e-7");
    }
}
