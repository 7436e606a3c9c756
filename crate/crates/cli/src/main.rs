use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oisac::config::{load_config, parse_scheme, ExperimentConfig};
use oisac::harness::{allocate_power, bias_tradeoff_scan, run_sweep, with_threads};
use oisac::report;
use oisac::selftest::run_selftest;
use oisac::Error;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "oisac", version, about = "Optical ISAC waveform simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a BER/RMSE sweep and write sweep.csv and sweep.meta.
    Sweep(Common),
    /// Sweep DCO-OFDM over the configured bias factors (optical-total SNR).
    ScanBias(Common),
    /// Solve the per-subcarrier power allocation and write alloc.csv.
    Allocate(Common),
    /// Write one transmitted frame to waveform.csv.
    DumpWaveform {
        #[command(flatten)]
        common: Common,
        /// Scheme to dump; defaults to experiment.scheme.
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Run the built-in invariant checks.
    Selftest(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides experiment.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for Monte-Carlo trials.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => load_config(p)?,
            None => return Err(Error::Config("--config <path> is required".into())),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }

    fn out_dir(&self, cfg: &ExperimentConfig) -> Result<PathBuf, Error> {
        let dir = self
            .out
            .clone()
            .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Data(format!("cannot create output directory {}: {e}", dir.display())))?;
        Ok(dir)
    }
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Data(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn meta(command: &str, cfg: &ExperimentConfig) -> String {
    format!("# oisac {VERSION}\n# command: {command}\n{}", cfg.to_toml())
}

fn sweep(c: &Common) -> Result<(), Error> {
    let cfg = c.load()?;
    let spec = cfg.sweep_spec()?;
    let dir = c.out_dir(&cfg)?;
    let result = with_threads(c.threads, || run_sweep(&spec))??;
    write(&dir.join("sweep.csv"), &report::sweep_csv(&result))?;
    write(&dir.join("sweep.meta"), &meta("sweep", &cfg))
}

fn scan_bias(c: &Common) -> Result<(), Error> {
    let cfg = c.load()?;
    let spec = cfg.sweep_spec()?;
    let dir = c.out_dir(&cfg)?;
    let scan = with_threads(c.threads, || bias_tradeoff_scan(&spec, &cfg.bias_factors))??;
    for entry in &scan {
        let csv = report::sweep_csv(&entry.result);
        write(&dir.join(report::bias_scan_file_name(entry.bias_factor)), &csv)?;
    }
    write(&dir.join("scan.csv"), &report::bias_scan_csv(&scan))?;
    write(&dir.join("scan.meta"), &meta("scan-bias", &cfg))
}

fn allocate(c: &Common) -> Result<(), Error> {
    let cfg = c.load()?;
    let Some(problem) = &cfg.allocation else {
        return Err(Error::Config("allocation: section required".into()));
    };
    let dir = c.out_dir(&cfg)?;
    let power = allocate_power(problem)?;
    let kkt = problem.kkt_violation(&power);
    if kkt > 1e-6 {
        return Err(Error::Data(format!("allocation failed the KKT check (violation {kkt:e})")));
    }
    write(
        &dir.join("alloc.csv"),
        &report::alloc_csv(&problem.gains_comm, &problem.gains_sense, &power),
    )
}

fn dump_waveform(c: &Common, scheme: Option<&str>) -> Result<(), Error> {
    let cfg = c.load()?;
    let kind = match scheme {
        Some(s) => parse_scheme(s)
            .ok_or_else(|| Error::Config(format!("--scheme must be dco_ofdm, lfm_cpm or ppm; got {s:?}")))?,
        None => cfg
            .scheme
            .ok_or_else(|| Error::Config("experiment.scheme: required (or pass --scheme)".into()))?,
    };
    let dir = c.out_dir(&cfg)?;
    let dump = report::waveform_dump(&cfg.scheme_config(kind), cfg.channel.sample_rate_hz, cfg.seed)?;
    write(&dir.join("waveform.csv"), &report::waveform_csv(&dump, cfg.include_baseband))
}

fn selftest(c: &Common) -> Result<(), Error> {
    let checks = with_threads(c.threads, run_selftest)?;
    let failed = checks.iter().filter(|k| !k.passed).count();
    for k in &checks {
        println!("{} {}: {}", if k.passed { "ok  " } else { "FAIL" }, k.name, k.detail);
    }
    if failed > 0 {
        return Err(Error::Data(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(c) => sweep(c),
        Command::ScanBias(c) => scan_bias(c),
        Command::Allocate(c) => allocate(c),
        Command::DumpWaveform { common, scheme } => dump_waveform(common, scheme.as_deref()),
        Command::Selftest(c) => selftest(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 2,
                Error::Data(_) => 3,
            })
        }
    }
}
