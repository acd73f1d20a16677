use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use scckm::config::{parse_ebn0_list, Settings};
use scckm::report::{emit_csv, write_csv_file};
use scckm::sim::{run_sweep, Scheme};
use scckm::{Error, Result};

/// Monte Carlo BER sweeps for SCCKM and SM over MIMO-OFDM.
#[derive(Debug, Parser)]
#[command(name = "scckm-sim", version)]
struct Args {
    /// key=value file; flags given on the command line take precedence
    #[arg(long)]
    config: Option<PathBuf>,

    /// scck2, scck4, scck8, sm-bpsk or sm-4qam
    #[arg(long)]
    scheme: Option<String>,

    #[arg(long)]
    ntx: Option<usize>,

    #[arg(long)]
    nrx: Option<usize>,

    /// start:step:stop (inclusive) or a comma list, in dB
    #[arg(long, allow_hyphen_values = true)]
    ebn0: Option<String>,

    #[arg(long)]
    frames: Option<usize>,

    /// OFDM symbols per frame
    #[arg(long)]
    symbols: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long)]
    taps: Option<usize>,

    #[arg(long)]
    nsub: Option<usize>,

    #[arg(long)]
    cp: Option<usize>,

    /// stop a point once this many bit errors were counted
    #[arg(long)]
    max_bit_errors: Option<u64>,

    /// SM detector: joint-ml (default) or zf
    #[arg(long)]
    sm_receiver: Option<String>,

    /// worker threads (results do not depend on it)
    #[arg(long)]
    threads: Option<usize>,

    /// print the codebook of an SCCKM scheme as CSV and exit
    #[arg(long, value_name = "SCHEME")]
    export_codebook: Option<String>,
}

impl Args {
    fn settings(&self) -> Result<Settings> {
        Ok(Settings {
            scheme: self.scheme.as_deref().map(str::parse).transpose()?,
            ntx: self.ntx,
            nrx: self.nrx,
            ebn0: self.ebn0.as_deref().map(parse_ebn0_list).transpose()?,
            frames: self.frames,
            symbols: self.symbols,
            seed: self.seed,
            out: self.out.clone(),
            taps: self.taps,
            nsub: self.nsub,
            cp: self.cp,
            max_bit_errors: self.max_bit_errors,
            sm_receiver: self.sm_receiver.as_deref().map(str::parse).transpose()?,
            threads: self.threads,
        })
    }
}

fn export_codebook(name: &str) -> Result<()> {
    let scheme: Scheme = name.parse()?;
    let cb = scheme
        .codebook()
        .ok_or_else(|| Error::InvalidArgument(format!("{scheme} has no codebook")))?;
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    cb.write_csv(&mut lock)?;
    lock.flush()?;
    Ok(())
}

fn run(args: Args) -> Result<()> {
    if let Some(name) = &args.export_codebook {
        return export_codebook(name);
    }
    let base = match &args.config {
        Some(path) => Settings::from_kv(&fs::read_to_string(path)?)?,
        None => Settings::default(),
    };
    let settings = base.overlay(args.settings()?);
    let config = settings.to_config()?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = settings.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be >= 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let curve = pool.install(|| run_sweep(&config))?;

    match &settings.out {
        Some(path) => write_csv_file(&curve, path),
        None => emit_csv(&curve, io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scckm-sim: {e}");
            ExitCode::FAILURE
        }
    }
}
