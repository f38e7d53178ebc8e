//! Batch CLI over the experiment harness: one subcommand per experiment,
//! flat key = value config files, CSV on stdout or `--out`.

use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use onebit_mimo::harness::{
    run_alpha_sweep, run_moments, run_regions, run_scatter, run_ser, write_regions_csv,
    write_scatter_csv, write_ser_csv, SimConfig, Sweep,
};

#[derive(Parser)]
#[command(
    name = "onebit-mimo",
    about = "Monte Carlo experiments for the 1-bit ADC massive MIMO uplink",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form symbol moments at one operating point
    Moments(CommonArgs),
    /// SER against transmit SNR
    SerVsSnr(CommonArgs),
    /// SER against pilot length
    SerVsTau(CommonArgs),
    /// SER against the detection weight exponent (common random numbers)
    SerVsAlpha(CommonArgs),
    /// Estimated-symbol samples per transmit symbol, plus analytic centers
    Scatter(CommonArgs),
    /// Detection-region classification over a grid
    Regions(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file with one `key = value` per line
    #[arg(long)]
    config: Option<PathBuf>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials (per grid point, or per symbol for scatter)
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Output CSV path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of BS antennas M
    #[arg(long)]
    m: Option<usize>,
    /// Pilot length tau
    #[arg(long)]
    tau: Option<usize>,
    /// Transmit SNR grid in dB, comma-separated
    #[arg(long)]
    snr_db: Option<String>,
    /// Detection weight exponent alpha in [0, 1]
    #[arg(long)]
    alpha: Option<f64>,
    /// Constellation: 16qam, qpsk, or an explicit complex list
    #[arg(long)]
    constellation: Option<String>,
    /// Pilot: dft2 or an explicit unit-modulus complex list
    #[arg(long)]
    pilot: Option<String>,
    /// Pilot length grid for ser-vs-tau, comma-separated
    #[arg(long)]
    tau_grid: Option<String>,
    /// Alpha grid for ser-vs-alpha, comma-separated
    #[arg(long)]
    alpha_grid: Option<String>,
    /// Region grid resolution per axis
    #[arg(long)]
    grid_n: Option<usize>,
    /// Region half extent (default: 1.5x the largest center magnitude)
    #[arg(long)]
    half_extent: Option<f64>,
}

impl CommonArgs {
    fn into_config(self, sweep: Sweep) -> onebit_mimo::Result<SimConfig> {
        let mut config = match &self.config {
            Some(path) => SimConfig::from_file(path)?,
            None => SimConfig::default(),
        };
        config.sweep = sweep;
        let mut set = |key: &str, value: Option<String>| -> onebit_mimo::Result<()> {
            if let Some(v) = value {
                config.set(key, &v)?;
            }
            Ok(())
        };
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("trials", self.trials.map(|v| v.to_string()))?;
        set("threads", self.threads.map(|v| v.to_string()))?;
        set("m", self.m.map(|v| v.to_string()))?;
        set("tau", self.tau.map(|v| v.to_string()))?;
        set("snr_db", self.snr_db)?;
        set("alpha", self.alpha.map(|v| v.to_string()))?;
        set("constellation", self.constellation)?;
        set("pilot", self.pilot)?;
        set("tau_grid", self.tau_grid)?;
        set("alpha_grid", self.alpha_grid)?;
        set("grid_n", self.grid_n.map(|v| v.to_string()))?;
        set("half_extent", self.half_extent.map(|v| v.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

fn open_output(path: &Option<PathBuf>) -> std::io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> onebit_mimo::Result<()> {
    let (sweep, args) = match cli.command {
        Command::Moments(a) => (Sweep::Moments, a),
        Command::SerVsSnr(a) => (Sweep::Snr, a),
        Command::SerVsTau(a) => (Sweep::Tau, a),
        Command::SerVsAlpha(a) => (Sweep::Alpha, a),
        Command::Scatter(a) => (Sweep::Scatter, a),
        Command::Regions(a) => (Sweep::Regions, a),
    };
    let out_path = args.out.clone();
    let config = args.into_config(sweep)?;
    let mut out = open_output(&out_path)?;
    match sweep {
        Sweep::Moments => run_moments(&config)?.write_csv(&mut out)?,
        Sweep::Snr | Sweep::Tau => write_ser_csv(&run_ser(&config)?, &mut out)?,
        Sweep::Alpha => write_ser_csv(&run_alpha_sweep(&config)?, &mut out)?,
        Sweep::Scatter => write_scatter_csv(&run_scatter(&config)?, &mut out)?,
        Sweep::Regions => write_regions_csv(&run_regions(&config)?, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
