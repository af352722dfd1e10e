mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_counts, parse_schemes, Mode, Settings};
use secure_ia::ia::Scheme;

/// Interference-alignment transceivers for MIMO networks with an eavesdropper.
#[derive(Debug, Parser)]
#[command(name = "secure-ia", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the WSLM and ZFWS feasibility conditions for a system.
    Feasible(SystemArgs),
    /// Align one random channel realization and write its leakage trace.
    Converge(ConvergeArgs),
    /// Monte-Carlo average secrecy sum rate versus SNR or eavesdropper antennas.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Named system: 9963, 9993, 151593, 15151833, 6642, 9933, 151533.
    #[arg(long)]
    preset: Option<String>,
    /// `key = value` settings file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Section of the settings file to apply on top of its global keys.
    #[arg(long, requires = "config")]
    section: Option<String>,
    /// Number of user pairs.
    #[arg(long = "K", value_name = "K")]
    users: Option<usize>,
    /// Transmit antennas per user.
    #[arg(long = "M", value_name = "M")]
    tx_antennas: Option<usize>,
    /// Receive antennas per user.
    #[arg(long = "N", value_name = "N")]
    rx_antennas: Option<usize>,
    /// Eavesdropper antennas.
    #[arg(long = "Ne", value_name = "NE")]
    eve_antennas: Option<usize>,
    /// Streams per user.
    #[arg(long = "d", value_name = "D")]
    streams: Option<usize>,
}

#[derive(Debug, Args)]
struct IterationArgs {
    /// Iteration cap.
    #[arg(long)]
    kappa_max: Option<usize>,
    /// Stop once the leakage is at or below this value.
    #[arg(long)]
    eps_leakage: Option<f64>,
    /// Seed of all randomness.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    iteration: IterationArgs,
    /// conventional, wslm or zfws.
    #[arg(long, value_parser = |s: &str| s.parse::<Scheme>())]
    scheme: Option<Scheme>,
    /// Operating SNR in dB (default 30).
    #[arg(long)]
    snr: Option<f64>,
    /// Trace file (default trace.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    iteration: IterationArgs,
    /// Sweep SNR or eavesdropper antennas.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Comma-separated schemes, or `all` (the default).
    #[arg(long, value_parser = parse_schemes)]
    scheme: Option<::std::vec::Vec<Scheme>>,
    /// First SNR point in dB (default 0).
    #[arg(long)]
    snr_min: Option<f64>,
    /// Last SNR point in dB (default 50).
    #[arg(long)]
    snr_max: Option<f64>,
    /// SNR grid spacing in dB (default 5).
    #[arg(long)]
    snr_step: Option<f64>,
    /// Single SNR point in dB (the Ne sweep defaults to 30).
    #[arg(long)]
    snr: Option<f64>,
    /// Eavesdropper antenna counts, e.g. `3,6,9` or `3..12`.
    #[arg(long, value_parser = parse_counts)]
    ne: Option<::std::vec::Vec<usize>>,
    /// Channel realizations per grid point (default 200).
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory (default current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all logical processors).
    #[arg(long)]
    jobs: Option<usize>,
    /// Re-run the alignment at every SNR point instead of rescaling.
    #[arg(long)]
    validate_scaling: bool,
}

impl SystemArgs {
    fn settings(&self) -> Settings {
        Settings {
            preset: self.preset.clone(),
            users: self.users,
            tx_antennas: self.tx_antennas,
            rx_antennas: self.rx_antennas,
            eve_antennas: self.eve_antennas,
            streams: self.streams,
            ..Settings::default()
        }
    }

    /// File settings overlaid by everything given on the command line.
    fn merge(&self, flags: Settings) -> Result<Settings, config::UsageError> {
        let file = match &self.config {
            Some(path) => config::load_config(path, self.section.as_deref())?,
            None => Settings::default(),
        };
        Ok(file.overlay(flags))
    }
}

impl IterationArgs {
    fn apply(&self, s: Settings) -> Settings {
        Settings {
            kappa_max: self.kappa_max,
            eps_leakage: self.eps_leakage,
            seed: self.seed,
            ..s
        }
    }
}

fn resolve(cmd: &Command) -> Result<Settings, config::UsageError> {
    match cmd {
        Command::Feasible(sys) => sys.merge(sys.settings()),
        Command::Converge(a) => {
            let flags = Settings {
                schemes: a.scheme.map(|s| vec![s]),
                snr: a.snr,
                out: a.out.clone(),
                ..a.iteration.apply(a.system.settings())
            };
            a.system.merge(flags)
        }
        Command::Sweep(a) => {
            let flags = Settings {
                mode: a.mode,
                schemes: a.scheme.clone(),
                snr: a.snr,
                snr_min: a.snr_min,
                snr_max: a.snr_max,
                snr_step: a.snr_step,
                ne_points: a.ne.clone(),
                trials: a.trials,
                out: a.out.clone(),
                jobs: a.jobs,
                validate_scaling: a.validate_scaling.then_some(true),
                ..a.iteration.apply(a.system.settings())
            };
            a.system.merge(flags)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SECURE_IA_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let settings = match resolve(&cli.command) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Feasible(_) => commands::feasible(&settings),
        Command::Converge(_) => commands::converge(&settings),
        Command::Sweep(_) => commands::sweep(&settings),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
