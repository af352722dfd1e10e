use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use secure_ia::channel::{ConfigError, SystemConfig};
use secure_ia::harness::{
    default_snr_grid, preset, preset_names, run_convergence, run_ne_sweep, run_snr_sweep,
    write_aggregates_csv, write_csv, write_gnuplot_script, write_improvement_csv, write_trace_csv,
    ExperimentSpec, HarnessError, DEFAULT_TRIALS, SCALING_TOL,
};
use secure_ia::ia::{wslm_feasible, zfws_feasible, IaError, IaOptions, Scheme};

use crate::config::{snr_grid, Mode, Settings, UsageError};

/// Operating point of `converge` and of the Ne sweep when none is given.
const DEFAULT_SNR_DB: f64 = 30.0;

#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Usage(_) => 2,
            CommandError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Usage(msg) => f.write_str(msg),
            CommandError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<UsageError> for CommandError {
    fn from(e: UsageError) -> Self {
        CommandError::Usage(e.0)
    }
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Usage(e.to_string())
    }
}

impl From<HarnessError> for CommandError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Spec(_)
            | HarnessError::Config(_)
            | HarnessError::Ia(IaError::Options(_)) => CommandError::Usage(e.to_string()),
            other => CommandError::Runtime(other.into()),
        }
    }
}

type Result<T> = std::result::Result<T, CommandError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CommandError::Usage(msg.into()))
}

/// System dimensions from the preset (if any) with explicit values on top.
fn system(s: &Settings) -> Result<SystemConfig> {
    let base = match &s.preset {
        Some(name) => Some(preset(name).ok_or_else(|| {
            let known: Vec<_> = preset_names().collect();
            CommandError::Usage(format!(
                "unknown preset {name:?} (known: {})",
                known.join(", ")
            ))
        })?),
        None => None,
    };
    let pick = |flag: Option<usize>, from_preset: Option<usize>, name: &str| {
        flag.or(from_preset)
            .ok_or_else(|| CommandError::Usage(format!("--{name} is required without --preset")))
    };
    let c = base.map(|p| p.config);
    let users = pick(s.users, c.map(|c| c.users), "K")?;
    let tx = pick(s.tx_antennas, c.map(|c| c.tx_antennas), "M")?;
    let rx = pick(s.rx_antennas, c.map(|c| c.rx_antennas), "N")?;
    let streams = pick(s.streams, c.map(|c| c.streams), "d")?;
    let first_swept = s.ne_points.as_ref().and_then(|v| v.first().copied());
    let eve = pick(
        s.eve_antennas,
        c.map(|c| c.eve_antennas).or(first_swept),
        "Ne",
    )?;
    Ok(SystemConfig::new(users, tx, rx, eve, streams)?)
}

fn options(s: &Settings) -> Result<IaOptions> {
    let defaults = IaOptions::default();
    let opts = IaOptions {
        max_iterations: s.kappa_max.unwrap_or(defaults.max_iterations),
        eps_leakage: s.eps_leakage.unwrap_or(defaults.eps_leakage),
        init_seed: s.seed.unwrap_or(0),
        ..defaults
    };
    opts.validate()
        .map_err(|e| CommandError::Usage(e.to_string()))?;
    Ok(opts)
}

fn runtime(e: impl Into<anyhow::Error>) -> CommandError {
    CommandError::Runtime(e.into())
}

pub fn feasible(s: &Settings) -> Result<()> {
    let cfg = system(s)?;
    let w = wslm_feasible(&cfg);
    let z = zfws_feasible(&cfg);
    println!("system {cfg}");
    println!("  wslm variables Nv             {}", w.variables);
    println!("  wslm equations Neq            {}", w.equations);
    println!(
        "  wslm K(M+N)-(K^2+1)d >= Ne(K-1)  {} >= {}  {}",
        w.condition_lhs,
        w.condition_rhs,
        w.condition_lhs >= w.condition_rhs
    );
    println!(
        "  wslm Ne >= d                  {}",
        cfg.eve_antennas >= cfg.streams
    );
    println!(
        "  zfws M-d >= Ne                {} >= {}  {}",
        cfg.tx_antennas as i64 - cfg.streams as i64,
        cfg.eve_antennas,
        z.antenna_ok
    );
    println!(
        "  zfws N >= Kd                  {} >= {}  {}",
        cfg.rx_antennas,
        cfg.users * cfg.streams,
        z.subspace_ok
    );
    println!("wslm={} zfws={}", w.feasible, z.feasible);
    Ok(())
}

pub fn converge(s: &Settings) -> Result<()> {
    let scheme = match s.schemes.as_deref() {
        Some([one]) => *one,
        Some(_) => return usage("converge takes exactly one --scheme"),
        None => return usage("--scheme is required"),
    };
    let snr = s.snr.unwrap_or(DEFAULT_SNR_DB);
    let cfg = system(s)?.with_snr_db(snr);
    cfg.validate()?;
    let opts = options(s)?;
    let seed = s.seed.unwrap_or(0);
    let (sol, trace) = match run_convergence(&cfg, scheme, &opts, seed) {
        Ok(r) => r,
        Err(HarnessError::Ia(e @ IaError::Infeasible { .. })) => return Err(runtime(e)),
        Err(e) => return Err(e.into()),
    };
    let out = s.out.clone().unwrap_or_else(|| PathBuf::from("trace.csv"));
    write_trace_csv(&trace, &out).map_err(runtime)?;
    println!("system {cfg} at {snr} dB, scheme {scheme}, seed {seed}");
    if sol.best_effort {
        println!("note: M - d < Ne, so the wiretap channel is only minimized, not nulled");
    }
    println!(
        "termination={} iterations={} final_leakage={:e}",
        trace.termination,
        trace.iterations(),
        trace.final_leakage()
    );
    println!("trace written to {}", out.display());
    Ok(())
}

fn snr_points(s: &Settings, mode: Mode) -> Result<Vec<f64>> {
    let ranged = s.snr_min.is_some() || s.snr_max.is_some() || s.snr_step.is_some();
    if ranged && s.snr.is_some() {
        return usage("--snr cannot be combined with --snr-min/--snr-max/--snr-step");
    }
    if let Some(p) = s.snr {
        return Ok(vec![p]);
    }
    if !ranged {
        return Ok(match mode {
            Mode::Snr => default_snr_grid(),
            Mode::Ne => vec![DEFAULT_SNR_DB],
        });
    }
    Ok(snr_grid(
        s.snr_min.unwrap_or(0.0),
        s.snr_max.unwrap_or(50.0),
        s.snr_step.unwrap_or(5.0),
    )?)
}

fn output_dir(s: &Settings) -> Result<PathBuf> {
    let dir = s.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| runtime(anyhow::anyhow!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn sweep(s: &Settings) -> Result<()> {
    let mode = s.mode.unwrap_or(Mode::Snr);
    let mut cfg = system(s)?;
    let ne_points = match mode {
        Mode::Snr if s.ne_points.is_some() => return usage("--ne needs --mode ne"),
        Mode::Snr => None,
        Mode::Ne => {
            let from_preset = s
                .preset
                .as_deref()
                .and_then(preset)
                .and_then(|p| p.ne_sweep)
                .map(|(lo, hi)| (lo..=hi).collect::<Vec<_>>());
            match s.ne_points.clone().or(from_preset) {
                Some(v) => Some(v),
                None => return usage("--mode ne needs --ne (or an Ne-sweep preset)"),
            }
        }
    };
    if let Some(first) = ne_points.as_ref().and_then(|v| v.first()) {
        if s.eve_antennas.is_none() {
            cfg = cfg.with_eve_antennas(*first);
        }
    }
    if s.jobs == Some(0) {
        return usage("--jobs must be at least 1");
    }
    if s.trials == Some(0) {
        return usage("--trials must be at least 1");
    }
    let spec = ExperimentSpec {
        config: cfg,
        schemes: s.schemes.clone().unwrap_or_else(|| Scheme::ALL.to_vec()),
        snr_points: snr_points(s, mode)?,
        ne_points,
        trials: s.trials.unwrap_or(DEFAULT_TRIALS),
        master_seed: s.seed.unwrap_or(0),
        opts: options(s)?,
        validate_scaling: s.validate_scaling.unwrap_or(false),
    };
    spec.validate()?;
    let dir = output_dir(s)?;

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = s.jobs {
            b = b.num_threads(j);
        }
        b.build().map_err(runtime)?
    };

    match mode {
        Mode::Snr => {
            let result = pool.install(|| run_snr_sweep(&spec))?;
            let raw = dir.join("snr_raw.csv");
            let agg = dir.join("snr_aggregate.csv");
            let plot = dir.join("snr_plot.gp");
            write_csv(&result, &raw)?;
            write_aggregates_csv(&result, &agg)?;
            write_gnuplot_script(&plot, &file_name(&agg), &spec.schemes, &cfg.to_string())?;
            println!("{cfg}: {} trials, seed {}", spec.trials, spec.master_seed);
            println!(
                "{:<14}{:>8}{:>12}{:>10}{:>6}",
                "scheme", "snr_db", "mean_ssr", "std_ssr", "n"
            );
            for a in &result.aggregates {
                println!(
                    "{:<14}{:>8}{:>12.3}{:>10.3}{:>6}",
                    a.scheme.to_string(),
                    a.snr_db,
                    a.mean_ssr,
                    a.std_ssr,
                    a.n
                );
            }
            if let Some(angle) = result.scaling_check {
                println!("scaling check: largest principal angle {angle:.3e}");
                if angle > SCALING_TOL {
                    return Err(runtime(anyhow::anyhow!(
                        "rescaled and directly aligned precoders differ by {angle:.3e} rad"
                    )));
                }
            }
            println!(
                "wrote {}, {}, {}",
                raw.display(),
                agg.display(),
                plot.display()
            );
        }
        Mode::Ne => {
            let (result, table) = pool.install(|| run_ne_sweep(&spec))?;
            let raw = dir.join("ne_raw.csv");
            let agg = dir.join("ne_aggregate.csv");
            let imp = dir.join("ne_improvement.csv");
            write_csv(&result, &raw)?;
            write_aggregates_csv(&result, &agg)?;
            write_improvement_csv(&table, &imp)?;
            println!(
                "({}x{},Ne,{})^{} at {:?} dB: {} trials, seed {}",
                cfg.tx_antennas,
                cfg.rx_antennas,
                cfg.streams,
                cfg.users,
                spec.snr_points,
                spec.trials,
                spec.master_seed
            );
            println!(
                "{:<14}{:>4}{:>8}{:>13}{:>6}{:>6}",
                "scheme", "ne", "snr_db", "improvement", "wslm", "zfws"
            );
            for r in &table {
                println!(
                    "{:<14}{:>4}{:>8}{:>13.3}{:>6}{:>6}",
                    r.scheme.to_string(),
                    r.ne,
                    r.snr_db,
                    r.improvement,
                    r.wslm_feasible,
                    r.zfws_feasible
                );
            }
            println!(
                "wrote {}, {}, {}",
                raw.display(),
                agg.display(),
                imp.display()
            );
        }
    }
    Ok(())
}
