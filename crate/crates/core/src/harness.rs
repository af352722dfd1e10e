//! Monte-Carlo drivers: convergence traces, SNR sweeps and eavesdropper
//! antenna sweeps, with every scheme run on the same channels per trial.
//!
//! Precoders depend on transmit power only through the common `√(Pt/d)`
//! factor, so each trial aligns once at the largest SNR point and rescales the
//! solution for the other points. `validate_scaling` re-runs the alignment at
//! every point instead and reports the largest principal angle between the two
//! precoder subspaces.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{draw_channels, snr_to_power, trial_seed, ConfigError, SystemConfig};
use crate::ia::{
    evaluate_leakage, run_scheme, wslm_feasible, zfws_feasible, IaError, IaOptions, IaSolution,
    IaTrace, Scheme,
};
use crate::metrics::{secrecy_report, ssr_improvement, MetricsError};
use crate::numerics::{max_principal_angle, Orthonormal};

/// Column layout of the per-trial CSV.
pub const RAW_HEADER: [&str; 14] = [
    "scheme",
    "K",
    "M",
    "N",
    "Ne",
    "d",
    "snr_db",
    "trial",
    "seed",
    "ssr",
    "iterations",
    "final_leakage",
    "wslm_feasible",
    "zfws_feasible",
];

/// Column layout of the aggregate CSV.
pub const AGGREGATE_HEADER: [&str; 6] = ["scheme", "snr_db", "ne", "mean_ssr", "std_ssr", "n"];

pub const IMPROVEMENT_HEADER: [&str; 7] = [
    "scheme",
    "ne",
    "snr_db",
    "improvement",
    "n",
    "wslm_feasible",
    "zfws_feasible",
];

/// Largest principal angle tolerated between aligned-then-rescaled and
/// directly aligned precoders.
pub const SCALING_TOL: f64 = 1e-8;

/// SNR grid used when none is given: 0 to 50 dB in 5 dB steps.
pub fn default_snr_grid() -> Vec<f64> {
    (0..=10).map(|i| 5.0 * i as f64).collect()
}

pub const DEFAULT_TRIALS: usize = 200;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Ia(#[from] IaError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: line {line}: {reason}")]
    Parse {
        path: PathBuf,
        line: u64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Dimensions and noise level; the power is set per SNR point and the
    /// eavesdropper size per `ne_points` entry when those are given.
    pub config: SystemConfig,
    pub schemes: Vec<Scheme>,
    pub snr_points: Vec<f64>,
    pub ne_points: Option<Vec<usize>>,
    pub trials: usize,
    pub master_seed: u64,
    /// Iteration options. The initial-precoder seed of trial `t` is
    /// `trial_seed(channel_seed(t), opts.init_seed)`.
    pub opts: IaOptions,
    pub validate_scaling: bool,
}

impl ExperimentSpec {
    pub fn new(config: SystemConfig, schemes: Vec<Scheme>, snr_points: Vec<f64>) -> Self {
        Self {
            config,
            schemes,
            snr_points,
            ne_points: None,
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            opts: IaOptions::default(),
            validate_scaling: false,
        }
    }

    /// Eavesdropper sizes swept (the template's own when no sweep is set).
    pub fn ne_values(&self) -> Vec<usize> {
        match &self.ne_points {
            Some(v) => v.clone(),
            None => vec![self.config.eve_antennas],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Spec(msg));
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.snr_points.is_empty() {
            return fail("at least one SNR point is required".into());
        }
        if let Some(bad) = self.snr_points.iter().find(|s| !s.is_finite()) {
            return fail(format!("SNR point {bad} is not finite"));
        }
        if self.schemes.is_empty() {
            return fail("at least one scheme is required".into());
        }
        if matches!(&self.ne_points, Some(v) if v.is_empty()) {
            return fail("the Ne sweep is empty".into());
        }
        self.opts.validate()?;
        let d = self.config.streams;
        for ne in self.ne_values() {
            let cfg = self.config.with_eve_antennas(ne);
            cfg.validate()?;
            if cfg.rx_antennas <= d {
                return fail(format!("N = {} must exceed d = {d}", cfg.rx_antennas));
            }
            if self.schemes.contains(&Scheme::Wslm) && ne < d {
                return fail(format!(
                    "WSLM needs Ne >= d, but the sweep contains Ne = {ne} with d = {d}"
                ));
            }
        }
        Ok(())
    }
}

/// Seed of the channels of trial `trial`.
pub fn channel_seed(master_seed: u64, trial: usize) -> u64 {
    trial_seed(master_seed, trial as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub users: usize,
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    pub eve_antennas: usize,
    pub streams: usize,
    pub snr_db: f64,
    pub trial: usize,
    pub seed: u64,
    pub ssr: f64,
    pub iterations: usize,
    pub final_leakage: f64,
    pub wslm_feasible: bool,
    pub zfws_feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub ne: usize,
    pub mean_ssr: f64,
    /// Sample standard deviation (n − 1 divisor); 0 for a single trial.
    pub std_ssr: f64,
    pub n: usize,
}

impl Aggregate {
    pub fn standard_error(&self) -> f64 {
        self.std_ssr / (self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by (scheme, Ne, SNR, trial).
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<Aggregate>,
    /// Largest principal angle seen in scaling validation, when it ran.
    pub scaling_check: Option<f64>,
}

fn row_order(a: &SweepRow, b: &SweepRow) -> std::cmp::Ordering {
    a.scheme
        .cmp(&b.scheme)
        .then(a.eve_antennas.cmp(&b.eve_antennas))
        .then(a.snr_db.total_cmp(&b.snr_db))
        .then(a.trial.cmp(&b.trial))
}

impl SweepResult {
    pub fn from_rows(mut rows: Vec<SweepRow>) -> Self {
        rows.sort_by(row_order);
        let aggregates = aggregate(&rows);
        Self {
            rows,
            aggregates,
            scaling_check: None,
        }
    }

    pub fn aggregate(&self, scheme: Scheme, snr_db: f64, ne: usize) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.scheme == scheme && a.snr_db == snr_db && a.ne == ne)
    }

    /// SSR per trial for one cell, in trial order.
    pub fn ssr_series(&self, scheme: Scheme, snr_db: f64, ne: usize) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.snr_db == snr_db && r.eve_antennas == ne)
            .map(|r| r.ssr)
            .collect()
    }
}

/// Mean and sample standard deviation of SSR per (scheme, SNR, Ne), from rows
/// sorted by [`SweepResult::from_rows`].
pub fn aggregate(rows: &[SweepRow]) -> Vec<Aggregate> {
    let mut out: Vec<Aggregate> = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let head = &rows[start];
        let end = start
            + rows[start..]
                .iter()
                .take_while(|r| {
                    r.scheme == head.scheme
                        && r.eve_antennas == head.eve_antennas
                        && r.snr_db == head.snr_db
                })
                .count();
        let values: Vec<f64> = rows[start..end].iter().map(|r| r.ssr).collect();
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        out.push(Aggregate {
            scheme: head.scheme,
            snr_db: head.snr_db,
            ne: head.eve_antennas,
            mean_ssr: mean,
            std_ssr: std,
            n,
        });
        start = end;
    }
    out
}

/// Align one random realization and return its leakage trace.
pub fn run_convergence(
    config: &SystemConfig,
    scheme: Scheme,
    opts: &IaOptions,
    seed: u64,
) -> Result<(IaSolution, IaTrace)> {
    config.validate()?;
    let channels = draw_channels(config, seed);
    Ok(run_scheme(scheme, &channels, config, opts)?)
}

/// Precoder subspaces as orthonormal bases (`F/‖F‖` columns are orthogonal).
fn precoder_subspaces(sol: &IaSolution) -> Vec<Orthonormal> {
    sol.precoders
        .iter()
        .map(|f| {
            let q = f.clone().qr().q();
            Orthonormal::new(q).expect("QR factor is orthonormal")
        })
        .collect()
}

/// Largest principal angle between corresponding precoder subspaces.
pub fn precoder_angle(a: &IaSolution, b: &IaSolution) -> f64 {
    precoder_subspaces(a)
        .iter()
        .zip(precoder_subspaces(b).iter())
        .map(|(x, y)| max_principal_angle(x, y).expect("matching shapes"))
        .fold(0.0, f64::max)
}

struct TrialOutput {
    rows: Vec<SweepRow>,
    max_angle: Option<f64>,
}

fn run_trial(spec: &ExperimentSpec, ne: usize, trial: usize) -> Result<TrialOutput> {
    let seed = channel_seed(spec.master_seed, trial);
    let template = spec.config.with_eve_antennas(ne);
    let channels = draw_channels(&template, seed);
    let wslm_ok = wslm_feasible(&template).feasible;
    let zfws_ok = zfws_feasible(&template).feasible;

    let ref_snr = spec
        .snr_points
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let ref_power = snr_to_power(ref_snr, template.noise_var);
    let ref_cfg = template.with_power(ref_power);
    let opts = IaOptions {
        init_seed: trial_seed(seed, spec.opts.init_seed),
        ..spec.opts
    };

    let mut rows = Vec::with_capacity(spec.schemes.len() * spec.snr_points.len());
    let mut max_angle: Option<f64> = None;
    for &scheme in &spec.schemes {
        let (ref_sol, ref_trace) = run_scheme(scheme, &channels, &ref_cfg, &opts)?;
        for &snr_db in &spec.snr_points {
            let power = snr_to_power(snr_db, template.noise_var);
            let cfg = template.with_power(power);
            let scaled = ref_sol.rescaled((power / ref_power).sqrt());
            let (sol, iterations) = if spec.validate_scaling {
                let direct_opts = opts.scaled_thresholds(power / ref_power);
                let (direct, trace) = run_scheme(scheme, &channels, &cfg, &direct_opts)?;
                let angle = precoder_angle(&scaled, &direct);
                max_angle = Some(max_angle.map_or(angle, |m: f64| m.max(angle)));
                (direct, trace.iterations())
            } else {
                (scaled, ref_trace.iterations())
            };
            let report = secrecy_report(&channels, &sol, &cfg)?;
            rows.push(SweepRow {
                scheme,
                users: cfg.users,
                tx_antennas: cfg.tx_antennas,
                rx_antennas: cfg.rx_antennas,
                eve_antennas: cfg.eve_antennas,
                streams: cfg.streams,
                snr_db,
                trial,
                seed,
                ssr: report.ssr,
                iterations,
                final_leakage: evaluate_leakage(&channels, &sol)?.total,
                wslm_feasible: wslm_ok,
                zfws_feasible: zfws_ok,
            });
        }
    }
    Ok(TrialOutput { rows, max_angle })
}

fn run_grid(spec: &ExperimentSpec) -> Result<SweepResult> {
    spec.validate()?;
    let cells: Vec<(usize, usize)> = spec
        .ne_values()
        .into_iter()
        .flat_map(|ne| (0..spec.trials).map(move |t| (ne, t)))
        .collect();
    let outputs: Vec<TrialOutput> = cells
        .par_iter()
        .map(|&(ne, t)| run_trial(spec, ne, t))
        .collect::<Result<_>>()?;
    let mut max_angle = None;
    let mut rows = Vec::new();
    for out in outputs {
        if let Some(a) = out.max_angle {
            max_angle = Some(max_angle.map_or(a, |m: f64| m.max(a)));
        }
        rows.extend(out.rows);
    }
    let mut result = SweepResult::from_rows(rows);
    result.scaling_check = max_angle;
    Ok(result)
}

/// Average SSR versus SNR. Trials run in parallel on the current rayon pool;
/// the output does not depend on the pool size.
pub fn run_snr_sweep(spec: &ExperimentSpec) -> Result<SweepResult> {
    log::info!(
        "snr sweep on {}: {} trials, {} SNR points, schemes {:?}",
        spec.config,
        spec.trials,
        spec.snr_points.len(),
        spec.schemes
    );
    run_grid(spec)
}

/// Paired SSR gain of one scheme over conventional IA.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementRow {
    pub scheme: Scheme,
    pub ne: usize,
    pub snr_db: f64,
    pub improvement: f64,
    pub n: usize,
    pub wslm_feasible: bool,
    pub zfws_feasible: bool,
}

/// Average SSR improvement over conventional IA versus eavesdropper antennas.
/// Conventional IA is always run; its own row is the self-comparison (0).
pub fn run_ne_sweep(spec: &ExperimentSpec) -> Result<(SweepResult, Vec<ImprovementRow>)> {
    if spec.ne_points.is_none() {
        return Err(HarnessError::Spec("an Ne sweep needs ne_points".into()));
    }
    let mut spec = spec.clone();
    if !spec.schemes.contains(&Scheme::Conventional) {
        spec.schemes.insert(0, Scheme::Conventional);
    }
    log::info!(
        "ne sweep on {}: Ne in {:?}, {} trials",
        spec.config,
        spec.ne_points,
        spec.trials
    );
    let result = run_grid(&spec)?;

    let mut table = Vec::new();
    for &scheme in &spec.schemes {
        for ne in spec.ne_values() {
            let template = spec.config.with_eve_antennas(ne);
            for &snr_db in &spec.snr_points {
                let baseline = result.ssr_series(Scheme::Conventional, snr_db, ne);
                let proposed = result.ssr_series(scheme, snr_db, ne);
                table.push(ImprovementRow {
                    scheme,
                    ne,
                    snr_db,
                    improvement: ssr_improvement(&proposed, &baseline)?,
                    n: proposed.len(),
                    wslm_feasible: wslm_feasible(&template).feasible,
                    zfws_feasible: zfws_feasible(&template).feasible,
                });
            }
        }
    }
    Ok((result, table))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn write_records<I, R>(path: &Path, header: &[&str], records: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(csv_err)?;
    for rec in records {
        w.write_record(rec.into_iter().collect::<Vec<_>>())
            .map_err(csv_err)?;
    }
    w.flush().map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One row per trial and grid cell, columns [`RAW_HEADER`].
pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_records(
        path,
        &RAW_HEADER,
        result.rows.iter().map(|r| {
            vec![
                r.scheme.to_string(),
                r.users.to_string(),
                r.tx_antennas.to_string(),
                r.rx_antennas.to_string(),
                r.eve_antennas.to_string(),
                r.streams.to_string(),
                r.snr_db.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.ssr.to_string(),
                r.iterations.to_string(),
                format!("{:e}", r.final_leakage),
                r.wslm_feasible.to_string(),
                r.zfws_feasible.to_string(),
            ]
        }),
    )
}

/// Columns [`AGGREGATE_HEADER`], plot-ready.
pub fn write_aggregates_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_records(
        path,
        &AGGREGATE_HEADER,
        result.aggregates.iter().map(|a| {
            vec![
                a.scheme.to_string(),
                a.snr_db.to_string(),
                a.ne.to_string(),
                a.mean_ssr.to_string(),
                a.std_ssr.to_string(),
                a.n.to_string(),
            ]
        }),
    )
}

pub fn write_improvement_csv(table: &[ImprovementRow], path: &Path) -> Result<()> {
    write_records(
        path,
        &IMPROVEMENT_HEADER,
        table.iter().map(|r| {
            vec![
                r.scheme.to_string(),
                r.ne.to_string(),
                r.snr_db.to_string(),
                r.improvement.to_string(),
                r.n.to_string(),
                r.wslm_feasible.to_string(),
                r.zfws_feasible.to_string(),
            ]
        }),
    )
}

/// `iteration,leakage` pairs.
pub fn write_trace_csv(trace: &IaTrace, path: &Path) -> Result<()> {
    write_records(
        path,
        &["iteration", "leakage"],
        trace
            .leakage
            .iter()
            .enumerate()
            .map(|(i, j)| vec![i.to_string(), j.to_string()]),
    )
}

/// Read back a file written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let header = reader
        .headers()
        .map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    if header.iter().ne(RAW_HEADER.iter().copied()) {
        return Err(HarnessError::Parse {
            path: path.to_path_buf(),
            line: 1,
            reason: format!("unexpected header {:?}", header),
        });
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |reason: String| HarnessError::Parse {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let field = |i: usize| {
            rec.get(i)
                .ok_or_else(|| bad(format!("missing column {}", RAW_HEADER[i])))
        };
        macro_rules! num {
            ($i:expr) => {
                field($i)?
                    .parse()
                    .map_err(|e| bad(format!("{}: {e}", RAW_HEADER[$i])))?
            };
        }
        rows.push(SweepRow {
            scheme: field(0)?.parse().map_err(bad)?,
            users: num!(1),
            tx_antennas: num!(2),
            rx_antennas: num!(3),
            eve_antennas: num!(4),
            streams: num!(5),
            snr_db: num!(6),
            trial: num!(7),
            seed: num!(8),
            ssr: num!(9),
            iterations: num!(10),
            final_leakage: num!(11),
            wslm_feasible: num!(12),
            zfws_feasible: num!(13),
        });
    }
    Ok(rows)
}

/// Emit a gnuplot script plotting mean SSR against SNR per scheme from an
/// aggregate CSV.
pub fn write_gnuplot_script(
    path: &Path,
    aggregate_csv: &str,
    schemes: &[Scheme],
    title: &str,
) -> Result<()> {
    let io_err = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    let plots: Vec<String> = schemes
        .iter()
        .map(|s| {
            format!(
                "'{aggregate_csv}' using 2:(strcol(1) eq '{s}' ? $4 : 1/0):(strcol(1) eq '{s}' ? $5 : 1/0) with yerrorlines title '{s}'"
            )
        })
        .collect();
    writeln!(w, "set datafile separator ','").map_err(io_err)?;
    writeln!(w, "set key autotitle columnhead").map_err(io_err)?;
    writeln!(w, "set title '{title}'").map_err(io_err)?;
    writeln!(w, "set xlabel 'SNR (dB)'").map_err(io_err)?;
    writeln!(w, "set ylabel 'average SSR (bits/s/Hz)'").map_err(io_err)?;
    writeln!(w, "set grid").map_err(io_err)?;
    writeln!(w, "plot {}", plots.join(", \\\n     ")).map_err(io_err)?;
    w.flush().map_err(io_err)
}

/// A named system configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub config: SystemConfig,
    /// Eavesdropper sizes swept when this preset drives an Ne sweep.
    pub ne_sweep: Option<(usize, usize)>,
}

/// Name, `[K, M, N, Ne, d]`, optional inclusive Ne-sweep range.
type PresetRow = (&'static str, [usize; 5], Option<(usize, usize)>);

const PRESET_TABLE: [PresetRow; 7] = [
    ("9963", [3, 9, 9, 6, 3], None),
    ("9993", [3, 9, 9, 9, 3], None),
    ("151593", [3, 15, 15, 9, 3], None),
    ("15151833", [3, 15, 15, 18, 3], None),
    ("6642", [3, 6, 6, 4, 2], None),
    // Ne-sweep templates (9×9, Ne, 3)^3 and (15×15, Ne, 3)^3
    ("9933", [3, 9, 9, 6, 3], Some((3, 12))),
    ("151533", [3, 15, 15, 9, 3], Some((3, 24))),
];

/// Presets for the test systems: `9963` is (9×9,6,3)³, `9993` (9×9,9,3)³,
/// `151593` (15×15,9,3)³, `15151833` (15×15,18,3)³, `6642` (6×6,4,2)³;
/// `9933` and `151533` are the Ne-sweep templates (9×9,Ne,3)³ and
/// (15×15,Ne,3)³, whose fixed-Ne default is 6 and 9 respectively.
pub fn preset(name: &str) -> Option<Preset> {
    PRESET_TABLE
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(name, [k, m, n, ne, d], ne_sweep)| Preset {
            name,
            config: SystemConfig::new(k, m, n, ne, d).expect("preset dimensions are valid"),
            ne_sweep,
        })
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESET_TABLE.iter().map(|(n, _, _)| *n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> ExperimentSpec {
        let cfg = SystemConfig::new(2, 4, 4, 2, 2).unwrap();
        let mut spec = ExperimentSpec::new(cfg, vec![Scheme::Zfws], vec![20.0]);
        spec.trials = 1;
        spec
    }

    #[test]
    fn single_cell_has_one_row() {
        let res = run_snr_sweep(&small_spec()).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert_eq!(res.aggregates.len(), 1);
        assert_eq!(res.aggregates[0].n, 1);
        assert_eq!(res.aggregates[0].std_ssr, 0.0);
    }

    #[test]
    fn spec_validation() {
        let mut s = small_spec();
        s.trials = 0;
        assert!(matches!(s.validate(), Err(HarnessError::Spec(_))));
        let mut s = small_spec();
        s.snr_points.clear();
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.schemes.clear();
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.schemes = vec![Scheme::Wslm];
        s.ne_points = Some(vec![1, 2]);
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.ne_points = Some(vec![]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn ne_sweep_requires_points() {
        assert!(matches!(
            run_ne_sweep(&small_spec()),
            Err(HarnessError::Spec(_))
        ));
    }

    #[test]
    fn rows_are_sorted() {
        let mut spec = small_spec();
        spec.schemes = vec![Scheme::Zfws, Scheme::Conventional];
        spec.snr_points = vec![20.0, 0.0, 10.0];
        spec.trials = 3;
        let res = run_snr_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 18);
        assert!(res.rows.windows(2).all(|w| row_order(&w[0], &w[1]).is_lt()));
        assert_eq!(res.rows[0].scheme, Scheme::Conventional);
        assert_eq!(res.rows[0].snr_db, 0.0);
    }

    #[test]
    fn presets_resolve() {
        for name in preset_names() {
            assert!(preset(name).is_some());
        }
        assert_eq!(preset("9963").unwrap().config.to_string(), "(9x9,6,3)^3");
        assert!(preset("nope").is_none());
    }
}
