//! Run settings gathered from a `key = value` file and from flags.
//!
//! Keys before the first `[section]` header apply to every run; a section
//! selected with `--section` overrides them. Flags override both.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use secure_ia::ia::Scheme;

/// A problem with the user's input; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Snr,
    Ne,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "snr" => Ok(Mode::Snr),
            "ne" => Ok(Mode::Ne),
            other => Err(format!("unknown mode {other:?} (expected snr or ne)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub preset: Option<String>,
    pub users: Option<usize>,
    pub tx_antennas: Option<usize>,
    pub rx_antennas: Option<usize>,
    pub eve_antennas: Option<usize>,
    pub streams: Option<usize>,
    pub schemes: Option<Vec<Scheme>>,
    pub mode: Option<Mode>,
    pub snr: Option<f64>,
    pub snr_min: Option<f64>,
    pub snr_max: Option<f64>,
    pub snr_step: Option<f64>,
    pub ne_points: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub kappa_max: Option<usize>,
    pub eps_leakage: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub validate_scaling: Option<bool>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, UsageError>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| UsageError(format!("{key} = {value:?}: {e}")))
}

pub fn parse_schemes(value: &str) -> Result<Vec<Scheme>, String> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Scheme::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    if out.is_empty() {
        return Err("no scheme given".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `3,6,9` or an inclusive range `3..12`, or a mix of both.
pub fn parse_counts(value: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|e| format!("{part}: {e}"))?;
            let hi: usize = hi.trim().parse().map_err(|e| format!("{part}: {e}"))?;
            if lo > hi {
                return Err(format!("empty range {part}"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|e| format!("{part}: {e}"))?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(format!("{other:?} is not a boolean")),
    }
}

fn keyed<T>(key: &str, r: Result<T, String>) -> Result<T, UsageError> {
    r.map_err(|e| UsageError(format!("{key}: {e}")))
}

impl Settings {
    fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        match key {
            "preset" => self.preset = Some(value.trim().to_string()),
            "K" => self.users = Some(parse_value(key, value)?),
            "M" => self.tx_antennas = Some(parse_value(key, value)?),
            "N" => self.rx_antennas = Some(parse_value(key, value)?),
            "Ne" => self.eve_antennas = Some(parse_value(key, value)?),
            "d" => self.streams = Some(parse_value(key, value)?),
            "scheme" => self.schemes = Some(keyed(key, parse_schemes(value))?),
            "mode" => self.mode = Some(parse_value(key, value)?),
            "snr" => self.snr = Some(parse_value(key, value)?),
            "snr_min" => self.snr_min = Some(parse_value(key, value)?),
            "snr_max" => self.snr_max = Some(parse_value(key, value)?),
            "snr_step" => self.snr_step = Some(parse_value(key, value)?),
            "ne" => self.ne_points = Some(keyed(key, parse_counts(value))?),
            "trials" => self.trials = Some(parse_value(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "kappa_max" => self.kappa_max = Some(parse_value(key, value)?),
            "eps_leakage" => self.eps_leakage = Some(parse_value(key, value)?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "jobs" => self.jobs = Some(parse_value(key, value)?),
            "validate_scaling" => self.validate_scaling = Some(keyed(key, parse_bool(value))?),
            other => return usage(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: Settings) -> Settings {
        macro_rules! pick {
            ($($f:ident),*) => { Settings { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            preset,
            users,
            tx_antennas,
            rx_antennas,
            eve_antennas,
            streams,
            schemes,
            mode,
            snr,
            snr_min,
            snr_max,
            snr_step,
            ne_points,
            trials,
            seed,
            kappa_max,
            eps_leakage,
            out,
            jobs,
            validate_scaling
        )
    }
}

/// Parse config text. With `section` set, that section must exist and its keys
/// override the global ones; other sections are still checked for unknown keys.
pub fn parse_config(text: &str, section: Option<&str>) -> Result<Settings, UsageError> {
    let mut global = Settings::default();
    let mut selected = Settings::default();
    let mut found = section.is_none();
    let mut current: Option<String> = None;
    let mut scratch = Settings::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return usage(format!("line {line_no}: malformed section header {line:?}"));
            };
            let name = name.trim().to_string();
            found |= Some(name.as_str()) == section;
            current = Some(name);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return usage(format!(
                "line {line_no}: expected `key = value`, got {line:?}"
            ));
        };
        let key = key.trim().replace('-', "_");
        let target = match &current {
            None => &mut global,
            Some(name) if Some(name.as_str()) == section => &mut selected,
            Some(_) => &mut scratch,
        };
        target
            .set(&key, value)
            .map_err(|e| UsageError(format!("line {line_no}: {e}")))?;
    }
    if !found {
        return usage(format!(
            "section [{}] not found",
            section.unwrap_or_default()
        ));
    }
    Ok(global.overlay(selected))
}

pub fn load_config(path: &Path, section: Option<&str>) -> Result<Settings, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_config(&text, section).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

/// Inclusive grid `min, min + step, …, ≤ max`.
pub fn snr_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, UsageError> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return usage("SNR bounds must be finite");
    }
    if step <= 0.0 {
        return usage(format!("--snr-step must be positive, got {step}"));
    }
    if min > max {
        return usage(format!("--snr-min {min} exceeds --snr-max {max}"));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| min + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_override_globals() {
        let text =
            "K = 3\nM=9 # comment\n\n[big]\nM = 15\nscheme = wslm, zfws\n[other]\ntrials = 4\n";
        let g = parse_config(text, None).unwrap();
        assert_eq!((g.users, g.tx_antennas, g.trials), (Some(3), Some(9), None));
        let b = parse_config(text, Some("big")).unwrap();
        assert_eq!(b.tx_antennas, Some(15));
        assert_eq!(b.schemes, Some(vec![Scheme::Wslm, Scheme::Zfws]));
        assert_eq!(b.trials, None);
    }

    #[test]
    fn unknown_keys_and_sections_rejected() {
        assert!(parse_config("K = 3\nfoo = 1\n", None).is_err());
        assert!(parse_config("[a]\nbar = 1\n", None).is_err());
        assert!(parse_config("K = 3\n", Some("missing")).is_err());
        assert!(parse_config("K = three\n", None).is_err());
        assert!(parse_config("just words\n", None).is_err());
    }

    #[test]
    fn dashed_keys_accepted() {
        let s = parse_config("snr-min = 5\nkappa-max = 7\nvalidate-scaling = yes\n", None).unwrap();
        assert_eq!(s.snr_min, Some(5.0));
        assert_eq!(s.kappa_max, Some(7));
        assert_eq!(s.validate_scaling, Some(true));
    }

    #[test]
    fn overlay_prefers_top() {
        let base = Settings {
            trials: Some(10),
            seed: Some(1),
            ..Default::default()
        };
        let top = Settings {
            seed: Some(2),
            ..Default::default()
        };
        let s = base.overlay(top);
        assert_eq!((s.trials, s.seed), (Some(10), Some(2)));
    }

    #[test]
    fn lists_and_grids() {
        assert_eq!(parse_counts("3..5, 9,3").unwrap(), vec![3, 4, 5, 9]);
        assert!(parse_counts("5..3").is_err());
        assert_eq!(parse_schemes("all").unwrap(), Scheme::ALL.to_vec());
        assert_eq!(snr_grid(0.0, 50.0, 5.0).unwrap().len(), 11);
        assert_eq!(snr_grid(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert!(snr_grid(0.0, 1.0, 0.0).is_err());
        assert!(snr_grid(2.0, 1.0, 1.0).is_err());
    }
}
