//! System dimensions and seeded Rayleigh block-fading draws.
//!
//! Entries are drawn from `ChaCha20Rng::seed_from_u64(seed)` in a fixed order:
//! receiver-major (legitimate receivers 1..K, then the eavesdropper), then
//! transmitter, then row-major inside each matrix, real part before imaginary
//! part. Each part is `N(0, 1/2)`, so every entry is `CN(0, 1)`.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::numerics::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid system configuration: {0}")]
    Invalid(String),
    #[error("malformed channel dump at line {line}: {reason}")]
    Dump { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// The `(M×N, Ne, d)^K` system with its power budget and noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// K, number of transmitter/receiver pairs.
    pub users: usize,
    /// M, antennas per transmitter.
    pub tx_antennas: usize,
    /// N, antennas per legitimate receiver.
    pub rx_antennas: usize,
    /// Ne, eavesdropper antennas.
    pub eve_antennas: usize,
    /// d, streams per pair.
    pub streams: usize,
    /// Pt, linear transmit power per transmitter.
    pub tx_power: f64,
    /// σ², linear noise variance at every receiver.
    pub noise_var: f64,
}

impl SystemConfig {
    /// Unit noise and unit power; adjust with [`SystemConfig::with_snr_db`].
    pub fn new(
        users: usize,
        tx_antennas: usize,
        rx_antennas: usize,
        eve_antennas: usize,
        streams: usize,
    ) -> Result<Self, ConfigError> {
        let cfg = Self {
            users,
            tx_antennas,
            rx_antennas,
            eve_antennas,
            streams,
            tx_power: 1.0,
            noise_var: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.tx_power = snr_to_power(snr_db, self.noise_var);
        self
    }

    pub fn with_power(mut self, tx_power: f64) -> Self {
        self.tx_power = tx_power;
        self
    }

    pub fn with_eve_antennas(mut self, eve_antennas: usize) -> Self {
        self.eve_antennas = eve_antennas;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let d = self.streams;
        if self.users == 0 {
            return Err(ConfigError::Invalid("K must be at least 1".into()));
        }
        if d == 0 || d > self.tx_antennas || d > self.rx_antennas {
            return Err(ConfigError::Invalid(format!(
                "d = {d} must satisfy 1 <= d <= min(M, N) = {}",
                self.tx_antennas.min(self.rx_antennas)
            )));
        }
        if self.eve_antennas == 0 {
            return Err(ConfigError::Invalid("Ne must be at least 1".into()));
        }
        if !(self.tx_power > 0.0 && self.tx_power.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "Pt = {} must be positive",
                self.tx_power
            )));
        }
        if !(self.noise_var > 0.0 && self.noise_var.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "sigma2 = {} must be positive",
                self.noise_var
            )));
        }
        Ok(())
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * (self.tx_power / self.noise_var).log10()
    }

    /// Rows of the channel into receiver `rx` (0-based; `rx == K` is the eavesdropper).
    pub fn receiver_antennas(&self, rx: usize) -> usize {
        if rx < self.users {
            self.rx_antennas
        } else {
            self.eve_antennas
        }
    }
}

impl fmt::Display for SystemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}x{},{},{})^{}",
            self.tx_antennas, self.rx_antennas, self.eve_antennas, self.streams, self.users
        )
    }
}

/// `Pt = σ² · 10^(snr_db/10)`.
pub fn snr_to_power(snr_db: f64, noise_var: f64) -> f64 {
    noise_var * 10f64.powf(snr_db / 10.0)
}

/// One block-fading realization of every link.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    users: usize,
    /// `(K + 1) * K` matrices, receiver-major.
    links: Vec<CMatrix>,
}

impl ChannelSet {
    /// Assemble from explicit matrices laid out receiver-major; receiver `K` is
    /// the eavesdropper.
    pub fn from_links(config: &SystemConfig, links: Vec<CMatrix>) -> Result<Self, ConfigError> {
        let k = config.users;
        if links.len() != (k + 1) * k {
            return Err(ConfigError::Invalid(format!(
                "expected {} channel matrices, got {}",
                (k + 1) * k,
                links.len()
            )));
        }
        for (idx, h) in links.iter().enumerate() {
            let rx = idx / k;
            let want = (config.receiver_antennas(rx), config.tx_antennas);
            if h.shape() != want {
                return Err(ConfigError::Invalid(format!(
                    "H[{}][{}] has shape {:?}, expected {:?}",
                    rx + 1,
                    idx % k + 1,
                    h.shape(),
                    want
                )));
            }
            if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(ConfigError::Invalid(format!(
                    "H[{}][{}] has non-finite entries",
                    rx + 1,
                    idx % k + 1
                )));
            }
        }
        Ok(Self { users: k, links })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    /// Channel from transmitter `tx` to receiver `rx`, both 0-based; `rx == K`
    /// addresses the eavesdropper.
    pub fn link(&self, rx: usize, tx: usize) -> &CMatrix {
        assert!(
            rx <= self.users && tx < self.users,
            "link ({rx}, {tx}) out of range"
        );
        &self.links[rx * self.users + tx]
    }

    /// Channel from transmitter `tx` to the eavesdropper.
    pub fn eavesdropper(&self, tx: usize) -> &CMatrix {
        self.link(self.users, tx)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &CMatrix)> {
        let k = self.users;
        self.links
            .iter()
            .enumerate()
            .map(move |(i, h)| ((i / k, i % k), h))
    }
}

/// Draw every channel i.i.d. `CN(0, 1)`, fully determined by `(config, seed)`.
pub fn draw_channels(config: &SystemConfig, seed: u64) -> ChannelSet {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let k = config.users;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut links = Vec::with_capacity((k + 1) * k);
    for rx in 0..=k {
        let rows = config.receiver_antennas(rx);
        for _tx in 0..k {
            let mut h = CMatrix::zeros(rows, config.tx_antennas);
            for i in 0..rows {
                for j in 0..config.tx_antennas {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    h[(i, j)] = C64::new(re * scale, im * scale);
                }
            }
            links.push(h);
        }
    }
    ChannelSet { users: k, links }
}

/// Seed of trial `trial` under `master`: SplitMix64 finalizer applied to
/// `master + (trial + 1)·φ64`, with `φ64 = 0x9E3779B97F4A7C15`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Write a channel dump: a header line `K=.. M=.. N=.. Ne=.. d=.. seed=..`,
/// then per matrix a line `H <rx> <tx>` (1-based) followed by its rows, each
/// entry written as `re,im` and separated by single spaces.
pub fn write_channel_dump<W: Write>(
    out: &mut W,
    config: &SystemConfig,
    seed: u64,
    channels: &ChannelSet,
) -> std::io::Result<()> {
    writeln!(
        out,
        "K={} M={} N={} Ne={} d={} seed={}",
        config.users,
        config.tx_antennas,
        config.rx_antennas,
        config.eve_antennas,
        config.streams,
        seed
    )?;
    for ((rx, tx), h) in channels.iter() {
        writeln!(out, "H {} {}", rx + 1, tx + 1)?;
        for i in 0..h.nrows() {
            let row: Vec<String> = (0..h.ncols())
                .map(|j| format!("{:?},{:?}", h[(i, j)].re, h[(i, j)].im))
                .collect();
            writeln!(out, "{}", row.join(" "))?;
        }
    }
    Ok(())
}

/// Parse a dump written by [`write_channel_dump`]. Returns the configuration
/// (unit power and noise), the recorded seed, and the channels.
pub fn read_channel_dump<R: BufRead>(
    input: R,
) -> Result<(SystemConfig, u64, ChannelSet), ConfigError> {
    let mut lines = input.lines().enumerate();
    let mut next_line = || -> Result<(usize, String), ConfigError> {
        match lines.next() {
            Some((i, Ok(l))) => Ok((i + 1, l)),
            Some((i, Err(e))) => Err(ConfigError::Dump {
                line: i + 1,
                reason: e.to_string(),
            }),
            None => Err(ConfigError::Dump {
                line: 0,
                reason: "unexpected end of file".into(),
            }),
        }
    };

    let (lineno, header) = next_line()?;
    let bad = |line: usize, reason: String| ConfigError::Dump { line, reason };
    let mut fields = std::collections::HashMap::new();
    for tok in header.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| bad(lineno, format!("expected key=value, got {tok:?}")))?;
        let value = u64::from_str(value).map_err(|e| bad(lineno, format!("{key}: {e}")))?;
        fields.insert(key.to_string(), value);
    }
    let get = |key: &str| {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| bad(lineno, format!("missing header field {key}")))
    };
    let config = SystemConfig::new(
        get("K")? as usize,
        get("M")? as usize,
        get("N")? as usize,
        get("Ne")? as usize,
        get("d")? as usize,
    )?;
    let seed = get("seed")?;

    let k = config.users;
    let mut links = Vec::with_capacity((k + 1) * k);
    for rx in 0..=k {
        for tx in 0..k {
            let (lineno, tag) = next_line()?;
            let expected = format!("H {} {}", rx + 1, tx + 1);
            if tag.trim() != expected {
                return Err(bad(lineno, format!("expected {expected:?}, got {tag:?}")));
            }
            let rows = config.receiver_antennas(rx);
            let mut h = CMatrix::zeros(rows, config.tx_antennas);
            for i in 0..rows {
                let (lineno, row) = next_line()?;
                let entries: Vec<&str> = row.split_whitespace().collect();
                if entries.len() != config.tx_antennas {
                    return Err(bad(
                        lineno,
                        format!(
                            "expected {} entries, got {}",
                            config.tx_antennas,
                            entries.len()
                        ),
                    ));
                }
                for (j, e) in entries.iter().enumerate() {
                    let (re, im) = e
                        .split_once(',')
                        .ok_or_else(|| bad(lineno, format!("expected re,im, got {e:?}")))?;
                    let re = f64::from_str(re).map_err(|err| bad(lineno, err.to_string()))?;
                    let im = f64::from_str(im).map_err(|err| bad(lineno, err.to_string()))?;
                    h[(i, j)] = C64::new(re, im);
                }
            }
            links.push(h);
        }
    }
    let channels = ChannelSet::from_links(&config, links)?;
    Ok((config, seed, channels))
}
