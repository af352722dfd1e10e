//! Interference-alignment transceiver designs.
//!
//! All three designs alternate between two closed-form steps, each of which
//! minimizes the leakage cost exactly with the other block held fixed, so the
//! recorded cost never increases:
//!
//! * **conventional**: precoders `F_ℓ` and receive interference subspaces `U_k`
//!   minimize the leakage at the legitimate receivers only;
//! * **WSLM** (wiretapped-signal leakage minimization): adds an eavesdropper
//!   subspace `U_e` (Ne×d) into which every legitimate signal is pushed, and
//!   counts the energy outside it as extra cost;
//! * **ZFWS** (zero-forcing of the wiretapped signal): fixes `F_ℓ = Δ_ℓ·P_ℓ`
//!   with `Δ_ℓ` spanning the null space of the wiretap channel and aligns only
//!   through the inner d×d factor `P_ℓ`.
//!
//! Every precoder satisfies `Fᴴ·F = (Pt/d)·I`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::channel::{ChannelSet, SystemConfig};
use crate::numerics::{
    eig_largest, eig_smallest, projection_residual, svd, CMatrix, NumericsError, Orthonormal, C64,
};

/// Number of consecutive sub-`eps_delta` improvements that count as stagnation.
pub const STAGNATION_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IaError {
    #[error("infeasible dimensions for {scheme}: {reason}")]
    Infeasible { scheme: Scheme, reason: String },
    #[error("invalid options: {0}")]
    Options(String),
    #[error("inconsistent solution: {0}")]
    Solution(String),
    #[error("channels do not match the configuration: {0}")]
    Channels(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, IaError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Conventional,
    Wslm,
    Zfws,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Conventional, Scheme::Wslm, Scheme::Zfws];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Conventional => "conventional",
            Scheme::Wslm => "wslm",
            Scheme::Zfws => "zfws",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conventional" | "conv" | "ia" => Ok(Scheme::Conventional),
            "wslm" => Ok(Scheme::Wslm),
            "zfws" => Ok(Scheme::Zfws),
            other => Err(format!(
                "unknown scheme {other:?} (expected conventional, wslm or zfws)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IaOptions {
    /// Upper bound on the number of alternating iterations.
    pub max_iterations: usize,
    /// Stop as soon as the cost is at or below this absolute value.
    pub eps_leakage: f64,
    /// Stop after [`STAGNATION_WINDOW`] consecutive improvements at or below this.
    pub eps_delta: f64,
    /// Seed of the random initial precoders (conventional and WSLM).
    pub init_seed: u64,
}

impl Default for IaOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            eps_leakage: 1e-10,
            eps_delta: 1e-14,
            init_seed: 0,
        }
    }
}

impl IaOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(IaError::Options("kappa_max must be at least 1".into()));
        }
        if self.eps_leakage.is_nan() || self.eps_leakage <= 0.0 {
            return Err(IaError::Options(format!(
                "eps_leakage = {} must be positive",
                self.eps_leakage
            )));
        }
        if self.eps_delta.is_nan() || self.eps_delta < 0.0 {
            return Err(IaError::Options(format!(
                "eps_delta = {} must be non-negative",
                self.eps_delta
            )));
        }
        Ok(())
    }

    /// The same options with both thresholds multiplied by `factor`; leakage is
    /// proportional to transmit power, so this keeps termination power-invariant.
    pub fn scaled_thresholds(mut self, factor: f64) -> Self {
        self.eps_leakage *= factor;
        self.eps_delta *= factor;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IaSolution {
    pub scheme: Scheme,
    /// `F_ℓ`, M×d each.
    pub precoders: Vec<CMatrix>,
    /// `U_k`, N×(N−d) each.
    pub interference_bases: Vec<Orthonormal>,
    /// `U_e`, Ne×d (WSLM only).
    pub eve_basis: Option<Orthonormal>,
    /// `Δ_ℓ`, M×d (ZFWS only).
    pub null_bases: Option<Vec<Orthonormal>>,
    /// `P_ℓ`, d×d (ZFWS only).
    pub inner_precoders: Option<Vec<CMatrix>>,
    /// ZFWS run with `M − d < Ne`: `Δ_ℓ` only minimizes the wiretap energy.
    pub best_effort: bool,
}

impl IaSolution {
    /// Multiply every precoder (and inner factor) by `factor`. Subspaces are
    /// unchanged; use `factor = sqrt(Pt_new / Pt_old)` to move to another power.
    pub fn rescaled(&self, factor: f64) -> Self {
        let s = C64::new(factor, 0.0);
        let mut out = self.clone();
        for f in out.precoders.iter_mut() {
            *f *= s;
        }
        if let Some(ps) = out.inner_precoders.as_mut() {
            for p in ps.iter_mut() {
                *p *= s;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    Converged,
    Stagnated,
    MaxIterations,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Converged => "converged",
            Termination::Stagnated => "stagnated",
            Termination::MaxIterations => "max_iterations",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IaTrace {
    /// `J⁽⁰⁾, J⁽¹⁾, …`: the cost after initialization and after every iteration.
    pub leakage: Vec<f64>,
    pub termination: Termination,
}

impl IaTrace {
    pub fn iterations(&self) -> usize {
        self.leakage.len().saturating_sub(1)
    }

    pub fn final_leakage(&self) -> f64 {
        *self.leakage.last().expect("trace holds at least J(0)")
    }

    /// Largest increase between consecutive entries (≤ 0 for a monotone trace).
    pub fn max_increase(&self) -> f64 {
        self.leakage
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Leakage cost split into its receiver and eavesdropper parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leakage {
    /// Cost tracked by the scheme's iteration.
    pub total: f64,
    /// Interference energy outside `span(U_k)` at the legitimate receivers.
    pub receivers: f64,
    /// WSLM: energy outside `span(U_e)`; ZFWS: raw wiretap energy
    /// `Σ‖H_e,ℓ·F_ℓ‖²` (diagnostic only); conventional: 0.
    pub eavesdropper: f64,
}

/// Recompute the cost of `sol` on `channels`.
pub fn evaluate_leakage(channels: &ChannelSet, sol: &IaSolution) -> Result<Leakage> {
    let k = channels.users();
    if sol.precoders.len() != k || sol.interference_bases.len() != k {
        return Err(IaError::Solution(format!(
            "expected {k} precoders and receive bases, got {} and {}",
            sol.precoders.len(),
            sol.interference_bases.len()
        )));
    }
    let receivers = receiver_leakage(channels, &sol.precoders, &sol.interference_bases)?;
    let (eavesdropper, total) = match sol.scheme {
        Scheme::Conventional => (0.0, receivers),
        Scheme::Wslm => {
            let ue = sol
                .eve_basis
                .as_ref()
                .ok_or_else(|| IaError::Solution("WSLM solution without U_e".into()))?;
            let j2 = eve_leakage(channels, &sol.precoders, ue)?;
            (j2, receivers + j2)
        }
        Scheme::Zfws => {
            let raw = (0..k)
                .map(|l| (channels.eavesdropper(l) * &sol.precoders[l]).norm_squared())
                .sum();
            (raw, receivers)
        }
    };
    Ok(Leakage {
        total,
        receivers,
        eavesdropper,
    })
}

fn receiver_leakage(channels: &ChannelSet, f: &[CMatrix], u: &[Orthonormal]) -> Result<f64> {
    let k = channels.users();
    let mut acc = 0.0;
    for (rx, basis) in u.iter().enumerate().take(k) {
        for tx in (0..k).filter(|&tx| tx != rx) {
            acc += projection_residual(&(channels.link(rx, tx) * &f[tx]), basis)?;
        }
    }
    Ok(acc)
}

fn eve_leakage(channels: &ChannelSet, f: &[CMatrix], ue: &Orthonormal) -> Result<f64> {
    if spans_everything(ue) {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for (tx, ftx) in f.iter().enumerate() {
        acc += projection_residual(&(channels.eavesdropper(tx) * ftx), ue)?;
    }
    Ok(acc)
}

/// A square basis leaves nothing outside its span (`Ne = d` for `U_e`).
fn spans_everything(u: &Orthonormal) -> bool {
    u.ncols() == u.nrows()
}

/// `Hᴴ·(I − U·Uᴴ)·H`, formed as `QᴴQ` with `Q = H − U·Uᴴ·H`.
fn leakage_gram(h: &CMatrix, u: &Orthonormal) -> CMatrix {
    let q = h - u.basis() * (u.adjoint() * h);
    q.adjoint() * q
}

/// `Σ_ℓ (H_ℓ·F_ℓ)(H_ℓ·F_ℓ)ᴴ` over the given links.
fn signal_gram<'a>(
    rows: usize,
    terms: impl Iterator<Item = (&'a CMatrix, &'a CMatrix)>,
) -> CMatrix {
    let mut acc = CMatrix::zeros(rows, rows);
    for (h, f) in terms {
        let hf = h * f;
        acc += &hf * hf.adjoint();
    }
    acc
}

fn power_scale(config: &SystemConfig) -> C64 {
    C64::new((config.tx_power / config.streams as f64).sqrt(), 0.0)
}

fn check_inputs(
    scheme: Scheme,
    channels: &ChannelSet,
    config: &SystemConfig,
    opts: &IaOptions,
) -> Result<()> {
    config.validate().map_err(|e| IaError::Infeasible {
        scheme,
        reason: e.to_string(),
    })?;
    opts.validate()?;
    if channels.users() != config.users {
        return Err(IaError::Channels(format!(
            "{} users in channels, {} in config",
            channels.users(),
            config.users
        )));
    }
    for ((rx, tx), h) in channels.iter() {
        let want = (config.receiver_antennas(rx), config.tx_antennas);
        if h.shape() != want {
            return Err(IaError::Channels(format!(
                "H[{}][{}] is {:?}, expected {:?}",
                rx + 1,
                tx + 1,
                h.shape(),
                want
            )));
        }
    }
    if config.rx_antennas <= config.streams {
        return Err(IaError::Infeasible {
            scheme,
            reason: format!(
                "N = {} must exceed d = {} for a non-empty interference subspace",
                config.rx_antennas, config.streams
            ),
        });
    }
    if scheme == Scheme::Wslm && config.eve_antennas < config.streams {
        return Err(IaError::Infeasible {
            scheme,
            reason: format!(
                "Ne = {} is below d = {}, so the Ne×d eavesdropper subspace does not exist",
                config.eve_antennas, config.streams
            ),
        });
    }
    Ok(())
}

/// Random precoders `√(Pt/d)·orth(G)`, `G` an M×d standard complex Gaussian.
fn random_precoders(config: &SystemConfig, seed: u64) -> Vec<CMatrix> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let (m, d) = (config.tx_antennas, config.streams);
    (0..config.users)
        .map(|_| {
            let g = CMatrix::from_fn(m, d, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re * scale, im * scale)
            });
            g.qr().q() * power_scale(config)
        })
        .collect()
}

/// `U_k` = dominant (N−d)-subspace of the interference reaching receiver k.
fn update_receive_bases(
    channels: &ChannelSet,
    config: &SystemConfig,
    f: &[CMatrix],
) -> Result<Vec<Orthonormal>> {
    let k = config.users;
    let n = config.rx_antennas;
    (0..k)
        .map(|rx| {
            let gram = signal_gram(
                n,
                (0..k)
                    .filter(|&tx| tx != rx)
                    .map(|tx| (channels.link(rx, tx), &f[tx])),
            );
            Ok(eig_largest(&gram, n - config.streams)?.basis)
        })
        .collect()
}

/// `U_e` = dominant d-subspace of all signals reaching the eavesdropper.
fn update_eve_basis(
    channels: &ChannelSet,
    config: &SystemConfig,
    f: &[CMatrix],
) -> Result<Orthonormal> {
    let gram = signal_gram(
        config.eve_antennas,
        f.iter()
            .enumerate()
            .map(|(tx, ftx)| (channels.eavesdropper(tx), ftx)),
    );
    Ok(eig_largest(&gram, config.streams)?.basis)
}

/// `F_ℓ = √(Pt/d)·(d smallest eigenvectors of Σ_k H_kℓᴴ(I − U_kU_kᴴ)H_kℓ)`,
/// the sum optionally including the eavesdropper term with `U_e`.
fn update_precoders(
    channels: &ChannelSet,
    config: &SystemConfig,
    u: &[Orthonormal],
    ue: Option<&Orthonormal>,
) -> Result<Vec<CMatrix>> {
    let k = config.users;
    let m = config.tx_antennas;
    (0..k)
        .map(|tx| {
            let mut gram = CMatrix::zeros(m, m);
            for rx in (0..k).filter(|&rx| rx != tx) {
                gram += leakage_gram(channels.link(rx, tx), &u[rx]);
            }
            if let Some(ue) = ue.filter(|ue| !spans_everything(ue)) {
                gram += leakage_gram(channels.eavesdropper(tx), ue);
            }
            let sel = eig_smallest(&gram, config.streams)?;
            Ok(sel.basis.basis() * power_scale(config))
        })
        .collect()
}

/// Termination bookkeeping shared by every design.
struct Tracker {
    opts: IaOptions,
    leakage: Vec<f64>,
    small_steps: usize,
}

impl Tracker {
    fn start(opts: IaOptions, j0: f64) -> (Self, Option<Termination>) {
        let done = (j0 <= opts.eps_leakage).then_some(Termination::Converged);
        let tracker = Self {
            opts,
            leakage: vec![j0],
            small_steps: 0,
        };
        (tracker, done)
    }

    fn record(&mut self, j: f64) -> Option<Termination> {
        let prev = *self.leakage.last().unwrap();
        self.leakage.push(j);
        if j <= self.opts.eps_leakage {
            return Some(Termination::Converged);
        }
        if prev - j <= self.opts.eps_delta {
            self.small_steps += 1;
            if self.small_steps >= STAGNATION_WINDOW {
                return Some(Termination::Stagnated);
            }
        } else {
            self.small_steps = 0;
        }
        if self.leakage.len() > self.opts.max_iterations {
            return Some(Termination::MaxIterations);
        }
        None
    }

    fn finish(self, termination: Termination) -> IaTrace {
        IaTrace {
            leakage: self.leakage,
            termination,
        }
    }
}

/// Conventional IA: minimizes leakage at the legitimate receivers only,
/// updating precoders first and receive subspaces second.
pub fn conventional_ia(
    channels: &ChannelSet,
    config: &SystemConfig,
    opts: &IaOptions,
) -> Result<(IaSolution, IaTrace)> {
    alternate_f_then_u(Scheme::Conventional, channels, config, opts)
}

/// WSLM IA: conventional IA plus the eavesdropper alignment term.
pub fn wslm_ia(
    channels: &ChannelSet,
    config: &SystemConfig,
    opts: &IaOptions,
) -> Result<(IaSolution, IaTrace)> {
    alternate_f_then_u(Scheme::Wslm, channels, config, opts)
}

fn alternate_f_then_u(
    scheme: Scheme,
    channels: &ChannelSet,
    config: &SystemConfig,
    opts: &IaOptions,
) -> Result<(IaSolution, IaTrace)> {
    check_inputs(scheme, channels, config, opts)?;
    let with_eve = scheme == Scheme::Wslm;

    let mut sol = IaSolution {
        scheme,
        precoders: random_precoders(config, opts.init_seed),
        interference_bases: Vec::new(),
        eve_basis: None,
        null_bases: None,
        inner_precoders: None,
        best_effort: false,
    };
    sol.interference_bases = update_receive_bases(channels, config, &sol.precoders)?;
    if with_eve {
        sol.eve_basis = Some(update_eve_basis(channels, config, &sol.precoders)?);
    }

    let (mut tracker, mut done) = Tracker::start(*opts, evaluate_leakage(channels, &sol)?.total);
    while done.is_none() {
        sol.precoders = update_precoders(
            channels,
            config,
            &sol.interference_bases,
            sol.eve_basis.as_ref(),
        )?;
        sol.interference_bases = update_receive_bases(channels, config, &sol.precoders)?;
        if with_eve {
            sol.eve_basis = Some(update_eve_basis(channels, config, &sol.precoders)?);
        }
        done = tracker.record(evaluate_leakage(channels, &sol)?.total);
    }
    let trace = tracker.finish(done.unwrap());
    log::debug!(
        "{scheme} on {config}: {} after {} iterations, J = {:.3e}",
        trace.termination,
        trace.iterations(),
        trace.final_leakage()
    );
    Ok((sol, trace))
}

/// Right-singular directions of the `d` smallest singular values of the
/// wiretap channel `He` (Ne×M). When `M − Ne ≥ d` these span part of the
/// exact null space; otherwise they minimize `‖He·Δ‖_F` over orthonormal Δ.
pub fn null_space_precoder_basis(he: &CMatrix, streams: usize) -> Result<Orthonormal> {
    let m = he.ncols();
    if streams == 0 || streams > m {
        return Err(IaError::Infeasible {
            scheme: Scheme::Zfws,
            reason: format!("d = {streams} must lie in 1..={m}"),
        });
    }
    let dec = svd(he)?;
    let delta = dec.right.columns(m - streams, streams).into_owned();
    Ok(Orthonormal::new(delta)?)
}

/// ZFWS IA: `F_ℓ = Δ_ℓ·P_ℓ` with `Δ_ℓ` fixed in the wiretap null space.
/// Receive subspaces start as the first N−d columns of `I_N`; each iteration
/// updates the receive subspaces first and the inner factors second.
pub fn zfws_ia(
    channels: &ChannelSet,
    config: &SystemConfig,
    opts: &IaOptions,
) -> Result<(IaSolution, IaTrace)> {
    check_inputs(Scheme::Zfws, channels, config, opts)?;
    let k = config.users;
    let d = config.streams;
    let best_effort = !zfws_feasible(config).antenna_ok;
    if best_effort {
        log::debug!("zfws on {config}: M - d < Ne, wiretap null space unavailable (best effort)");
    }

    let deltas: Vec<Orthonormal> = (0..k)
        .map(|tx| null_space_precoder_basis(channels.eavesdropper(tx), d))
        .collect::<Result<_>>()?;
    // effective channels H_kℓ·Δ_ℓ, receiver-major
    let effective: Vec<CMatrix> = (0..k)
        .flat_map(|rx| (0..k).map(move |tx| (rx, tx)))
        .map(|(rx, tx)| channels.link(rx, tx) * deltas[tx].basis())
        .collect();
    let eff = |rx: usize, tx: usize| &effective[rx * k + tx];

    let update_inner = |u: &[Orthonormal]| -> Result<Vec<CMatrix>> {
        (0..k)
            .map(|tx| {
                let mut gram = CMatrix::zeros(d, d);
                for rx in (0..k).filter(|&rx| rx != tx) {
                    gram += leakage_gram(eff(rx, tx), &u[rx]);
                }
                Ok(eig_smallest(&gram, d)?.basis.basis() * power_scale(config))
            })
            .collect()
    };
    let update_bases = |p: &[CMatrix]| -> Result<Vec<Orthonormal>> {
        let n = config.rx_antennas;
        (0..k)
            .map(|rx| {
                let gram = signal_gram(
                    n,
                    (0..k)
                        .filter(|&tx| tx != rx)
                        .map(|tx| (eff(rx, tx), &p[tx])),
                );
                Ok(eig_largest(&gram, n - d)?.basis)
            })
            .collect()
    };
    let assemble = |p: Vec<CMatrix>, u: Vec<Orthonormal>| IaSolution {
        scheme: Scheme::Zfws,
        precoders: deltas
            .iter()
            .zip(&p)
            .map(|(dl, pl)| dl.basis() * pl)
            .collect(),
        interference_bases: u,
        eve_basis: None,
        null_bases: Some(deltas.clone()),
        inner_precoders: Some(p),
        best_effort,
    };

    let u0: Vec<Orthonormal> = (0..k)
        .map(|_| Orthonormal::identity_columns(config.rx_antennas, config.rx_antennas - d))
        .collect();
    let p0 = update_inner(&u0)?;
    let mut sol = assemble(p0, u0);

    let (mut tracker, mut done) = Tracker::start(*opts, evaluate_leakage(channels, &sol)?.total);
    while done.is_none() {
        let p = sol.inner_precoders.take().expect("zfws solution carries P");
        let u = update_bases(&p)?;
        let p = update_inner(&u)?;
        sol = assemble(p, u);
        done = tracker.record(evaluate_leakage(channels, &sol)?.total);
    }
    let trace = tracker.finish(done.unwrap());
    log::debug!(
        "zfws on {config}: {} after {} iterations, J = {:.3e}",
        trace.termination,
        trace.iterations(),
        trace.final_leakage()
    );
    Ok((sol, trace))
}

/// Dispatch on `scheme`.
pub fn run_scheme(
    scheme: Scheme,
    channels: &ChannelSet,
    config: &SystemConfig,
    opts: &IaOptions,
) -> Result<(IaSolution, IaTrace)> {
    match scheme {
        Scheme::Conventional => conventional_ia(channels, config, opts),
        Scheme::Wslm => wslm_ia(channels, config, opts),
        Scheme::Zfws => zfws_ia(channels, config, opts),
    }
}

/// Variable/equation count for WSLM alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WslmFeasibility {
    pub feasible: bool,
    /// `Nv = K·d·(M + N − 2d) + d·(Ne − d)`.
    pub variables: i64,
    /// `Neq = K·(K−1)·d² + K·(Ne − d)·d`.
    pub equations: i64,
    /// `K·(M + N) − (K² + 1)·d`.
    pub condition_lhs: i64,
    /// `Ne·(K − 1)`.
    pub condition_rhs: i64,
}

/// WSLM is proper when `K(M+N) − (K²+1)d ≥ Ne(K−1)` (equivalently `Nv ≥ Neq`)
/// and the eavesdropper subspace exists (`Ne ≥ d`).
pub fn wslm_feasible(config: &SystemConfig) -> WslmFeasibility {
    let k = config.users as i64;
    let m = config.tx_antennas as i64;
    let n = config.rx_antennas as i64;
    let ne = config.eve_antennas as i64;
    let d = config.streams as i64;
    let variables = k * d * (m + n - 2 * d) + d * (ne - d);
    let equations = k * (k - 1) * d * d + k * (ne - d) * d;
    let condition_lhs = k * (m + n) - (k * k + 1) * d;
    let condition_rhs = ne * (k - 1);
    WslmFeasibility {
        feasible: condition_lhs >= condition_rhs && ne >= d,
        variables,
        equations,
        condition_lhs,
        condition_rhs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZfwsFeasibility {
    pub feasible: bool,
    /// `M − d ≥ Ne`: the wiretap channel leaves a d-dimensional null space.
    pub antenna_ok: bool,
    /// `N ≥ K·d`.
    pub subspace_ok: bool,
}

pub fn zfws_feasible(config: &SystemConfig) -> ZfwsFeasibility {
    let antenna_ok = config.tx_antennas >= config.streams + config.eve_antennas;
    let subspace_ok = config.rx_antennas >= config.users * config.streams;
    ZfwsFeasibility {
        feasible: antenna_ok && subspace_ok,
        antenna_ok,
        subspace_ok,
    }
}
