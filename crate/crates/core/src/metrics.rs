//! Achievable rates, secrecy rates and post-hoc alignment diagnostics.
//!
//! Rates use `log₂|I + S·R⁻¹| = log₂|R + S| − log₂|R|`, so no interference
//! covariance is ever inverted.

use thiserror::Error;

use crate::channel::{ChannelSet, SystemConfig};
use crate::ia::{IaSolution, Scheme};
use crate::numerics::{logdet2, orthonormal_complement, svd, CMatrix, NumericsError, C64};

/// Smallest acceptable ratio `σ_d / σ_1` of the desired-signal matrix.
pub const RANK_MARGIN_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("WSLM diagnostics need the eavesdropper subspace")]
    MissingEveBasis,
    #[error("paired lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

fn check_user(channels: &ChannelSet, precoders: &[CMatrix], user: usize) -> Result<()> {
    let k = channels.users();
    if precoders.len() != k {
        return Err(MetricsError::Dimension(format!(
            "{} precoders for {k} users",
            precoders.len()
        )));
    }
    if user >= k {
        return Err(MetricsError::Dimension(format!(
            "user {user} out of 0..{k}"
        )));
    }
    Ok(())
}

/// `log₂|R + S| − log₂|R|` with `S` the Gram of `desired` and `R` the sum of
/// the interference Grams plus `σ²·I`.
fn rate(
    desired: CMatrix,
    interference: impl Iterator<Item = CMatrix>,
    noise_var: f64,
) -> Result<f64> {
    let rows = desired.nrows();
    let mut r = CMatrix::identity(rows, rows) * C64::new(noise_var, 0.0);
    for hf in interference {
        if hf.nrows() != rows {
            return Err(MetricsError::Dimension(
                "interference rows differ from signal rows".into(),
            ));
        }
        r += &hf * hf.adjoint();
    }
    let s = &desired * desired.adjoint();
    let value = logdet2(&(&r + s))? - logdet2(&r)?;
    Ok(value.max(0.0))
}

fn product(h: &CMatrix, f: &CMatrix) -> Result<CMatrix> {
    if h.ncols() != f.nrows() {
        return Err(MetricsError::Dimension(format!(
            "channel {}x{} cannot carry a {}x{} precoder",
            h.nrows(),
            h.ncols(),
            f.nrows(),
            f.ncols()
        )));
    }
    Ok(h * f)
}

/// Rate of user `user` at its own receiver, other users treated as noise.
pub fn legit_rate(
    channels: &ChannelSet,
    precoders: &[CMatrix],
    noise_var: f64,
    user: usize,
) -> Result<f64> {
    check_user(channels, precoders, user)?;
    let desired = product(channels.link(user, user), &precoders[user])?;
    let interference = (0..channels.users())
        .filter(|&l| l != user)
        .map(|l| product(channels.link(user, l), &precoders[l]))
        .collect::<Result<Vec<_>>>()?;
    rate(desired, interference.into_iter(), noise_var)
}

/// Rate at which the eavesdropper decodes user `user`, other users treated as noise.
pub fn eave_rate(
    channels: &ChannelSet,
    precoders: &[CMatrix],
    noise_var: f64,
    user: usize,
) -> Result<f64> {
    check_user(channels, precoders, user)?;
    let desired = product(channels.eavesdropper(user), &precoders[user])?;
    let interference = (0..channels.users())
        .filter(|&l| l != user)
        .map(|l| product(channels.eavesdropper(l), &precoders[l]))
        .collect::<Result<Vec<_>>>()?;
    rate(desired, interference.into_iter(), noise_var)
}

/// Per-user rates in bits/s/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub legit: Vec<f64>,
    pub eavesdropper: Vec<f64>,
    /// `[legit − eavesdropper]⁺` per user.
    pub secrecy: Vec<f64>,
    /// Secrecy sum rate.
    pub ssr: f64,
}

pub fn secrecy_report(
    channels: &ChannelSet,
    sol: &IaSolution,
    config: &SystemConfig,
) -> Result<RateReport> {
    let k = config.users;
    let mut legit = Vec::with_capacity(k);
    let mut eavesdropper = Vec::with_capacity(k);
    for user in 0..k {
        legit.push(legit_rate(
            channels,
            &sol.precoders,
            config.noise_var,
            user,
        )?);
        eavesdropper.push(eave_rate(channels, &sol.precoders, config.noise_var, user)?);
    }
    let secrecy: Vec<f64> = legit
        .iter()
        .zip(&eavesdropper)
        .map(|(r, re)| (r - re).max(0.0))
        .collect();
    let ssr = secrecy.iter().sum();
    Ok(RateReport {
        legit,
        eavesdropper,
        secrecy,
        ssr,
    })
}

/// How well the alignment conditions hold for a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    /// `sqrt(Σ_{ℓ≠k} ‖W_kᴴ·H_kℓ·F_ℓ‖²)` with `W_k` the complement of `U_k`.
    pub imli_residual: Vec<f64>,
    /// `σ_d / σ_1` of `W_kᴴ·H_kk·F_k`.
    pub rank_margin: Vec<f64>,
    /// Per transmitter: `‖H_e,ℓ·F_ℓ‖` (conventional, ZFWS) or `‖Eᴴ·H_e,ℓ·F_ℓ‖`
    /// with `E` the complement of `U_e` (WSLM).
    pub wiretap_leakage: Vec<f64>,
}

impl DiagnosticsReport {
    pub fn rank_ok(&self) -> bool {
        self.rank_margin.iter().all(|&m| m >= RANK_MARGIN_THRESHOLD)
    }
}

pub fn ia_diagnostics(
    channels: &ChannelSet,
    sol: &IaSolution,
    config: &SystemConfig,
) -> Result<DiagnosticsReport> {
    let k = config.users;
    if sol.precoders.len() != k || sol.interference_bases.len() != k {
        return Err(MetricsError::Dimension(format!(
            "solution has {} precoders and {} bases for {k} users",
            sol.precoders.len(),
            sol.interference_bases.len()
        )));
    }
    let mut imli_residual = Vec::with_capacity(k);
    let mut rank_margin = Vec::with_capacity(k);
    for rx in 0..k {
        let w = orthonormal_complement(&sol.interference_bases[rx])?;
        let wh = w.adjoint();
        let energy: f64 = (0..k)
            .filter(|&l| l != rx)
            .map(|l| (&wh * channels.link(rx, l) * &sol.precoders[l]).norm_squared())
            .sum();
        imli_residual.push(energy.sqrt());

        let desired = &wh * channels.link(rx, rx) * &sol.precoders[rx];
        let sv = svd(&desired)?.singular_values;
        let largest = sv[0];
        let dth = sv.get(config.streams - 1).copied().unwrap_or(0.0);
        rank_margin.push(if largest > 0.0 { dth / largest } else { 0.0 });
    }

    let complement = match sol.scheme {
        Scheme::Wslm => {
            let ue = sol
                .eve_basis
                .as_ref()
                .ok_or(MetricsError::MissingEveBasis)?;
            if ue.ncols() < ue.nrows() {
                Some(Some(orthonormal_complement(ue)?))
            } else {
                // U_e fills the eavesdropper space: nothing lies outside it
                Some(None)
            }
        }
        Scheme::Conventional | Scheme::Zfws => None,
    };
    let wiretap_leakage = (0..k)
        .map(|l| {
            let hf = channels.eavesdropper(l) * &sol.precoders[l];
            match &complement {
                None => hf.norm(),
                Some(Some(e)) => (e.adjoint() * hf).norm(),
                Some(None) => 0.0,
            }
        })
        .collect();

    Ok(DiagnosticsReport {
        imli_residual,
        rank_margin,
        wiretap_leakage,
    })
}

/// Mean of the paired differences `proposed[n] − conventional[n]`.
pub fn ssr_improvement(proposed: &[f64], conventional: &[f64]) -> Result<f64> {
    if proposed.len() != conventional.len() {
        return Err(MetricsError::LengthMismatch(
            proposed.len(),
            conventional.len(),
        ));
    }
    if proposed.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = proposed.iter().zip(conventional).map(|(p, c)| p - c).sum();
    Ok(total / proposed.len() as f64)
}
