//! Cocktail BPSK: two BPSK streams carried by one real amplitude.
//!
//! When the two symbols agree (case I) the transmitter sends `α·x₁`; when they
//! differ (case II) it sends `(β/2)·x₁`. The receiver slices `y₁` for `x₁`,
//! subtracts `β·x̂₁` and slices the remainder for `x₂`:
//!
//! | case | x₁ | x₂ | x     | y₂ (noise-free) |
//! |------|----|----|-------|-----------------|
//! | I    | +1 | +1 | α     | α − β           |
//! | I    | −1 | −1 | −α    | −(α − β)        |
//! | II   | −1 | +1 | −β/2  | β/2             |
//! | II   | +1 | −1 | β/2   | −β/2            |

use std::f64::consts::{LN_2, LOG2_E};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mi::{bpsk_mi, NoiseModel};

/// Probability of case I used by every published formula.
pub const DEFAULT_ETA: f64 = 0.5;

/// One BPSK symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Symbol {
    pub fn value(self) -> f64 {
        match self {
            Symbol::Plus => 1.0,
            Symbol::Minus => -1.0,
        }
    }

    /// Hard decision on a real sample. Zero maps to [`Symbol::Plus`].
    pub fn slice(y: f64) -> Self {
        if y >= 0.0 {
            Symbol::Plus
        } else {
            Symbol::Minus
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::Plus
        } else {
            Symbol::Minus
        }
    }
}

impl TryFrom<i32> for Symbol {
    type Error = Error;

    fn try_from(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Symbol::Plus),
            -1 => Ok(Symbol::Minus),
            other => Err(Error::InvalidArgument(format!("BPSK symbol must be ±1, got {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolPair {
    pub x1: Symbol,
    pub x2: Symbol,
}

impl SymbolPair {
    pub fn new(x1: Symbol, x2: Symbol) -> Self {
        Self { x1, x2 }
    }

    /// The four combinations in table order: (+,+), (−,−), (−,+), (+,−).
    pub fn all() -> [SymbolPair; 4] {
        use Symbol::*;
        [
            SymbolPair::new(Plus, Plus),
            SymbolPair::new(Minus, Minus),
            SymbolPair::new(Minus, Plus),
            SymbolPair::new(Plus, Minus),
        ]
    }

    /// Case I: the symbols agree.
    pub fn is_case_one(&self) -> bool {
        self.x1 == self.x2
    }
}

/// The `(α, β, η)` triple: case-I amplitude, detection offset and case-I probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CocktailParams {
    alpha: f64,
    beta: f64,
    eta: f64,
}

impl CocktailParams {
    /// Requires `α > β > 0` and `0 < η < 1`.
    pub fn new(alpha: f64, beta: f64, eta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && eta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite parameter (alpha={alpha}, beta={beta}, eta={eta})"
            )));
        }
        if !(beta > 0.0 && alpha > beta) {
            return Err(Error::InvalidParams(format!(
                "need alpha > beta > 0, got alpha={alpha}, beta={beta}"
            )));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidParams(format!("need 0 < eta < 1, got {eta}")));
        }
        if eta != DEFAULT_ETA {
            log::warn!(
                "eta = {eta}: the low-SNR gain approximation assumes equiprobable cases (eta = 0.5)"
            );
        }
        Ok(Self { alpha, beta, eta })
    }

    pub fn with_default_eta(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, DEFAULT_ETA)
    }

    /// Parameters with `α/β = ratio` scaled so the input energy equals `input_energy`.
    ///
    /// From `E_in = η r² β² + (1 − η) β²/4`, `β = √(E_in / (η r² + (1 − η)/4))`;
    /// for `η = 1/2` this is `√(2 E_in / (r² + 1/4))`.
    pub fn from_ratio(ratio: f64, input_energy: f64, eta: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 1.0) {
            return Err(Error::InvalidParams(format!(
                "ratio alpha/beta must exceed 1 (alpha > beta > 0), got {ratio}"
            )));
        }
        if !(input_energy.is_finite() && input_energy > 0.0) {
            return Err(Error::InvalidParams(format!(
                "input energy must be finite and positive, got {input_energy}"
            )));
        }
        let beta = (input_energy / (eta * ratio * ratio + (1.0 - eta) * 0.25)).sqrt();
        Self::new(ratio * beta, beta, eta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn ratio(&self) -> f64 {
        self.alpha / self.beta
    }

    /// Transmitted amplitude magnitude in case II.
    pub fn half_beta(&self) -> f64 {
        0.5 * self.beta
    }
}

/// Transmitted amplitude for a symbol pair.
pub fn encode(pair: SymbolPair, params: &CocktailParams) -> f64 {
    let x1 = pair.x1.value();
    if pair.is_case_one() {
        params.alpha * x1
    } else {
        params.half_beta() * x1
    }
}

/// Received and modified signals for one channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceivedSample {
    pub y1: f64,
    pub y2: f64,
}

/// How the second stage removes the first symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionMode {
    /// Subtract `β·x̂₁` using the first-stage decision.
    #[default]
    DecisionDirected,
    /// Subtract `β·x₁` using the transmitted symbol.
    GenieAided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub x1: Symbol,
    pub y2: f64,
    pub x2: Symbol,
}

impl Detection {
    pub fn pair(&self) -> SymbolPair {
        SymbolPair::new(self.x1, self.x2)
    }
}

/// Two-stage decision-directed detection of `y₁`.
pub fn detect(y1: f64, params: &CocktailParams) -> Result<Detection> {
    if !y1.is_finite() {
        return Err(Error::InvalidArgument(format!("received sample must be finite, got {y1}")));
    }
    let x1 = Symbol::slice(y1);
    Ok(second_stage(y1, x1, x1, params))
}

/// Detection where the second stage subtracts the true `x₁`; the reported
/// `x₁` is still the first-stage decision.
pub fn detect_genie(y1: f64, true_x1: Symbol, params: &CocktailParams) -> Result<Detection> {
    if !y1.is_finite() {
        return Err(Error::InvalidArgument(format!("received sample must be finite, got {y1}")));
    }
    Ok(second_stage(y1, Symbol::slice(y1), true_x1, params))
}

pub fn detect_with(
    y1: f64,
    true_x1: Symbol,
    mode: DetectionMode,
    params: &CocktailParams,
) -> Result<Detection> {
    match mode {
        DetectionMode::DecisionDirected => detect(y1, params),
        DetectionMode::GenieAided => detect_genie(y1, true_x1, params),
    }
}

#[inline]
pub(crate) fn second_stage(y1: f64, x1_hat: Symbol, cancel: Symbol, params: &CocktailParams) -> Detection {
    let y2 = y1 - params.beta * cancel.value();
    Detection { x1: x1_hat, y2, x2: Symbol::slice(y2) }
}

/// Average symbol energies seen by the two detection stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub e_in: f64,
    pub e1: f64,
    pub e2: f64,
    pub e_total: f64,
    pub delta_e: f64,
}

pub fn energy_report(params: &CocktailParams) -> EnergyReport {
    energies(params.alpha, params.beta, params.eta)
}

fn energies(alpha: f64, beta: f64, eta: f64) -> EnergyReport {
    let case_two = (1.0 - eta) * (0.5 * beta).powi(2);
    let e1 = eta * alpha * alpha + case_two;
    let e2 = eta * (alpha - beta).powi(2) + case_two;
    EnergyReport { e_in: e1, e1, e2, e_total: e1 + e2, delta_e: e2 }
}

/// Per-stream achievable rates in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdrBreakdown {
    pub r1: f64,
    pub r2: f64,
    pub total: f64,
}

/// Case-averaged BPSK rates of the two streams, with the second stage assumed
/// to cancel `x₁` perfectly.
pub fn adr_breakdown(params: &CocktailParams, noise: NoiseModel) -> Result<AdrBreakdown> {
    adr_from_amplitudes(params.alpha, params.beta, params.eta, noise)
}

/// Unvalidated form; also admits the `α = β` boundary.
pub(crate) fn adr_from_amplitudes(alpha: f64, beta: f64, eta: f64, noise: NoiseModel) -> Result<AdrBreakdown> {
    let shared = bpsk_mi(0.5 * beta, noise)?;
    let r1 = eta * bpsk_mi(alpha, noise)? + (1.0 - eta) * shared;
    let r2 = eta * bpsk_mi((alpha - beta).abs(), noise)? + (1.0 - eta) * shared;
    Ok(AdrBreakdown { r1, r2, total: r1 + r2 })
}

/// Low-SNR rate gain `(ΔE/σ²) log₂ e`.
pub fn adr_gain_low_snr(params: &CocktailParams, noise: NoiseModel) -> f64 {
    energy_report(params).delta_e / noise.variance() * LOG2_E
}

/// Linear `Eb/σ² = (E_in/σ²) / ℝ`.
pub fn eb_over_n0(params: &CocktailParams, noise: NoiseModel) -> Result<f64> {
    let total = adr_breakdown(params, noise)?.total;
    eb_over_n0_for_rate(energy_report(params).e_in, noise, total)
}

/// `(energy/σ²) / rate`, failing when the rate underflows.
pub fn eb_over_n0_for_rate(symbol_energy: f64, noise: NoiseModel, rate: f64) -> Result<f64> {
    let v = symbol_energy / noise.variance() / rate;
    if rate <= 0.0 || !v.is_finite() {
        return Err(Error::Numeric(format!(
            "rate {rate} too small to define Eb/N0 at Es/σ² = {}",
            symbol_energy / noise.variance()
        )));
    }
    Ok(v)
}

/// Closed-form `ρ → 0` limit of [`eb_over_n0`], `E₁ / (E_T log₂ e)`.
pub fn limiting_eb_over_n0(params: &CocktailParams) -> f64 {
    let e = energy_report(params);
    e.e1 / e.e_total * LN_2
}

/// Gaussian-input limit `ln 2` (−1.59 dB).
pub fn capacity_limit_eb_over_n0() -> f64 {
    LN_2
}
