//! Entropy, finite-alphabet mutual information and Shannon capacity over AWGN.
//!
//! All channels are treated as complex baseband: a [`NoiseModel`] carries the
//! total noise power `σ²`, split evenly as `σ²/2` over the in-phase and
//! quadrature components. A one-dimensional alphabet (BPSK, 4-ASK) occupies
//! the in-phase axis only. Under this convention the symbol SNR is
//! `ρ = Es / σ²` for every alphabet and all rate curves share the low-SNR
//! slope `log₂ e` of `log₂(1 + ρ)`.

use std::f64::consts::{E, LN_2, LOG2_E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, GaussHermite, MIN_HERMITE_ORDER};

/// Additive white Gaussian noise with total (complex) power `variance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    variance: f64,
}

impl NoiseModel {
    pub fn new(variance: f64) -> Result<Self> {
        if !variance.is_finite() || variance <= 0.0 {
            return Err(Error::InvalidNoise(variance));
        }
        Ok(Self { variance })
    }

    /// Noise whose power puts a signal of energy `signal_energy` at linear SNR `snr`.
    pub fn for_snr(signal_energy: f64, snr: f64) -> Result<Self> {
        if !(snr.is_finite() && snr > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "SNR must be finite and positive, got {snr}"
            )));
        }
        Self::new(signal_energy / snr)
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Variance seen by each real component.
    pub fn per_dimension_variance(&self) -> f64 {
        0.5 * self.variance
    }

    pub fn per_dimension_sd(&self) -> f64 {
        self.per_dimension_variance().sqrt()
    }
}

/// Differential entropy in bits of a real Gaussian sample with the model's variance,
/// `log₂ √(2πeσ²)`. Negative for small variances.
pub fn noise_entropy(noise: NoiseModel) -> f64 {
    gaussian_entropy_bits(noise.variance())
}

fn gaussian_entropy_bits(variance: f64) -> f64 {
    0.5 * (2.0 * PI * E * variance).log2()
}

/// A finite input alphabet with prior probabilities.
///
/// Points are stored as raw (unnormalized) coordinates; one-dimensional
/// alphabets keep a zero quadrature component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    points: Vec<[f64; 2]>,
    priors: Vec<f64>,
    dim: usize,
}

const PRIOR_SUM_TOL: f64 = 1e-12;

impl Constellation {
    /// A one-dimensional (real) alphabet.
    pub fn real(points: Vec<f64>, priors: Vec<f64>) -> Result<Self> {
        Self::build(points.into_iter().map(|p| [p, 0.0]).collect(), priors, 1)
    }

    /// A two-dimensional alphabet given as `(in-phase, quadrature)` pairs.
    pub fn complex(points: Vec<(f64, f64)>, priors: Vec<f64>) -> Result<Self> {
        Self::build(points.into_iter().map(|(i, q)| [i, q]).collect(), priors, 2)
    }

    /// Builds from symbols given as slices of uniform length 1 or 2.
    pub fn from_symbols(symbols: &[Vec<f64>], priors: Vec<f64>) -> Result<Self> {
        let dim = symbols.first().map(Vec::len).unwrap_or(0);
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidConstellation(format!(
                "symbols must be 1-D or 2-D, got {dim}-D"
            )));
        }
        if let Some(bad) = symbols.iter().find(|s| s.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: bad.len() });
        }
        let points = symbols
            .iter()
            .map(|s| if dim == 1 { [s[0], 0.0] } else { [s[0], s[1]] })
            .collect();
        Self::build(points, priors, dim)
    }

    fn build(points: Vec<[f64; 2]>, priors: Vec<f64>, dim: usize) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidConstellation("need at least 2 points".into()));
        }
        if points.len() != priors.len() {
            return Err(Error::InvalidConstellation(format!(
                "{} points but {} priors",
                points.len(),
                priors.len()
            )));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidConstellation("non-finite coordinate".into()));
        }
        if priors.iter().any(|&p| !(p.is_finite() && p >= 0.0)) {
            return Err(Error::InvalidConstellation("priors must be finite and >= 0".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidConstellation(format!("priors sum to {total}, not 1")));
        }
        for (i, a) in points.iter().enumerate() {
            if points[i + 1..].iter().any(|b| a == b) {
                return Err(Error::InvalidConstellation(format!(
                    "duplicate point {:?}",
                    &a[..dim]
                )));
            }
        }
        Ok(Self { points, priors, dim })
    }

    fn uniform_real(points: Vec<f64>) -> Self {
        let p = 1.0 / points.len() as f64;
        let n = points.len();
        Self::real(points, vec![p; n]).expect("well-formed built-in alphabet")
    }

    fn uniform_complex(points: Vec<(f64, f64)>) -> Self {
        let p = 1.0 / points.len() as f64;
        let n = points.len();
        Self::complex(points, vec![p; n]).expect("well-formed built-in alphabet")
    }

    /// Unit-energy BPSK `{+1, −1}`.
    pub fn bpsk() -> Self {
        Self::uniform_real(vec![1.0, -1.0])
    }

    /// Antipodal pair `{+A, −A}` with equal priors.
    pub fn antipodal(amplitude: f64) -> Result<Self> {
        Self::real(vec![amplitude, -amplitude], vec![0.5, 0.5])
    }

    /// Unit-average-energy 4-ASK `{±1, ±3}/√5`, equal priors.
    pub fn ask4() -> Self {
        let s = 5f64.sqrt();
        Self::uniform_real(vec![-3.0 / s, -1.0 / s, 1.0 / s, 3.0 / s])
    }

    /// Unit-energy QPSK on the diagonals.
    pub fn qpsk() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        Self::uniform_complex(vec![(a, a), (-a, a), (-a, -a), (a, -a)])
    }

    /// Unit-energy 8-PSK.
    pub fn psk8() -> Self {
        Self::uniform_complex(
            (0..8)
                .map(|k| {
                    let phase = k as f64 * PI / 4.0;
                    (phase.cos(), phase.sin())
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Symbol coordinates; the quadrature entry is zero for 1-D alphabets.
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Prior-weighted mean symbol energy `Es`.
    pub fn mean_energy(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.priors)
            .map(|(p, w)| w * (p[0] * p[0] + p[1] * p[1]))
            .sum()
    }

    /// Copy with every point multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let points = self.points.iter().map(|p| [p[0] * factor, p[1] * factor]).collect();
        Self::build(points, self.priors.clone(), self.dim)
    }

    /// `log₂ |alphabet|`, the saturation rate.
    pub fn max_rate(&self) -> f64 {
        (self.len() as f64).log2()
    }

    /// Input entropy `H(X)` in bits.
    pub fn entropy(&self) -> f64 {
        self.priors
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }
}

/// One point of a rate curve: linear symbol SNR and rate in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub snr_linear: f64,
    pub rate: f64,
}

/// Rate of `c` at linear symbol SNR `snr`, with `c` taken as-is and the noise
/// power set to `Es / snr`.
pub fn rate_point(c: &Constellation, snr: f64) -> Result<RatePoint> {
    let noise = NoiseModel::for_snr(c.mean_energy(), snr)?;
    Ok(RatePoint { snr_linear: snr, rate: constellation_mi(c, noise)? })
}

/// `ln(1 + e^u)` without overflow.
#[inline]
fn softplus(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

fn check_rule(rule: &GaussHermite) -> Result<()> {
    if rule.order() < MIN_HERMITE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "Gauss-Hermite order {} is below the minimum {MIN_HERMITE_ORDER}",
            rule.order()
        )));
    }
    Ok(())
}

fn check_amplitude(amplitude: f64) -> Result<()> {
    if !amplitude.is_finite() {
        return Err(Error::InvalidArgument(format!("amplitude must be finite, got {amplitude}")));
    }
    if amplitude < 0.0 {
        return Err(Error::InvalidArgument(format!("amplitude must be >= 0, got {amplitude}")));
    }
    Ok(())
}

/// Mutual information in bits of equiprobable BPSK `{±A}` on the in-phase axis.
///
/// Evaluates `H(Y) − H(N)` for the in-phase output, whose density is the
/// equal-weight mixture of `N(±A, σ²/2)`. The difference is taken inside the
/// expectation, `1 − E[log₂(1 + exp(−2A(A + n)/s²))]` with `n ~ N(0, s²)`,
/// so no cancellation between two large entropies occurs.
pub fn bpsk_mi(amplitude: f64, noise: NoiseModel) -> Result<f64> {
    bpsk_mi_with(amplitude, noise, GaussHermite::default_rule())
}

pub fn bpsk_mi_with(amplitude: f64, noise: NoiseModel, rule: &GaussHermite) -> Result<f64> {
    check_amplitude(amplitude)?;
    check_rule(rule)?;
    if amplitude == 0.0 {
        return Ok(0.0);
    }
    let s2 = noise.per_dimension_variance();
    let k = 2.0 * amplitude / s2;
    let loss = rule.expect_normal(s2.sqrt(), |n| softplus(-k * (amplitude + n))) * LOG2_E;
    Ok((1.0 - loss).clamp(0.0, 1.0))
}

/// Same quantity as [`bpsk_mi`] computed by integrating the output entropy
/// directly with adaptive Simpson over `±(A + 12 s)`.
pub fn bpsk_mi_simpson(amplitude: f64, noise: NoiseModel) -> Result<f64> {
    check_amplitude(amplitude)?;
    let c = Constellation::real(vec![amplitude, -amplitude], vec![0.5, 0.5]);
    match c {
        Ok(c) => constellation_mi_simpson(&c, noise),
        // amplitude 0 collapses both points
        Err(_) => Ok(0.0),
    }
}

/// Mutual information in bits between a finite alphabet and its AWGN output.
///
/// For each symbol the output log-density is expanded around the noise
/// density, `log p(x_k + n) − log φ(n) = log Σ_j p_j exp(−(|d_kj|² + 2 d_kj·n) / 2s²)`,
/// and averaged over `n` by Gauss–Hermite quadrature (tensor product for 2-D).
/// The log-sum is evaluated in log space, so distant components underflow to
/// zero weight instead of producing `0 · log 0`.
pub fn constellation_mi(c: &Constellation, noise: NoiseModel) -> Result<f64> {
    constellation_mi_with(c, noise, GaussHermite::default_rule())
}

pub fn constellation_mi_with(c: &Constellation, noise: NoiseModel, rule: &GaussHermite) -> Result<f64> {
    check_rule(rule)?;
    let s2 = noise.per_dimension_variance();
    let sd = s2.sqrt();
    let inv2s2 = 0.5 / s2;
    let active: Vec<usize> = (0..c.len()).filter(|&j| c.priors[j] > 0.0).collect();
    let ln_priors: Vec<f64> = active.iter().map(|&j| c.priors[j].ln()).collect();

    let mut expected_log_ratio = 0.0;
    for &k in &active {
        let xk = c.points[k];
        // displacement d_kj = x_k - x_j and its squared norm
        let d: Vec<[f64; 3]> = active
            .iter()
            .map(|&j| {
                let dx = xk[0] - c.points[j][0];
                let dy = xk[1] - c.points[j][1];
                [dx, dy, dx * dx + dy * dy]
            })
            .collect();
        let exponent = |d: &[f64; 3], lp: f64, n0: f64, n1: f64| {
            lp - (d[2] + 2.0 * (d[0] * n0 + d[1] * n1)) * inv2s2
        };
        let log_sum = |n0: f64, n1: f64| {
            let m = d
                .iter()
                .zip(&ln_priors)
                .map(|(d, &lp)| exponent(d, lp, n0, n1))
                .fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = d
                .iter()
                .zip(&ln_priors)
                .map(|(d, &lp)| (exponent(d, lp, n0, n1) - m).exp())
                .sum();
            m + sum.ln()
        };
        let e = if c.dim == 1 {
            rule.expect_normal(sd, |n| log_sum(n, 0.0))
        } else {
            rule.expect_normal_2d(sd, log_sum)
        };
        expected_log_ratio += c.priors[k] * e;
    }
    let mi = -expected_log_ratio * LOG2_E;
    Ok(mi.clamp(0.0, c.entropy()))
}

/// Cross-check route for 1-D alphabets: `H(Y)` by adaptive Simpson over
/// `[min − 12s, max + 12s]`, minus the per-dimension noise entropy.
pub fn constellation_mi_simpson(c: &Constellation, noise: NoiseModel) -> Result<f64> {
    if c.dim != 1 {
        return Err(Error::DimensionMismatch { expected: 1, actual: c.dim });
    }
    let s2 = noise.per_dimension_variance();
    let sd = s2.sqrt();
    let xs: Vec<f64> = c.points.iter().map(|p| p[0]).collect();
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 12.0 * sd;
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 12.0 * sd;
    let ln_norm = -0.5 * (2.0 * PI * s2).ln();
    let ln_priors: Vec<f64> = c.priors.iter().map(|p| p.ln()).collect();
    let integrand = |y: f64| {
        let mut buf: Vec<f64> = xs
            .iter()
            .zip(&ln_priors)
            .map(|(x, lp)| lp - (y - x) * (y - x) / (2.0 * s2))
            .collect();
        let lp = log_sum_exp(&mut buf) + ln_norm;
        let p = lp.exp();
        if p == 0.0 {
            0.0
        } else {
            -p * lp
        }
    };
    let panels = (((hi - lo) / sd) * 2.0).ceil().clamp(64.0, 100_000.0) as usize;
    let h_y = adaptive_simpson(integrand, lo, hi, 1e-13, panels) / LN_2;
    let mi = h_y - gaussian_entropy_bits(s2);
    Ok(mi.clamp(0.0, c.entropy()))
}

fn log_sum_exp(v: &mut [f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn check_snr(snr_linear: f64) -> Result<()> {
    if !snr_linear.is_finite() || snr_linear < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "SNR must be finite and >= 0, got {snr_linear}"
        )));
    }
    Ok(())
}

/// Gaussian-input capacity `log₂(1 + ρ)`.
pub fn awgn_capacity(snr_linear: f64) -> Result<f64> {
    check_snr(snr_linear)?;
    Ok(snr_linear.ln_1p() / LN_2)
}

/// First-order approximation `ρ log₂ e`, meaningful only for `ρ ≪ 1`.
pub fn low_snr_capacity(snr_linear: f64) -> f64 {
    snr_linear * LOG2_E
}
