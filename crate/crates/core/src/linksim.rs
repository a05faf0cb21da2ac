//! Seeded Monte Carlo simulation of the cocktail BPSK link.
//!
//! Work is cut into fixed shards of [`SHARD_SIZE`] symbols. Shard `k` draws
//! from ChaCha8 seeded with the run seed on stream `k`, so results do not
//! depend on how many threads execute the shards. Gaussian noise comes from
//! `rand_distr::StandardNormal` (ziggurat); both generators are pinned by the
//! lockfile, which keeps golden outputs stable.
//!
//! Noise is drawn on the in-phase axis with variance `σ²/2`, matching the
//! complex-baseband convention of [`crate::mi`].

use std::f64::consts::{LN_2, LOG2_E, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocktail::{encode, second_stage, CocktailParams, DetectionMode, Symbol, SymbolPair};
use crate::error::{Error, Result};
use crate::mi::{noise_entropy, NoiseModel};

pub const SHARD_SIZE: u64 = 1 << 16;

/// Fewest samples [`mc_bpsk_mi`] accepts.
pub const MIN_MI_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: CocktailParams,
    pub noise: NoiseModel,
    pub n_symbols: u64,
    pub seed: u64,
    pub detection_mode: DetectionMode,
}

impl SimConfig {
    pub fn new(
        params: CocktailParams,
        noise: NoiseModel,
        n_symbols: u64,
        seed: u64,
        detection_mode: DetectionMode,
    ) -> Result<Self> {
        let cfg = Self { params, noise, n_symbols, seed, detection_mode };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_symbols == 0 {
            return Err(Error::InvalidArgument("n_symbols must be >= 1".into()));
        }
        // re-run constructors so deserialized configs are checked too
        CocktailParams::new(self.params.alpha(), self.params.beta(), self.params.eta())?;
        NoiseModel::new(self.noise.variance())?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSimReport {
    pub n_symbols: u64,
    pub errors_x1: u64,
    pub errors_x2: u64,
    pub case1_count: u64,
    /// Plug-in estimate of the case-conditioned rate of stream 1, bits per use.
    pub empirical_mi_x1: f64,
    pub empirical_mi_x1_std_error: f64,
    /// Same for stream 2, evaluated on the actual second-stage signal. In
    /// genie mode this estimates the ideal `ℝ₂`; in decision-directed mode it
    /// includes the loss from first-stage errors and may go negative.
    pub empirical_mi_x2: f64,
    pub empirical_mi_x2_std_error: f64,
    pub seed: u64,
    pub detection_mode: DetectionMode,
}

impl LinkSimReport {
    pub fn ber_x1(&self) -> f64 {
        self.errors_x1 as f64 / self.n_symbols as f64
    }

    pub fn ber_x2(&self) -> f64 {
        self.errors_x2 as f64 / self.n_symbols as f64
    }

    pub fn case1_fraction(&self) -> f64 {
        self.case1_count as f64 / self.n_symbols as f64
    }
}

/// Streaming mean/variance accumulator, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }

    fn std_error(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ShardTally {
    errors_x1: u64,
    errors_x2: u64,
    case1: u64,
    info_x1: Moments,
    info_x2: Moments,
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

fn shard_ranges(total: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let shards = usize::try_from(total.div_ceil(SHARD_SIZE)).expect("shard count fits in usize");
    (0..shards).into_par_iter().map(move |k| {
        let k = k as u64;
        let start = k * SHARD_SIZE;
        (k, (total - start).min(SHARD_SIZE))
    })
}

/// Information density `log₂ p(y|s)/p(y)` of equiprobable BPSK `±a` at sample `y`.
#[inline]
fn bpsk_information(a: f64, s: Symbol, y: f64, s2: f64) -> f64 {
    let u = -2.0 * a * s.value() * y / s2;
    1.0 - (u.max(0.0) + (-u.abs()).exp().ln_1p()) * LOG2_E
}

/// Runs the link: equiprobable independent `x₁, x₂`, cocktail mapping, AWGN,
/// two-stage detection. Fully determined by the config.
pub fn run_link(config: &SimConfig) -> Result<LinkSimReport> {
    config.validate()?;
    let params = config.params;
    let s2 = config.noise.per_dimension_variance();
    let sd = s2.sqrt();
    let case_two_amp = params.half_beta();
    let case_one_reuse = params.alpha() - params.beta();

    let tallies: Vec<ShardTally> = shard_ranges(config.n_symbols)
        .map(|(shard, len)| {
            let mut rng = shard_rng(config.seed, shard);
            let mut t = ShardTally::default();
            for _ in 0..len {
                let pair = SymbolPair::new(Symbol::from_bit(rng.random()), Symbol::from_bit(rng.random()));
                let n: f64 = rng.sample(StandardNormal);
                let y1 = encode(pair, &params) + sd * n;
                let x1_hat = Symbol::slice(y1);
                let cancel = match config.detection_mode {
                    DetectionMode::DecisionDirected => x1_hat,
                    DetectionMode::GenieAided => pair.x1,
                };
                let d = second_stage(y1, x1_hat, cancel, &params);
                t.errors_x1 += u64::from(d.x1 != pair.x1);
                t.errors_x2 += u64::from(d.x2 != pair.x2);
                let (a1, a2) = if pair.is_case_one() {
                    t.case1 += 1;
                    (params.alpha(), case_one_reuse)
                } else {
                    (case_two_amp, case_two_amp)
                };
                t.info_x1.push(bpsk_information(a1, pair.x1, y1, s2));
                t.info_x2.push(bpsk_information(a2, pair.x2, d.y2, s2));
            }
            t
        })
        .collect();

    let total = tallies.into_iter().fold(ShardTally::default(), |acc, t| ShardTally {
        errors_x1: acc.errors_x1 + t.errors_x1,
        errors_x2: acc.errors_x2 + t.errors_x2,
        case1: acc.case1 + t.case1,
        info_x1: acc.info_x1.merge(t.info_x1),
        info_x2: acc.info_x2.merge(t.info_x2),
    });

    Ok(LinkSimReport {
        n_symbols: config.n_symbols,
        errors_x1: total.errors_x1,
        errors_x2: total.errors_x2,
        case1_count: total.case1,
        empirical_mi_x1: total.info_x1.mean,
        empirical_mi_x1_std_error: total.info_x1.std_error(),
        empirical_mi_x2: total.info_x2.mean,
        empirical_mi_x2_std_error: total.info_x2.std_error(),
        seed: config.seed,
        detection_mode: config.detection_mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Plug-in Monte Carlo estimate of BPSK mutual information.
///
/// Draws `y = ±A + n` with `n ~ N(0, σ²/2)`, averages `−log₂ p(y)` under the
/// exact two-component mixture density to estimate `H(Y)`, and subtracts the
/// noise entropy. The standard error is that of the sample mean.
pub fn mc_bpsk_mi(amplitude: f64, noise: NoiseModel, n_samples: u64, seed: u64) -> Result<MiEstimate> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "amplitude must be finite and >= 0, got {amplitude}"
        )));
    }
    if n_samples < MIN_MI_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_MI_SAMPLES} samples, got {n_samples}"
        )));
    }
    let s2 = noise.per_dimension_variance();
    let sd = s2.sqrt();
    let ln_norm = 0.5 * (2.0 * std::f64::consts::PI * s2).ln() + LN_2;

    let moments: Vec<Moments> = shard_ranges(n_samples)
        .map(|(shard, len)| {
            let mut rng = shard_rng(seed, shard);
            let mut m = Moments::default();
            for _ in 0..len {
                let x = if rng.random::<bool>() { amplitude } else { -amplitude };
                let n: f64 = rng.sample(StandardNormal);
                let y = x + sd * n;
                let a = -(y - amplitude).powi(2) / (2.0 * s2);
                let b = -(y + amplitude).powi(2) / (2.0 * s2);
                let hi = a.max(b);
                // ln p(y) = ln(½(e^a + e^b)) − ½ ln(2π s²)
                let ln_p = hi + (-(a - b).abs()).exp().ln_1p() - ln_norm;
                m.push(-ln_p * LOG2_E);
            }
            m
        })
        .collect();
    let h = moments.into_iter().fold(Moments::default(), Moments::merge);
    let h_noise = noise_entropy(NoiseModel::new(s2)?);
    Ok(MiEstimate { estimate: h.mean - h_noise, std_error: h.std_error() })
}

/// Gaussian tail probability `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Closed-form symbol error rates `(x₁, x₂)` with genie-aided cancellation.
///
/// Stream 1 errs when noise crosses zero from `±α` or `±β/2`; stream 2
/// sees amplitudes `α − β` and `β/2`.
pub fn genie_error_rates(params: &CocktailParams, noise: NoiseModel) -> (f64, f64) {
    let sd = noise.per_dimension_sd();
    let eta = params.eta();
    let q_half = q_function(params.half_beta() / sd);
    let x1 = eta * q_function(params.alpha() / sd) + (1.0 - eta) * q_half;
    let x2 = eta * q_function((params.alpha() - params.beta()) / sd) + (1.0 - eta) * q_half;
    (x1, x2)
}
