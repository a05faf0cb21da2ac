//! Rate analysis for cocktail BPSK over AWGN channels.
//!
//! * [`mi`]: entropy, finite-alphabet mutual information and capacity kernels.
//! * [`cocktail`]: the two-stream amplitude mapping, detector, energy accounting and rates.
//! * [`linksim`]: seeded Monte Carlo link simulator and plug-in MI estimator.
//! * [`sweep`]: SNR grids and the datasets behind the rate-comparison figures.

pub mod cocktail;
pub mod error;
pub mod linksim;
pub mod mi;
pub mod quadrature;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use mi::{
    awgn_capacity, bpsk_mi, constellation_mi, low_snr_capacity, noise_entropy, Constellation,
    NoiseModel, RatePoint,
};
pub use cocktail::{
    adr_breakdown, adr_gain_low_snr, detect, eb_over_n0, encode, energy_report, AdrBreakdown,
    CocktailParams, DetectionMode, EnergyReport, Symbol, SymbolPair,
};
pub use linksim::{mc_bpsk_mi, run_link, LinkSimReport, MiEstimate, SimConfig};
pub use sweep::{
    fig1_dataset, fig2_dataset, fig3_dataset, sweep_to_table, AxisMode, Grid, RateCurve, Scheme,
    SweepSpec, TableRow,
};
