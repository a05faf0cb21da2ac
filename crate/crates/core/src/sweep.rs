//! SNR grids, ratio sweeps and the rate-comparison datasets.
//!
//! Every dataset is computed with unit noise power, so the linear axis value
//! is both the symbol SNR `ρ` and the input energy `E_in`. In Eb/N0 mode each
//! point's abscissa is derived from its own rate, `10 log₁₀(ρ / R)`; there is
//! no independent Eb/N0 grid.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocktail::{adr_breakdown, limiting_eb_over_n0, CocktailParams, DEFAULT_ETA};
use crate::error::{Error, Result};
use crate::mi::{awgn_capacity, constellation_mi, Constellation, NoiseModel};
use crate::units::to_db;

/// Ratios used when none are given. Only 3.5 is singled out in the
/// literature; the others bracket it.
pub const DEFAULT_RATIOS: [f64; 4] = [1.5, 2.5, 3.5, 5.0];

/// SNR at which the limiting Eb/N0 is evaluated numerically.
pub const LIMIT_PROBE_SNR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Capacity,
    Bpsk,
    Qpsk,
    #[serde(rename = "4ask")]
    Ask4,
    #[serde(rename = "8psk")]
    Psk8,
    Cocktail,
}

impl Scheme {
    pub const CONVENTIONAL: [Scheme; 5] =
        [Scheme::Capacity, Scheme::Bpsk, Scheme::Ask4, Scheme::Qpsk, Scheme::Psk8];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Capacity => "capacity",
            Scheme::Bpsk => "bpsk",
            Scheme::Qpsk => "qpsk",
            Scheme::Ask4 => "4ask",
            Scheme::Psk8 => "8psk",
            Scheme::Cocktail => "cocktail",
        }
    }

    /// Unit-energy alphabet for finite-alphabet schemes.
    pub fn constellation(self) -> Option<Constellation> {
        match self {
            Scheme::Bpsk => Some(Constellation::bpsk()),
            Scheme::Qpsk => Some(Constellation::qpsk()),
            Scheme::Ask4 => Some(Constellation::ask4()),
            Scheme::Psk8 => Some(Constellation::psk8()),
            Scheme::Capacity | Scheme::Cocktail => None,
        }
    }

    /// Rate at symbol SNR `snr` for the conventional schemes.
    pub fn rate(self, snr: f64) -> Result<f64> {
        match self {
            Scheme::Capacity => awgn_capacity(snr),
            Scheme::Cocktail => Err(Error::InvalidArgument(
                "cocktail rates depend on a ratio; use fig2_dataset".into(),
            )),
            finite => {
                let c = finite.constellation().expect("finite alphabet");
                constellation_mi(&c, NoiseModel::for_snr(c.mean_energy(), snr)?)
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Scheme::Capacity,
            Scheme::Bpsk,
            Scheme::Qpsk,
            Scheme::Ask4,
            Scheme::Psk8,
            Scheme::Cocktail,
        ];
        all.into_iter()
            .find(|sch| sch.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let names: Vec<_> = all.iter().map(|s| s.name()).collect();
                Error::InvalidArgument(format!("unknown scheme '{s}'; valid: {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisMode {
    #[default]
    LinearSnr,
    EbN0Db,
}

impl FromStr for AxisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "linear" | "linear_snr" | "snr" => Ok(AxisMode::LinearSnr),
            "ebn0" | "eb_n0" | "eb_n0_db" | "ebn0_db" => Ok(AxisMode::EbN0Db),
            other => Err(Error::InvalidArgument(format!(
                "unknown axis mode '{other}'; valid: linear_snr, eb_n0_db"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Lin,
    Log,
}

/// `start:stop:lin|log:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub spacing: Spacing,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, spacing: Spacing, count: usize) -> Result<Self> {
        let g = Self { start, stop, spacing, count };
        if count == 0 {
            return Err(Error::InvalidArgument("grid needs at least one point".into()));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if count > 1 && stop <= start {
            return Err(Error::InvalidArgument(format!(
                "grid must ascend: start {start} >= stop {stop}"
            )));
        }
        if spacing == Spacing::Log && start <= 0.0 {
            return Err(Error::InvalidArgument("log grid needs a positive start".into()));
        }
        Ok(g)
    }

    /// Logarithmic grid from 1e-3 to 1e2, 60 points.
    pub fn default_snr() -> Self {
        Self { start: 1e-3, stop: 1e2, spacing: Spacing::Log, count: 60 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i + 1 == self.count {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Lin => self.start + t * (self.stop - self.start),
                    Spacing::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + t * (b - a))
                    }
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("grid '{s}' is not start:stop:lin|log:count"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let spacing = match parts[2].trim() {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            _ => return Err(bad()),
        };
        let count: usize = parts[3].trim().parse().map_err(|_| bad())?;
        Grid::new(start, stop, spacing, count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub snr_grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub eta: f64,
    pub schemes: Vec<Scheme>,
    pub axis: AxisMode,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            snr_grid: Grid::default_snr().values(),
            ratios: DEFAULT_RATIOS.to_vec(),
            eta: DEFAULT_ETA,
            schemes: Scheme::CONVENTIONAL.to_vec(),
            axis: AxisMode::LinearSnr,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.snr_grid.is_empty() {
            return Err(Error::InvalidArgument("SNR grid is empty".into()));
        }
        if self.snr_grid.iter().any(|&r| !(r.is_finite() && r > 0.0)) {
            return Err(Error::InvalidArgument("SNR grid values must be finite and > 0".into()));
        }
        if self.snr_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("SNR grid must be strictly ascending".into()));
        }
        if let Some(r) = self.ratios.iter().find(|&&r| !(r.is_finite() && r > 1.0)) {
            return Err(Error::InvalidParams(format!(
                "ratio {r} violates alpha > beta > 0 (ratio must exceed 1)"
            )));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidParams(format!("need 0 < eta < 1, got {}", self.eta)));
        }
        Ok(())
    }

    fn abscissa(&self, snr: f64, rate: f64) -> Result<f64> {
        match self.axis {
            AxisMode::LinearSnr => Ok(snr),
            AxisMode::EbN0Db => {
                let ratio = snr / rate;
                if rate <= 0.0 || !ratio.is_finite() {
                    return Err(Error::Numeric(format!(
                        "rate underflow at rho = {snr}; Eb/N0 undefined"
                    )));
                }
                Ok(to_db(ratio))
            }
        }
    }
}

/// A labelled curve with strictly ascending abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub label: String,
    pub rows: Vec<(f64, f64)>,
}

impl RateCurve {
    pub fn new(label: impl Into<String>, rows: Vec<(f64, f64)>) -> Result<Self> {
        let label = label.into();
        if rows.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Numeric(format!("curve '{label}' abscissae are not strictly ascending")));
        }
        Ok(Self { label, rows })
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.0)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.1)
    }
}

pub fn ratio_label(prefix: &str, ratio: f64) -> String {
    format!("{prefix}-r{ratio}")
}

/// Evaluates `f` on every grid point in parallel, returning results in grid order.
fn on_grid<T, F>(grid: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    grid.par_iter().map(|&snr| f(snr)).collect()
}

fn conventional_curve(spec: &SweepSpec, scheme: Scheme) -> Result<RateCurve> {
    let rows = on_grid(&spec.snr_grid, |snr| {
        let rate = scheme.rate(snr)?;
        Ok((spec.abscissa(snr, rate)?, rate))
    })?;
    RateCurve::new(scheme.name(), rows)
}

fn cocktail_rate(ratio: f64, eta: f64, snr: f64) -> Result<f64> {
    let params = CocktailParams::from_ratio(ratio, snr, eta)?;
    Ok(adr_breakdown(&params, NoiseModel::new(1.0)?)?.total)
}

/// Rate curves of the Gaussian input and the conventional alphabets.
pub fn fig1_dataset(spec: &SweepSpec) -> Result<Vec<RateCurve>> {
    spec.validate()?;
    if spec.schemes.contains(&Scheme::Cocktail) {
        return Err(Error::InvalidArgument(
            "the conventional-scheme dataset does not include cocktail curves".into(),
        ));
    }
    spec.schemes.iter().map(|&s| conventional_curve(spec, s)).collect()
}

/// Total cocktail rate per ratio, plus capacity, BPSK and any other
/// conventional schemes listed in `spec.schemes` as references.
pub fn fig2_dataset(spec: &SweepSpec) -> Result<Vec<RateCurve>> {
    spec.validate()?;
    if spec.ratios.is_empty() {
        return Err(Error::InvalidArgument("at least one ratio is required".into()));
    }
    let mut references = vec![Scheme::Capacity, Scheme::Bpsk];
    for &s in &spec.schemes {
        if s != Scheme::Cocktail && !references.contains(&s) {
            references.push(s);
        }
    }
    let mut curves: Vec<RateCurve> =
        references.into_iter().map(|s| conventional_curve(spec, s)).collect::<Result<_>>()?;
    for &ratio in &spec.ratios {
        let rows = on_grid(&spec.snr_grid, |snr| {
            let rate = cocktail_rate(ratio, spec.eta, snr)?;
            Ok((spec.abscissa(snr, rate)?, rate))
        })?;
        curves.push(RateCurve::new(ratio_label("cbpsk", ratio), rows)?);
    }
    Ok(curves)
}

/// `ℝ − log₂(1 + E_in/σ²)` per ratio.
pub fn fig3_dataset(spec: &SweepSpec) -> Result<Vec<RateCurve>> {
    spec.validate()?;
    if spec.ratios.is_empty() {
        return Err(Error::InvalidArgument("at least one ratio is required".into()));
    }
    spec.ratios
        .iter()
        .map(|&ratio| {
            let rows = on_grid(&spec.snr_grid, |snr| {
                let rate = cocktail_rate(ratio, spec.eta, snr)?;
                Ok((spec.abscissa(snr, rate)?, rate - awgn_capacity(snr)?))
            })?;
            RateCurve::new(ratio_label("gain", ratio), rows)
        })
        .collect()
}

/// Long-format row `(curve, x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub curve: String,
    pub x: f64,
    pub y: f64,
}

pub fn sweep_to_table(curves: &[RateCurve]) -> Vec<TableRow> {
    curves
        .iter()
        .flat_map(|c| c.rows.iter().map(|&(x, y)| TableRow { curve: c.label.clone(), x, y }))
        .collect()
}

/// Inverse of [`sweep_to_table`]: consecutive rows with the same label form one curve.
pub fn table_to_curves(rows: &[TableRow]) -> Result<Vec<RateCurve>> {
    let mut curves: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in rows {
        match curves.last_mut() {
            Some((label, pts)) if *label == row.curve => pts.push((row.x, row.y)),
            _ => curves.push((row.curve.clone(), vec![(row.x, row.y)])),
        }
    }
    curves.into_iter().map(|(l, r)| RateCurve::new(l, r)).collect()
}

/// Low-SNR Eb/N0 of a cocktail configuration against the Gaussian limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub ratio: f64,
    pub eta: f64,
    pub probe_snr: f64,
    /// `10 log₁₀ E₁/(E_T log₂ e)`.
    pub closed_form_db: f64,
    /// Eb/N0 evaluated from the computed rate at `probe_snr`.
    pub numeric_db: f64,
    /// `10 log₁₀ ln 2`.
    pub capacity_limit_db: f64,
    /// `capacity_limit_db − numeric_db`.
    pub gain_db: f64,
}

pub fn limit_report(ratio: f64, eta: f64) -> Result<LimitReport> {
    let params = CocktailParams::from_ratio(ratio, LIMIT_PROBE_SNR, eta)?;
    let rate = adr_breakdown(&params, NoiseModel::new(1.0)?)?.total;
    let numeric_db = to_db(LIMIT_PROBE_SNR / rate);
    let capacity_limit_db = to_db(std::f64::consts::LN_2);
    Ok(LimitReport {
        ratio,
        eta,
        probe_snr: LIMIT_PROBE_SNR,
        closed_form_db: to_db(limiting_eb_over_n0(&params)),
        numeric_db,
        capacity_limit_db,
        gain_db: capacity_limit_db - numeric_db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mi::bpsk_mi;
    use approx::assert_abs_diff_eq;

    fn spec(grid: Vec<f64>, axis: AxisMode) -> SweepSpec {
        SweepSpec { snr_grid: grid, axis, ..SweepSpec::default() }
    }

    fn find<'a>(curves: &'a [RateCurve], label: &str) -> &'a RateCurve {
        curves.iter().find(|c| c.label == label).unwrap()
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "0.001:100:log:10".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 0.001);
        assert_eq!(v[9], 100.0);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        let lin: Grid = "0:1:lin:5".parse().unwrap();
        assert_eq!(lin.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        for bad in ["1:2:lin", "1:2:cubic:3", "2:1:lin:3", "0:1:log:3", "a:1:lin:2", "1:2:lin:0"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
        assert_eq!(Grid::default_snr().values().len(), 60);
    }

    #[test]
    fn scheme_names_roundtrip() {
        for s in [Scheme::Capacity, Scheme::Bpsk, Scheme::Qpsk, Scheme::Ask4, Scheme::Psk8, Scheme::Cocktail] {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        let err = "16qam".parse::<Scheme>().unwrap_err().to_string();
        assert!(err.contains("bpsk") && err.contains("8psk"));
    }

    #[test]
    fn spec_validation() {
        assert!(spec(vec![], AxisMode::LinearSnr).validate().is_err());
        assert!(spec(vec![1.0, 1.0], AxisMode::LinearSnr).validate().is_err());
        assert!(spec(vec![0.0, 1.0], AxisMode::LinearSnr).validate().is_err());
        let s = SweepSpec { ratios: vec![1.0], ..SweepSpec::default() };
        assert!(s.validate().is_err());
        assert!(SweepSpec::default().validate().is_ok());
    }

    #[test]
    fn capacity_curve_contains_one_bit_at_unit_snr() {
        let s = SweepSpec { schemes: vec![Scheme::Capacity], ..spec(vec![0.5, 1.0, 3.0], AxisMode::LinearSnr) };
        let c = fig1_dataset(&s).unwrap();
        assert_eq!(c[0].rows[1], (1.0, 1.0));
        assert_abs_diff_eq!(c[0].rows[2].1, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn fig1_rejects_cocktail() {
        let s = SweepSpec { schemes: vec![Scheme::Cocktail], ..SweepSpec::default() };
        assert!(fig1_dataset(&s).is_err());
    }

    #[test]
    fn fig1_saturation() {
        let curves = fig1_dataset(&spec(vec![1e4], AxisMode::LinearSnr)).unwrap();
        for (label, ceiling) in [("bpsk", 1.0), ("4ask", 2.0), ("qpsk", 2.0), ("8psk", 3.0)] {
            assert!((find(&curves, label).rows[0].1 - ceiling).abs() < 1e-3, "{label}");
        }
    }

    #[test]
    fn qpsk_doubles_bpsk_at_equal_eb_n0() {
        let grid = Grid::new(1e-3, 1e2, Spacing::Log, 25).unwrap().values();
        let s = SweepSpec { schemes: vec![Scheme::Qpsk], ..spec(grid, AxisMode::EbN0Db) };
        let q = &fig1_dataset(&s).unwrap()[0];
        for (&(x, rate), rho) in q.rows.iter().zip(&s.snr_grid) {
            // the BPSK point with the same Eb/N0 sits at half the symbol SNR
            let b = Scheme::Bpsk.rate(rho / 2.0).unwrap();
            assert_abs_diff_eq!(to_db(rho / 2.0 / b), x, epsilon = 1e-9);
            assert!((rate / 2.0 - b).abs() < 1e-6);
        }
    }

    #[test]
    fn fig2_reference_and_ordering() {
        let s = SweepSpec { ratios: vec![1.5, 3.5], ..spec(vec![0.01, 1.0, 10.0], AxisMode::LinearSnr) };
        let curves = fig2_dataset(&s).unwrap();
        let b = find(&curves, "bpsk");
        for &(rho, rate) in &b.rows {
            assert_abs_diff_eq!(rate, bpsk_mi(rho.sqrt(), NoiseModel::new(1.0).unwrap()).unwrap(), epsilon = 1e-15);
        }
        let lo = find(&curves, "cbpsk-r1.5");
        let hi = find(&curves, "cbpsk-r3.5");
        assert!(hi.rows[0].1 > lo.rows[0].1);
        assert!(hi.rows[2].1 < lo.rows[2].1);
    }

    #[test]
    fn cocktail_saturates_at_two_bits() {
        let s = SweepSpec { ratios: vec![3.5], ..spec(vec![1e5], AxisMode::LinearSnr) };
        let c = fig2_dataset(&s).unwrap();
        assert!((find(&c, "cbpsk-r3.5").rows[0].1 - 2.0).abs() < 1e-3);
    }

    #[test]
    fn cocktail_left_of_capacity_at_low_rate() {
        let grid = Grid::new(1e-3, 0.04, Spacing::Log, 12).unwrap().values();
        let s = SweepSpec { ratios: vec![3.5], ..spec(grid, AxisMode::EbN0Db) };
        let curves = fig2_dataset(&s).unwrap();
        let cap = find(&curves, "capacity");
        let cb = find(&curves, "cbpsk-r3.5");
        for &(x, rate) in &cb.rows {
            assert!(rate < 0.1);
            // capacity needs Eb/N0 = (2^R − 1)/R for rate R
            let cap_x = to_db((2f64.powf(rate) - 1.0) / rate);
            assert!(x < cap_x, "rate {rate}: cocktail {x} dB vs capacity {cap_x} dB");
        }
        assert!(cap.rows.iter().all(|r| r.0 > -1.6));
    }

    #[test]
    fn fig3_signs() {
        let s = SweepSpec { ratios: vec![3.5], ..spec(vec![0.005, 0.01, 10.0], AxisMode::LinearSnr) };
        let g = &fig3_dataset(&s).unwrap()[0];
        assert_eq!(g.label, "gain-r3.5");
        assert!(g.rows[1].1 > 0.0);
        assert!(g.rows[2].1 < 0.0);
        let params = CocktailParams::from_ratio(3.5, 0.005, 0.5).unwrap();
        let dc = crate::cocktail::adr_gain_low_snr(&params, NoiseModel::new(1.0).unwrap());
        assert!((g.rows[0].1 - dc).abs() / dc < 0.1);
    }

    #[test]
    fn grid_refinement_preserves_shared_points() {
        let coarse = vec![0.01, 0.1, 1.0, 10.0];
        let mut fine = coarse.clone();
        fine.extend([0.03, 0.3, 3.0]);
        fine.sort_by(f64::total_cmp);
        let a = fig2_dataset(&spec(coarse, AxisMode::EbN0Db)).unwrap();
        let b = fig2_dataset(&spec(fine, AxisMode::EbN0Db)).unwrap();
        for (ca, cb) in a.iter().zip(&b) {
            for row in &ca.rows {
                assert!(cb.rows.contains(row), "{} lost {row:?}", ca.label);
            }
        }
    }

    #[test]
    fn rate_curves_are_monotone() {
        let s = spec(Grid::new(1e-3, 1e3, Spacing::Log, 40).unwrap().values(), AxisMode::LinearSnr);
        for c in fig1_dataset(&s).unwrap().iter().chain(&fig2_dataset(&s).unwrap()) {
            assert!(c.rows.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12), "{}", c.label);
        }
    }

    #[test]
    fn table_roundtrip() {
        assert!(sweep_to_table(&[]).is_empty());
        let c = RateCurve::new("a", vec![(1.0, 2.0), (2.0, 3.0), (3.0, 3.5)]).unwrap();
        assert_eq!(sweep_to_table(std::slice::from_ref(&c)).len(), 3);
        let curves = fig3_dataset(&spec(vec![0.01, 0.1], AxisMode::LinearSnr)).unwrap();
        let table = sweep_to_table(&curves);
        assert_eq!(table_to_curves(&table).unwrap(), curves);
        assert_eq!(sweep_to_table(&table_to_curves(&table).unwrap()), table);
    }

    #[test]
    fn curve_rejects_unsorted_axis() {
        assert!(RateCurve::new("x", vec![(1.0, 0.0), (1.0, 0.1)]).is_err());
    }

    #[test]
    fn limit_report_for_ratio_3_5() {
        let r = limit_report(3.5, 0.5).unwrap();
        assert_abs_diff_eq!(r.closed_form_db, -3.41, epsilon = 0.01);
        assert!((r.numeric_db - r.closed_form_db).abs() < 0.1);
        assert!(r.gain_db > 1.7 && r.gain_db < 1.9);
    }
}
