use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use cocktail_core::cocktail::DEFAULT_ETA;
use cocktail_core::linksim::genie_error_rates;
use cocktail_core::sweep::{limit_report, DEFAULT_RATIOS};
use cocktail_core::{
    adr_breakdown, awgn_capacity, fig1_dataset, fig2_dataset, fig3_dataset, low_snr_capacity,
    run_link, sweep_to_table, AxisMode, CocktailParams, DetectionMode, Grid, NoiseModel, Scheme,
    SimConfig, SweepSpec, TableRow,
};
use serde::Serialize;
use serde_json::json;

use crate::config::FileConfig;
use crate::manifest::{manifest_path_for, RunManifest};
use crate::output::{to_csv, write_csv};
use crate::svg::{self, ChartOptions};
use crate::{
    parse_alphabet, CapacityArgs, Cli, CliError, CocktailArgs, Command, MiArgs, ModeArg,
    SimulateArgs, ALPHABETS,
};

pub const OUT_DIR_ENV: &str = "CBPSK_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "out";

/// Tolerance of the QPSK = 2·BPSK(SNR/2) check, bits.
const CHECK_TOL: f64 = 1e-9;

struct Context {
    file: FileConfig,
    out_dir: PathBuf,
    started: Instant,
}

impl Context {
    fn finish(&self, mut manifest: RunManifest, path: &Path) -> Result<(), CliError> {
        manifest.wall_clock_seconds = self.started.elapsed().as_secs_f64();
        manifest.write(path)?;
        log::info!("wrote {}", path.display());
        Ok(())
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out_dir = cli
        .out_dir
        .or_else(|| file.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let ctx = Context { file, out_dir, started };
    match cli.command {
        Command::Capacity(a) => cmd_capacity(&ctx, a),
        Command::Mi(a) => cmd_mi(&ctx, a),
        Command::Cocktail(a) => cmd_cocktail(&ctx, a),
        Command::Simulate(a) => cmd_simulate(&ctx, a),
    }
}

fn parse_opt<T: std::str::FromStr<Err = cocktail_core::Error>>(
    s: Option<&String>,
) -> Result<Option<T>, CliError> {
    s.map(|s| s.parse::<T>()).transpose().map_err(CliError::from)
}

fn grid_values(flag: Option<Grid>, file: Option<&String>) -> Result<Vec<f64>, CliError> {
    let grid = match flag {
        Some(g) => g,
        None => parse_opt::<Grid>(file)?.unwrap_or_else(Grid::default_snr),
    };
    Ok(grid.values())
}

fn cmd_capacity(ctx: &Context, args: CapacityArgs) -> Result<(), CliError> {
    let section = &ctx.file.capacity;
    let snrs = if !args.snr.is_empty() {
        args.snr
    } else if args.grid.is_some() {
        grid_values(args.grid, None)?
    } else if let Some(v) = &section.snr {
        v.clone()
    } else {
        grid_values(None, section.grid.as_ref())?
    };
    let mut rows = Vec::with_capacity(2 * snrs.len());
    for &snr in &snrs {
        rows.push(TableRow { curve: "capacity".into(), x: snr, y: awgn_capacity(snr)? });
    }
    for &snr in &snrs {
        rows.push(TableRow { curve: "low_snr".into(), x: snr, y: low_snr_capacity(snr) });
    }
    match args.out {
        None => print_stdout(&to_csv(&rows)),
        Some(path) => {
            write_csv(&path, &rows)?;
            let mut m = RunManifest::new("capacity", json!({ "snr": snrs }));
            m.outputs.push(path.clone());
            ctx.finish(m, &manifest_path_for(&path))
        }
    }
}

fn print_stdout(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

#[derive(Serialize)]
struct MiResolved {
    schemes: Vec<Scheme>,
    snr_grid: Vec<f64>,
    axis: AxisMode,
    capacity: bool,
    check: bool,
}

fn cmd_mi(ctx: &Context, args: MiArgs) -> Result<(), CliError> {
    let section = &ctx.file.mi;
    let mut schemes = if !args.schemes.is_empty() {
        args.schemes
    } else if let Some(names) = &section.schemes {
        names.iter().map(|n| parse_alphabet(n)).collect::<Result<_, _>>().map_err(CliError::Usage)?
    } else {
        ALPHABETS.to_vec()
    };
    schemes.dedup();
    let capacity = args.capacity || section.capacity.unwrap_or(false);
    let axis = match args.axis {
        Some(a) => a.into(),
        None => parse_opt::<AxisMode>(section.axis.as_ref())?.unwrap_or_default(),
    };
    let snr_grid = grid_values(args.grid, section.grid.as_ref())?;

    if args.check {
        let worst = check_qpsk_vs_bpsk(&snr_grid)?;
        if worst > CHECK_TOL {
            return Err(CliError::Numeric(format!(
                "check failed: max |QPSK(rho) - 2 BPSK(rho/2)| = {worst:.3e} > {CHECK_TOL:e}"
            )));
        }
        eprintln!("check passed: max |QPSK(rho) - 2 BPSK(rho/2)| = {worst:.3e} over {} points", snr_grid.len());
    }

    let mut spec_schemes = Vec::new();
    if capacity {
        spec_schemes.push(Scheme::Capacity);
    }
    spec_schemes.extend(&schemes);
    let spec = SweepSpec { snr_grid: snr_grid.clone(), schemes: spec_schemes, axis, ..SweepSpec::default() };
    let rows = sweep_to_table(&fig1_dataset(&spec)?);

    let path = args.out.unwrap_or_else(|| ctx.out_dir.join("fig1.csv"));
    write_csv(&path, &rows)?;
    let resolved = MiResolved { schemes, snr_grid, axis, capacity, check: args.check };
    let mut m = RunManifest::new("mi", to_json(&resolved)?);
    m.outputs.push(path.clone());
    ctx.finish(m, &manifest_path_for(&path))
}

/// Largest `|I_QPSK(ρ) − 2 I_BPSK(ρ/2)|` over the grid.
fn check_qpsk_vs_bpsk(grid: &[f64]) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for &snr in grid {
        let q = Scheme::Qpsk.rate(snr)?;
        let b = Scheme::Bpsk.rate(snr / 2.0)?;
        worst = worst.max((q - 2.0 * b).abs());
    }
    Ok(worst)
}

fn to_json<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Numeric(format!("serialization: {e}")))
}

fn check_ratios(ratios: &[f64]) -> Result<(), CliError> {
    match ratios.iter().find(|&&r| !(r.is_finite() && r > 1.0)) {
        Some(r) => Err(CliError::Usage(format!(
            "ratio {r} is invalid: alpha/beta must exceed 1 because alpha > beta > 0"
        ))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct CocktailResolved {
    ratios: Vec<f64>,
    eta: f64,
    snr_grid: Vec<f64>,
    axis: AxisMode,
    plot: bool,
}

fn cmd_cocktail(ctx: &Context, args: CocktailArgs) -> Result<(), CliError> {
    let section = &ctx.file.cocktail;
    let ratios = if !args.ratios.is_empty() {
        args.ratios
    } else {
        section.ratios.clone().unwrap_or_else(|| DEFAULT_RATIOS.to_vec())
    };
    check_ratios(&ratios)?;
    let eta = args.eta.or(section.eta).unwrap_or(DEFAULT_ETA);

    if args.report_limit {
        let mut text = String::new();
        for &r in &ratios {
            let rep = limit_report(r, eta)?;
            text.push_str(&format!(
                "ratio {r} (eta {eta}): limiting Eb/N0 {:.2} dB (closed form {:.2} dB, probe SNR {:e}); \
                 capacity limit {:.2} dB; gain {:.2} dB\n",
                rep.numeric_db, rep.closed_form_db, rep.probe_snr, rep.capacity_limit_db, rep.gain_db
            ));
        }
        return print_stdout(&text);
    }

    let axis = match args.axis {
        Some(a) => a.into(),
        None => parse_opt::<AxisMode>(section.axis.as_ref())?.unwrap_or_default(),
    };
    let plot = args.plot || section.plot.unwrap_or(false);
    let snr_grid = grid_values(args.grid, section.grid.as_ref())?;
    let spec = SweepSpec {
        snr_grid: snr_grid.clone(),
        ratios: ratios.clone(),
        eta,
        schemes: vec![Scheme::Capacity, Scheme::Bpsk],
        axis,
    };
    let fig2 = fig2_dataset(&spec)?;
    let fig3 = fig3_dataset(&spec)?;

    let dir = &ctx.out_dir;
    let mut outputs = Vec::new();
    for (name, curves) in [("fig2.csv", &fig2), ("fig3.csv", &fig3)] {
        let path = dir.join(name);
        write_csv(&path, &sweep_to_table(curves))?;
        outputs.push(path);
    }
    if plot {
        let x_label = match axis {
            AxisMode::LinearSnr => "SNR (linear)",
            AxisMode::EbN0Db => "Eb/N0 (dB)",
        };
        let log_x = axis == AxisMode::LinearSnr;
        let charts = [
            ("fig2.svg", &fig2, "Cocktail BPSK rate", "rate (bits/use)"),
            ("fig3.svg", &fig3, "Cocktail BPSK rate minus capacity", "rate - capacity (bits/use)"),
        ];
        for (name, curves, title, y_label) in charts {
            let opts = ChartOptions {
                title: title.into(),
                x_label: x_label.into(),
                y_label: y_label.into(),
                log_x,
            };
            let path = dir.join(name);
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            fs::write(&path, svg::render(curves, &opts)).map_err(|e| CliError::io(&path, e))?;
            outputs.push(path);
        }
    }
    let resolved = CocktailResolved { ratios, eta, snr_grid, axis, plot };
    let mut m = RunManifest::new("cocktail", to_json(&resolved)?);
    m.outputs = outputs;
    ctx.finish(m, &dir.join("cocktail.manifest.json"))
}

#[derive(Debug, Serialize)]
struct SimulateResolved {
    alpha: f64,
    beta: f64,
    eta: f64,
    noise_var: f64,
    n_symbols: u64,
    seed: u64,
    mode: DetectionMode,
}

#[derive(Serialize)]
struct Theory {
    rate_x1: f64,
    rate_x2: f64,
    rate_total: f64,
    genie_ser_x1: f64,
    genie_ser_x2: f64,
}

#[derive(Serialize)]
struct SimulateOutput {
    config: SimulateResolved,
    report: cocktail_core::LinkSimReport,
    ber_x1: f64,
    ber_x2: f64,
    case1_fraction: f64,
    theory: Theory,
}

fn parse_mode(s: &str) -> Result<ModeArg, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "dd" | "decision_directed" => Ok(ModeArg::Dd),
        "genie" | "genie_aided" => Ok(ModeArg::Genie),
        other => Err(CliError::Usage(format!("unknown detection mode '{other}'; valid: dd, genie"))),
    }
}

fn cmd_simulate(ctx: &Context, args: SimulateArgs) -> Result<(), CliError> {
    let section = &ctx.file.simulate;
    let eta = args.eta.or(section.eta).unwrap_or(DEFAULT_ETA);
    let noise_var = args.noise_var.or(section.noise_var).unwrap_or(1.0);
    let noise = NoiseModel::new(noise_var)?;
    let params = match (args.ratio, args.snr) {
        (Some(ratio), Some(snr)) => {
            check_ratios(&[ratio])?;
            CocktailParams::from_ratio(ratio, snr * noise_var, eta)?
        }
        _ => {
            let alpha = args.alpha.or(section.alpha).unwrap_or(3.5);
            let beta = args.beta.or(section.beta).unwrap_or(1.0);
            CocktailParams::new(alpha, beta, eta)?
        }
    };
    let mode = match args.mode {
        Some(m) => m,
        None => section.mode.as_deref().map(parse_mode).transpose()?.unwrap_or(ModeArg::Dd),
    };
    let n_symbols = args.n.or(section.n).unwrap_or(100_000);
    let seed = args.seed.or(section.seed).unwrap_or(0);
    let sim = SimConfig::new(params, noise, n_symbols, seed, mode.into())?;
    let report = run_link(&sim)?;
    let adr = adr_breakdown(&params, noise)?;
    let (ser1, ser2) = genie_error_rates(&params, noise);

    let resolved = SimulateResolved {
        alpha: params.alpha(),
        beta: params.beta(),
        eta,
        noise_var,
        n_symbols,
        seed,
        mode: mode.into(),
    };
    let output = SimulateOutput {
        config: resolved,
        ber_x1: report.ber_x1(),
        ber_x2: report.ber_x2(),
        case1_fraction: report.case1_fraction(),
        report,
        theory: Theory {
            rate_x1: adr.r1,
            rate_x2: adr.r2,
            rate_total: adr.total,
            genie_ser_x1: ser1,
            genie_ser_x2: ser2,
        },
    };
    let text = serde_json::to_string_pretty(&output)
        .map_err(|e| CliError::Numeric(format!("serialization: {e}")))?
        + "\n";
    match args.out {
        None => print_stdout(&text),
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            let mut m = RunManifest::new("simulate", to_json(&output.config)?);
            m.seeds.push(seed);
            m.outputs.push(path.clone());
            ctx.finish(m, &manifest_path_for(&path))
        }
    }
}
