//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any fail.

use std::f64::consts::{LN_2, LOG2_E};
use std::fs;
use std::process::Command;
use std::time::Instant;

use cocktail_core::sweep::limit_report;
use cocktail_core::units::to_db;
use cocktail_core::{
    adr_breakdown, adr_gain_low_snr, awgn_capacity, bpsk_mi, detect, encode, energy_report,
    fig1_dataset, mc_bpsk_mi, run_link, AxisMode, CocktailParams, DetectionMode, Grid, NoiseModel,
    Scheme, SimConfig, SweepSpec, SymbolPair,
};
use cocktail_core::sweep::Spacing;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    Grid::new(lo, hi, Spacing::Log, n).unwrap().values()
}

fn cocktail_rate(ratio: f64, snr: f64) -> f64 {
    let p = CocktailParams::from_ratio(ratio, snr, 0.5).unwrap();
    adr_breakdown(&p, NoiseModel::new(1.0).unwrap()).unwrap().total
}

fn capacity_exact() -> Outcome {
    let mut worst = 0.0f64;
    for rho in [0.0, 1.0, 3.0, 10.0, 100.0] {
        let err = (awgn_capacity(rho).map_err(|e| e.to_string())? - (1.0 + rho).log2()).abs();
        worst = worst.max(err);
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("max |C - log2(1+rho)| = {worst:.1e}"))
}

fn bpsk_mc_oracle() -> Outcome {
    let mut worst_z = 0.0f64;
    for (i, rho) in log_grid(1e-3, 1e2, 20).into_iter().enumerate() {
        let noise = NoiseModel::for_snr(1.0, rho).unwrap();
        let quad = bpsk_mi(1.0, noise).unwrap();
        let mc = mc_bpsk_mi(1.0, noise, 10_000_000, 1000 + i as u64).unwrap();
        let z = (quad - mc.estimate).abs() / mc.std_error;
        ensure(z <= 3.0, || {
            format!("rho={rho}: quadrature {quad} vs MC {} ± {} ({z:.2} SE)", mc.estimate, mc.std_error)
        })?;
        worst_z = worst_z.max(z);
    }
    Ok(format!("20 points, 1e7 samples each, worst deviation {worst_z:.2} SE"))
}

fn fig1_structure() -> Outcome {
    // saturation
    for (scheme, bits) in [(Scheme::Bpsk, 1.0), (Scheme::Ask4, 2.0), (Scheme::Qpsk, 2.0), (Scheme::Psk8, 3.0)] {
        let r = scheme.rate(1e4).unwrap();
        ensure((r - bits).abs() <= 1e-3, || format!("{scheme} at rho=1e4: {r}"))?;
    }

    // BPSK and per-dimension QPSK coincide on the Eb/N0 axis
    let grid = log_grid(2e-3, 1e2, 40);
    let half: Vec<f64> = grid.iter().map(|r| r / 2.0).collect();
    let eb = |g: Vec<f64>, s: Scheme| {
        let spec = SweepSpec { snr_grid: g, schemes: vec![s], axis: AxisMode::EbN0Db, ..SweepSpec::default() };
        fig1_dataset(&spec).unwrap().remove(0)
    };
    let q = eb(grid, Scheme::Qpsk);
    let b = eb(half, Scheme::Bpsk);
    let mut worst_bits = 0.0f64;
    for (&(xq, yq), &(xb, yb)) in q.rows.iter().zip(&b.rows) {
        ensure((xq - xb).abs() < 1e-9, || format!("Eb/N0 abscissae differ: {xq} vs {xb}"))?;
        worst_bits = worst_bits.max((yq / 2.0 - yb).abs());
    }
    ensure(worst_bits <= 1e-6, || format!("QPSK/2 vs BPSK differ by {worst_bits:e} bits"))?;

    // every curve approaches zero rate at -1.59 dB
    let limit = to_db(LN_2);
    let mut worst_db = 0.0f64;
    for s in Scheme::CONVENTIONAL {
        let rho = 1e-4;
        let r = s.rate(rho).unwrap();
        let db = to_db(rho / r);
        ensure(r < 1e-3 && (db - limit).abs() < 0.01, || format!("{s} at rho=1e-4: rate {r}, {db} dB"))?;
        worst_db = worst_db.max((db - limit).abs());
    }
    Ok(format!(
        "saturation ok; QPSK/2 vs BPSK max {worst_bits:.1e} bits; all curves within {worst_db:.1e} dB of {limit:.2} dB"
    ))
}

fn low_snr_linearity() -> Outcome {
    let rho = 1e-3;
    let line = rho * LOG2_E;
    let mut worst = 0.0f64;
    for s in [Scheme::Capacity, Scheme::Bpsk, Scheme::Qpsk] {
        let rel = (s.rate(rho).unwrap() - line).abs() / line;
        ensure(rel < 0.01, || format!("{s}: relative deviation {rel}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("max relative deviation from rho*log2(e): {:.3}%", 100.0 * worst))
}

fn random_params(rng: &mut ChaCha8Rng) -> CocktailParams {
    let beta = rng.random_range(0.01..10.0);
    let alpha = beta * rng.random_range(1.001..20.0);
    let eta = rng.random_range(0.05..0.95);
    CocktailParams::new(alpha, beta, eta).unwrap()
}

fn noise_free_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        for pair in SymbolPair::all() {
            let got = detect(encode(pair, &p), &p).unwrap().pair();
            ensure(got == pair, || format!("{pair:?} decoded as {got:?} with {p:?}"))?;
        }
    }
    let p = CocktailParams::with_default_eta(3.5, 1.0).unwrap();
    for mode in [DetectionMode::DecisionDirected, DetectionMode::GenieAided] {
        let cfg = SimConfig::new(p, NoiseModel::new(1e-8).unwrap(), 10_000, 11, mode).unwrap();
        let rep = run_link(&cfg).unwrap();
        ensure(rep.errors_x1 == 0 && rep.errors_x2 == 0, || format!("{mode:?}: {rep:?}"))?;
    }
    Ok("1000 parameter sets x 4 pairs decoded; 0 errors in 1e4 noisy symbols (both modes)".into())
}

fn energy_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        // energies measured from the transmitted and post-cancellation signals
        let (mut e1, mut e2) = (0.0, 0.0);
        for pair in SymbolPair::all() {
            let w = if pair.is_case_one() { p.eta() / 2.0 } else { (1.0 - p.eta()) / 2.0 };
            let x = encode(pair, &p);
            e1 += w * x * x;
            let y2 = detect(x, &p).unwrap().y2;
            e2 += w * y2 * y2;
        }
        let rep = energy_report(&p);
        let scale = rep.e_total;
        let errs = [
            (rep.e1 - e1).abs(),
            (rep.e2 - e2).abs(),
            (rep.delta_e - rep.e2).abs(),
            (rep.e_total - (rep.e1 + rep.e2)).abs(),
            (rep.delta_e - (rep.e_total - rep.e_in)).abs(),
        ];
        for e in errs {
            worst = worst.max(e / scale);
        }
        ensure(rep.delta_e == rep.e2 && rep.e_total == rep.e1 + rep.e2, || format!("{rep:?}"))?;
    }
    ensure(worst <= 1e-12, || format!("relative mismatch {worst:e}"))?;
    Ok(format!("1000 sets; max relative mismatch vs measured energies {worst:.1e}"))
}

fn limit_gain() -> Outcome {
    let rep = limit_report(3.5, 0.5).map_err(|e| e.to_string())?;
    // closed form by hand: E1/E_T with beta = 1, alpha = 3.5
    let (a, b) = (3.5f64, 1.0f64);
    let e1 = 0.5 * a * a + 0.5 * (b / 2.0).powi(2);
    let e2 = 0.5 * (a - b).powi(2) + 0.5 * (b / 2.0).powi(2);
    let closed = to_db(LN_2) - to_db((e1 + e2) / e1);
    ensure((rep.numeric_db - (-3.41)).abs() <= 0.1, || format!("numeric {} dB", rep.numeric_db))?;
    ensure((rep.closed_form_db - closed).abs() < 1e-9, || format!("closed form {} vs {closed}", rep.closed_form_db))?;
    ensure((rep.numeric_db - closed).abs() < 0.01, || format!("numeric {} vs closed {closed}", rep.numeric_db))?;
    ensure((rep.gain_db - 1.82).abs() <= 0.1, || format!("gain {} dB", rep.gain_db))?;
    Ok(format!(
        "Eb/N0 at rho=1e-4: {:.3} dB (closed form {closed:.3} dB); gain {:.3} dB",
        rep.numeric_db, rep.gain_db
    ))
}

fn fig3_signs() -> Outcome {
    let gain = |rho: f64| cocktail_rate(3.5, rho) - awgn_capacity(rho).unwrap();
    let (lo, hi) = (gain(0.01), gain(10.0));
    ensure(lo > 0.0, || format!("R - C at 0.01 = {lo}"))?;
    ensure(hi < 0.0, || format!("R - C at 10 = {hi}"))?;
    let mut worst = 0.0f64;
    for rho in [1e-3, 2e-3, 5e-3] {
        let p = CocktailParams::from_ratio(3.5, rho, 0.5).unwrap();
        let dc = adr_gain_low_snr(&p, NoiseModel::new(1.0).unwrap());
        let rel = (gain(rho) - dc).abs() / dc;
        ensure(rel <= 0.1, || format!("rho={rho}: R-C {} vs dC {dc}", gain(rho)))?;
        worst = worst.max(rel);
    }
    Ok(format!(
        "R-C = {lo:+.5} at 0.01, {hi:+.3} at 10; dC within {:.1}% for rho <= 0.005",
        100.0 * worst
    ))
}

fn ratio_ordering() -> Outcome {
    let (l15, l35) = (cocktail_rate(1.5, 0.01), cocktail_rate(3.5, 0.01));
    let (h15, h35) = (cocktail_rate(1.5, 10.0), cocktail_rate(3.5, 10.0));
    ensure(l35 > l15, || format!("at 0.01: r3.5 {l35} <= r1.5 {l15}"))?;
    ensure(h35 < h15, || format!("at 10: r3.5 {h35} >= r1.5 {h15}"))?;
    Ok(format!("rho=0.01: {l35:.5} > {l15:.5}; rho=10: {h35:.4} < {h15:.4}"))
}

fn cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |dir: &str, threads: &str| -> Result<Vec<Vec<u8>>, String> {
        let d = tmp.path().join(dir);
        let ds = d.to_str().unwrap();
        let sim = d.join("sim.json");
        let invocations: [Vec<&str>; 3] = [
            vec!["--out-dir", ds, "cocktail", "--plot"],
            vec!["--out-dir", ds, "mi", "--capacity", "--grid", "0.001:100:log:30"],
            vec!["simulate", "--seed", "42", "--n", "200000", "--out", sim.to_str().unwrap()],
        ];
        for args in invocations {
            let st = Command::new(env!("CARGO_BIN_EXE_cbpsk"))
                .args(&args)
                .env("RAYON_NUM_THREADS", threads)
                .status()
                .map_err(|e| e.to_string())?;
            ensure(st.success(), || format!("cbpsk {args:?} failed"))?;
        }
        ["fig1.csv", "fig2.csv", "fig3.csv", "fig2.svg", "sim.json"]
            .iter()
            .map(|f| fs::read(d.join(f)).map_err(|e| format!("{f}: {e}")))
            .collect()
    };
    let a = run("a", "1")?;
    let b = run("b", "1")?;
    let c = run("c", "4")?;
    ensure(a == b, || "repeated runs differ".into())?;
    ensure(a == c, || "output depends on thread count".into())?;
    Ok("fig1/fig2/fig3 CSV, SVG and simulate report byte-identical across 3 runs (1 and 4 threads)".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("capacity exactness", capacity_exact),
        ("BPSK MI quadrature vs Monte Carlo", bpsk_mc_oracle),
        ("conventional-alphabet curve structure", fig1_structure),
        ("low-SNR linearity", low_snr_linearity),
        ("noise-free roundtrip", noise_free_roundtrip),
        ("energy identities", energy_identities),
        ("1.8 dB limiting gain", limit_gain),
        ("rate-minus-capacity signs", fig3_signs),
        ("ratio ordering", ratio_ordering),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
