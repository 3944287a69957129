//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL` line straight to stderr so that the line shows up
//! even when libtest captures output.

use clap::Parser;
use doubling_cli::commands::execute;
use doubling_cli::{Cli, Report};
use doubling_spectrum::cover::{brute_force_fnm, enumerate_fnm};
use doubling_spectrum::dyadic::{sigma_direct, sigma_modulus, BinaryFixed, Potential, TorusPoint};
use doubling_spectrum::orbit::{extremes_scan, max_defect_bound};
use doubling_spectrum::singularity::{orbit_class_of_b, OrbitClass};
use doubling_spectrum::thermo::{
    build_subsystem, c_zero_reference, c_zero_spectrum, legendre_transform, pressure,
    pressure_curve, standard_t_grid, Conjugate, PressureCurve,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::f64::consts::LN_2;
use std::io::Write;
use std::time::{Duration, Instant};

fn report(n: u32, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {n:2}: {verdict} | {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

fn cli(args: &[&str]) -> Report {
    let cli = Cli::try_parse_from(std::iter::once("doubling").chain(args.iter().copied()))
        .expect("valid command line");
    execute(&cli).expect("command succeeds")
}

fn field<'a>(r: &'a Report, key: &str) -> &'a Value {
    r.fields.get(key).unwrap_or_else(|| panic!("missing field {key}"))
}

fn num(v: &Value) -> f64 {
    match v {
        Value::String(s) if s == "-inf" => f64::NEG_INFINITY,
        _ => v.as_f64().expect("number"),
    }
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

#[test]
fn criterion_01_c_zero_extremes() {
    let start = Instant::now();
    let out = cli(&["extremes", "--c", "0", "--max-period", "12"]);
    let elapsed = start.elapsed();
    let beta = num(field(&out, "beta"));
    let alpha = num(field(&out, "alpha"));
    let argmax = field(&out, "argmax")["word"].as_str().unwrap().to_string();
    let mut worst = 0f64;
    for o in field(&out, "orbits").as_array().unwrap() {
        if o["period"].as_u64() == Some(1) {
            continue;
        }
        worst = worst.max((num(&o["average"]) + LN_2).abs());
    }
    let pass = beta == 0.0
        && argmax == "0"
        && (alpha + LN_2).abs() <= 1e-12
        && worst <= 1e-12
        && elapsed < Duration::from_secs(10);
    report(
        1,
        pass,
        format!("beta = {beta} at {argmax:?}, alpha = {alpha}, max |avg + log 2| off the fixed points = {worst:.2e}, {}", secs(elapsed)),
    );
}

#[test]
fn criterion_02_gelfond_half() {
    let start = Instant::now();
    let out = cli(&["gelfond", "--c", "1/2", "--max-period", "13"]);
    let elapsed = start.elapsed();
    let gamma = num(field(&out, "gelfond_exponent"));
    let expected = 3f64.ln() / 4f64.ln();
    let argmax = field(&out, "argmax")["word"].as_str().unwrap().to_string();
    // The cycle {1/3, 2/3} is the necklace 01.
    let pass = (gamma - expected).abs() <= 1e-12 && argmax == "01" && elapsed < Duration::from_secs(60);
    report(
        2,
        pass,
        format!("gamma = {gamma:.15}, log 3 / log 4 = {expected:.15}, argmax {argmax:?}, {}", secs(elapsed)),
    );
}

#[test]
fn criterion_03_orbit_classification() {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for c in ["1/2", "1/6"] {
        let out = cli(&["mcstar", "--c", c, "--horizon", "100"]);
        let m = num(field(&out, "m_star_estimate"));
        let periodic = field(&out, "orbit_class")["kind"] == "periodic";
        pass &= m == f64::NEG_INFINITY && periodic;
        details.push(format!("c = {c}: m* = {m}, periodic = {periodic}"));
    }
    let out = cli(&["mcstar", "--c", "1/4", "--horizon", "100"]);
    let avg = field(&out, "partial_avg").as_array().unwrap();
    let at_100 = num(&avg[99]);
    let class = orbit_class_of_b(&Potential::rational(1, 4)).unwrap();
    pass &= avg.len() == 100
        && (at_100 + LN_2 / 2.0).abs() <= 1e-9
        && matches!(class, OrbitClass::Preperiodic { .. });
    details.push(format!("c = 1/4 ({class:?}): average at n = 100 is {at_100}"));
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    details.push(secs(elapsed));
    report(3, pass, details.join("; "));
}

#[test]
fn criterion_04_monte_carlo() {
    let start = Instant::now();
    let out = cli(&["montecarlo", "--samples", "200", "--horizon", "2000"]);
    let elapsed = start.elapsed();
    let s = field(&out, "summary");
    let mean = num(&s["mean"]);
    let frac = num(&s["fraction_within_band"]);
    let width = field(&out, "width").as_u64().unwrap();
    let pass = width == 2064
        && frac >= 0.95
        && (mean + LN_2).abs() <= 0.02
        && elapsed < Duration::from_secs(300);
    report(
        4,
        pass,
        format!("mean = {mean:.5}, within 0.05 of -log 2: {:.1}%, width {width}, {}", 100.0 * frac, secs(elapsed)),
    );
}

#[test]
fn criterion_05_hat_q_certification() {
    let start = Instant::now();
    let out = cli(&["cover-check", "--max-sum", "20"]);
    let elapsed = start.elapsed();
    let certs = field(&out, "hat_q").as_array().unwrap();
    let pairs = (2..=20u64).map(|s| s - 1).sum::<u64>() as usize;
    let all_rows = out.rows.iter().all(|row| row[4] == "true");
    let max_per_j = certs.iter().map(|c| c["max_per_j"].as_u64().unwrap()).max().unwrap();
    let pass = certs.len() == pairs
        && out.rows.len() == 3 * pairs
        && all_rows
        && out.failures == 0
        && elapsed < Duration::from_secs(300);
    report(
        5,
        pass,
        format!("{} pairs with i + j <= 20, largest count in one J = {max_per_j}, {}", certs.len(), secs(elapsed)),
    );
}

#[test]
fn criterion_06_fnm_counting() {
    let start = Instant::now();
    let epsilons = [r(1, 10), r(1, 5), r(1, 4), r(3, 10), r(1, 3), r(1, 2), r(3, 4), r(1, 1)];
    let mut mismatches = Vec::new();
    let mut over = Vec::new();
    let mut largest = 0u128;
    for eps in &epsilons {
        for n in 1..=28 {
            let m = 1 + n % 3;
            let dp = enumerate_fnm(n, m, eps).unwrap();
            largest = largest.max(dp.count);
            if n <= 14 && dp.count != brute_force_fnm(n, m, eps).unwrap() {
                mismatches.push(format!("n={n} eps={eps}"));
            }
            if !dp.within_majorant {
                over.push(format!("n={n} eps={eps}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && over.is_empty() && elapsed < Duration::from_secs(120);
    report(
        6,
        pass,
        format!(
            "brute force mismatches (n <= 14): {mismatches:?}; majorant violations (n <= 28): {over:?}; largest count {largest}, {}",
            secs(elapsed)
        ),
    );
}

#[test]
fn criterion_07_c_zero_legendre() {
    let curve = PressureCurve::from_fn(&standard_t_grid(), c_zero_reference);
    let mut worst = 0f64;
    let mut details = Vec::new();
    for alpha in [-LN_2, -0.5, -0.2, 0.0] {
        let (err, value) = match legendre_transform(&curve, alpha).unwrap() {
            Conjugate::Finite { lower, upper } => {
                let e = (lower - c_zero_spectrum(alpha)).abs().max((upper - c_zero_spectrum(alpha)).abs());
                (e, format!("[{lower:.6}, {upper:.6}]"))
            }
            Conjugate::MinusInfinity => (f64::INFINITY, "-inf".into()),
        };
        worst = worst.max(err);
        details.push(format!("p*({alpha:.4}) = {value}"));
    }
    report(7, worst <= 1e-3, format!("{}; max error {worst:.2e}", details.join(", ")));
}

#[test]
fn criterion_08_pressure_brackets() {
    let start = Instant::now();
    let p = Potential::rational(1, 2);
    let grid: Vec<f64> = (-16..=16).map(|i| i as f64 / 4.0).collect();
    let deltas = [r(1, 8), r(1, 16), r(1, 32)];
    let levels = [8u32, 10, 12];
    // curves[level][delta]
    let curves: Vec<Vec<PressureCurve>> = levels
        .iter()
        .map(|&n| deltas.iter().map(|d| pressure_curve(&p, d, n, &grid).unwrap()).collect())
        .collect();

    let ordered = curves
        .iter()
        .flatten()
        .all(|c| c.samples.iter().all(|s| s.lower <= s.upper));

    let mut monotone = true;
    let mut worst_drop = 0f64;
    for by_delta in &curves {
        for pair in by_delta.windows(2) {
            for (coarse, fine) in pair[0].samples.iter().zip(&pair[1].samples) {
                let drop = coarse.lower - fine.lower;
                worst_drop = worst_drop.max(drop);
                if drop > fine.upper - fine.lower {
                    monotone = false;
                }
            }
        }
    }

    let width = |c: &PressureCurve| c.samples.iter().map(|s| s.upper - s.lower).fold(0.0, f64::max);
    let ratios: Vec<f64> = (0..deltas.len())
        .map(|k| width(&curves[2][k]) / width(&curves[1][k]))
        .collect();
    let halves = ratios.iter().all(|&q| (0.35..=0.65).contains(&q));
    let elapsed = start.elapsed();
    let pass = ordered && monotone && halves && elapsed < Duration::from_secs(600);
    report(
        8,
        pass,
        format!(
            "lower <= upper: {ordered}; lower non-decreasing as delta shrinks within bracket width: {monotone} \
             (largest drop {worst_drop:.2e}); max-width ratio N=12 / N=10 per delta: {ratios:.3?} (required 0.5 +- 30%), {}",
            secs(elapsed)
        ),
    );
}

#[test]
fn criterion_09_spectrum_at_minus_log_two() {
    let start = Instant::now();
    let alpha = format!("{}", -LN_2);
    let out = cli(&[
        "spectrum", "--c", "1/2", "--alpha-grid", &alpha, "--delta-schedule", "1/16,1/64,1/256", "--level", "12",
    ]);
    let elapsed = start.elapsed();
    let d = &field(&out, "D")[0];
    let (lower, upper) = (num(&d["dLower"]), num(&d["dUpper"]));
    let pass = lower - 0.05 <= 1.0 && 1.0 <= upper + 0.05;
    report(
        9,
        pass,
        format!("D(-log 2) in [{lower:.5}, {upper:.5}] at delta = 1/256, N = 12, {}", secs(elapsed)),
    );
}

#[test]
fn criterion_10_endpoint_trend() {
    // The true values fall like 0.02, 3e-4, 1e-7, 1e-14, while the bracket
    // width grows like t 2^-N; monotonicity is judged with the same
    // bracket-width slack as criterion 8.
    let start = Instant::now();
    let p = Potential::rational(1, 2);
    let beta = extremes_scan(&p, 13).unwrap().beta.to_f64();
    let m = build_subsystem(&p, &r(1, 8), 18).unwrap();
    let ts = [8.0, 16.0, 32.0, 64.0];
    let vals: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let (lo, hi) = pressure(&m, t).unwrap();
            (lo - t * beta, hi - t * beta)
        })
        .collect();
    let positive = vals.iter().all(|&(_, hi)| hi > 0.0) && vals[0].0 > 0.0;
    let mid = |v: (f64, f64)| (v.0 + v.1) / 2.0;
    let mut decreasing = true;
    for k in 0..vals.len() {
        for l in k + 1..vals.len() {
            if vals[l].0 > vals[k].1 {
                decreasing = false;
            }
        }
        if k + 1 < vals.len() && mid(vals[k + 1]) > mid(vals[k]) + (vals[k + 1].1 - vals[k + 1].0) {
            decreasing = false;
        }
    }
    let small = vals[3].1 < 0.05;
    let elapsed = start.elapsed();
    let shown: Vec<String> = ts
        .iter()
        .zip(&vals)
        .map(|(t, (lo, hi))| format!("t={t}: [{lo:.6}, {hi:.6}]"))
        .collect();
    report(
        10,
        positive && decreasing && small,
        format!(
            "p(t) - t beta with beta = {beta:.12}, delta = 1/8, N = 18: {}; positive {positive}, decreasing {decreasing}, final < 0.05 {small}, {}",
            shown.join(", "),
            secs(elapsed)
        ),
    );
}

#[test]
fn criterion_11_product_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0f64;
    let mut smallest = f64::INFINITY;
    for i in 0..100 {
        let (c, x) = if i % 2 == 0 {
            let qc = rng.gen_range(2..1_000_000i64);
            let qx = rng.gen_range(2..1_000_000i64);
            (TorusPoint::rational(rng.gen_range(1..qc), qc), TorusPoint::rational(rng.gen_range(0..qx), qx))
        } else {
            (
                TorusPoint::from(BinaryFixed::random(&mut rng, 128)),
                TorusPoint::from(BinaryFixed::random(&mut rng, 128)),
            )
        };
        let p = Potential::new(c);
        let n = rng.gen_range(0..=16u32);
        let direct = sigma_direct(&p, &x, 1 << n).unwrap().norm();
        let modulus = sigma_modulus(&p, &x, n as u64).unwrap();
        smallest = smallest.min(modulus);
        worst = worst.max((direct - modulus).abs() / modulus);
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9 && elapsed < Duration::from_secs(30);
    report(
        11,
        pass,
        format!("max relative difference {worst:.2e} over 100 cases (smallest |sigma| {smallest:.2e}), {}", secs(elapsed)),
    );
}

#[test]
fn criterion_12_uniform_defect() {
    let p = Potential::rational(1, 2);
    let beta = extremes_scan(&p, 13).unwrap().beta.to_f64();
    let ns = [4u32, 8, 16];
    let defects: Vec<f64> = ns
        .iter()
        .map(|&n| max_defect_bound(&p, n, 1 << 14, beta).unwrap().to_f64())
        .collect();
    let finite = defects.iter().all(|d| d.is_finite());
    let bound = defects.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Running maximum up to each n; bounded means the last doubling adds nothing.
    let envelope: Vec<f64> = defects
        .iter()
        .scan(f64::NEG_INFINITY, |m, &d| {
            *m = m.max(d);
            Some(*m)
        })
        .collect();
    let flat = envelope[2] <= envelope[1];
    let shown: Vec<String> = ns.iter().zip(&defects).map(|(n, d)| format!("n={n}: {d:.6}")).collect();
    report(
        12,
        finite && flat,
        format!(
            "max_x S_n f - n beta on 16383 points: {}; bound C = {bound:.6}; running max {envelope:.6?}",
            shown.join(", ")
        ),
    );
}

#[test]
fn criterion_13_modulus_band() {
    let out = cli(&["modulus", "--k-min", "4", "--k-max", "16"]);
    let lo = num(field(&out, "ratio_min"));
    let hi = num(field(&out, "ratio_max"));
    let band = num(field(&out, "band_ratio"));
    report(
        13,
        band < 2.0 && lo > 0.0,
        format!("Omega_1 / (delta |log delta|) in [{lo:.4}, {hi:.4}] for k = 4..16, max/min = {band:.4}"),
    );
}
