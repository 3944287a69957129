//! The cross-module oracle suite behind `validate`.

use crate::error::CliResult;
use crate::output::Report;
use doubling_spectrum::cover::{
    brute_force_fnm, certify_hat_q_bound, certify_multi_cover, compute_qij, enumerate_fnm,
    qij_measure_closed_form,
};
use doubling_spectrum::dyadic::{sigma_direct, sigma_modulus, ExtendedReal, Potential, TorusPoint};
use doubling_spectrum::orbit::extremes_scan;
use doubling_spectrum::singularity::mcstar_trace;
use doubling_spectrum::thermo::{
    c_zero_reference, c_zero_spectrum, legendre_transform, standard_t_grid, Conjugate, PressureCurve,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::f64::consts::LN_2;

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn c_zero_extremes() -> CliResult<Check> {
    let p = Potential::rational(0, 1);
    let r = extremes_scan(&p, 12)?;
    let beta_ok = r.beta == ExtendedReal::Finite(0.0) && r.argmax.word() == "0";
    let alpha = r.alpha.to_f64();
    let alpha_ok = (alpha + LN_2).abs() < 1e-12;
    Ok(Check {
        name: "c0_extremes",
        pass: beta_ok && alpha_ok,
        detail: format!("alpha = {alpha}, beta = {} at {}", r.beta, r.argmax),
    })
}

fn c_zero_legendre() -> CliResult<Check> {
    let curve = PressureCurve::from_fn(&standard_t_grid(), c_zero_reference);
    let mut worst = 0f64;
    for alpha in [-LN_2, -0.5, -0.2, 0.0] {
        let v = match legendre_transform(&curve, alpha)? {
            Conjugate::Finite { upper, .. } => upper,
            Conjugate::MinusInfinity => f64::NEG_INFINITY,
        };
        worst = worst.max((v - c_zero_spectrum(alpha)).abs());
    }
    let outside = legendre_transform(&curve, 0.5)? == Conjugate::MinusInfinity;
    Ok(Check {
        name: "c0_legendre",
        pass: worst < 1e-3 && outside,
        detail: format!("max error {worst:.3e}; -inf beyond the window: {outside}"),
    })
}

fn classification() -> CliResult<Check> {
    let periodic = [(1, 2), (1, 6)]
        .iter()
        .map(|&(n, d)| mcstar_trace(&Potential::rational(n, d), 100))
        .collect::<Result<Vec<_>, _>>()?;
    let periodic_ok = periodic.iter().all(|t| t.m_star_estimate == ExtendedReal::NegInfinity);
    let quarter = mcstar_trace(&Potential::rational(1, 4), 100)?;
    let last = quarter.last_average().unwrap_or(f64::NAN);
    let ok = periodic_ok && (last + LN_2 / 2.0).abs() < 1e-9;
    Ok(Check {
        name: "b_orbit_classification",
        pass: ok,
        detail: format!("c = 1/2, 1/6 give -inf: {periodic_ok}; c = 1/4 average {last}"),
    })
}

fn product_identity(seed: u64) -> CliResult<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for _ in 0..100 {
        let q_c = rng.gen_range(2..1_000_000i64);
        let q_x = rng.gen_range(2..1_000_000i64);
        let p = Potential::rational(rng.gen_range(1..q_c), q_c);
        let x = TorusPoint::rational(rng.gen_range(0..q_x), q_x);
        let n = rng.gen_range(0..=16u32);
        let direct = sigma_direct(&p, &x, 1 << n)?.norm();
        let modulus = sigma_modulus(&p, &x, n as u64)?;
        worst = worst.max((direct - modulus).abs() / modulus);
    }
    Ok(Check {
        name: "product_identity",
        pass: worst <= 1e-9,
        detail: format!("max relative difference {worst:.3e} over 100 cases"),
    })
}

fn q_measure() -> CliResult<Check> {
    let mut bad = Vec::new();
    for i in 1..=8 {
        for j in 1..=8 {
            if compute_qij(i, j)?.measure() != qij_measure_closed_form(j) {
                bad.push((i, j));
            }
        }
    }
    Ok(Check {
        name: "q_measure",
        pass: bad.is_empty(),
        detail: format!("mismatches for i, j <= 8: {bad:?}"),
    })
}

fn hat_q() -> CliResult<Check> {
    let mut failed = Vec::new();
    for s in 2..=14 {
        for i in 1..s {
            if !certify_hat_q_bound(i, s - i)?.pass {
                failed.push((i, s - i));
            }
        }
    }
    let multi = [(vec![3, 6], vec![3, 3]), (vec![2, 4, 8], vec![2, 4, 2])]
        .iter()
        .map(|(i, j)| certify_multi_cover(i, j).map(|c| c.pass))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Check {
        name: "cover_certificates",
        pass: failed.is_empty() && multi.iter().all(|&b| b),
        detail: format!("i + j <= 14 failures: {failed:?}; multi-cover passes: {multi:?}"),
    })
}

fn fnm() -> CliResult<Check> {
    let mut bad = Vec::new();
    for eps in [BigRational::new(1.into(), 4.into()), BigRational::new(1.into(), 2.into())] {
        for n in 1..=10 {
            let dp = enumerate_fnm(n, 1, &eps)?;
            if dp.count != brute_force_fnm(n, 1, &eps)? || !dp.within_majorant {
                bad.push(format!("n={n} eps={eps}"));
            }
        }
    }
    Ok(Check {
        name: "fnm_count",
        pass: bad.is_empty(),
        detail: format!("dynamic program vs brute force for n <= 10, failures: {bad:?}"),
    })
}

/// Runs every check; failures are reported, not raised.
pub fn validate(seed: u64) -> CliResult<Report> {
    let checks = vec![
        c_zero_extremes()?,
        c_zero_legendre()?,
        classification()?,
        product_identity(seed)?,
        q_measure()?,
        hat_q()?,
        fnm()?,
    ];
    let mut out = Report::new("validate", vec!["check", "pass", "detail"]);
    let mut rows = Vec::new();
    for c in &checks {
        out.row(vec![c.name.into(), c.pass.to_string(), c.detail.clone()]);
        rows.push(json!({"check": c.name, "pass": c.pass, "detail": c.detail}));
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    out.set("checks", rows).set("failures", failures);
    out.failures = failures;
    Ok(out)
}
