//! One function per subcommand, each producing a [`Report`].

use crate::cli::{Cli, Command};
use crate::error::{CliError, CliResult};
use crate::output::{ext_cell, f64_cell, point_cell, point_json, rational_json, Report};
use crate::parse::{parse_c, parse_grid, parse_index_list, parse_radius, parse_radius_list, parse_rational, parse_t_grid};
use crate::validate::validate;
use doubling_spectrum::cover::{certify_hat_q_bound, certify_multi_cover, enumerate_fnm, M};
use doubling_spectrum::dyadic::{sigma_direct, sigma_modulus, Potential, TorusPoint};
use doubling_spectrum::orbit::{extremes_from_averages, gelfond_from_beta, orbit_averages, sturmian_arc_check};
use doubling_spectrum::singularity::{
    binding_period, covariance_decay, first_free_return, mcstar_trace, modulus_of_continuity,
    monte_carlo_a5, orbit_class_of_b,
};
use doubling_spectrum::thermo::{dimension_spectrum, pressure_curve};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::json;

/// Runs the selected subcommand.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let seed = cli.seed;
    let width = cli.width.map(|w| w as usize);
    let potential = |c: &str| parse_c(c, width, seed).map(Potential::new);
    match &cli.command {
        Command::Extremes { c, max_period } => extremes(&potential(&c.c)?, *max_period),
        Command::Gelfond { c, max_period } => gelfond(&potential(&c.c)?, *max_period),
        Command::Mcstar { c, horizon } => mcstar(&potential(&c.c)?, *horizon),
        Command::Binding { c, rho, k0, x, horizon } => {
            let p = potential(&c.c)?;
            let rho = parse_rational(rho)?;
            if !rho.is_positive() {
                return Err(CliError::Usage("--rho must be positive".into()));
            }
            // Offset the seed so that `--c random --x random` differ.
            let x = x.as_deref().map(|x| parse_c(x, width, seed.wrapping_add(1))).transpose()?;
            binding(&p, &rho, *k0, x.as_ref(), *horizon)
        }
        Command::Montecarlo { samples, horizon } => montecarlo(*samples as usize, *horizon, seed),
        Command::Modulus { k_min, k_max, quad_points } => {
            if k_min > k_max {
                return Err(CliError::Usage("--k-min exceeds --k-max".into()));
            }
            modulus(*k_min, *k_max, *quad_points as usize)
        }
        Command::Covariance { j, k, quad_points } => covariance(*j, &parse_index_list(k)?, *quad_points as usize),
        Command::Pressure { c, delta, level, t_grid } => {
            let p = potential(&c.c)?;
            let delta = parse_radius(delta)?;
            pressure(&p, &delta, *level, &parse_t_grid(t_grid)?)
        }
        Command::Spectrum { c, alpha_grid, delta_schedule, level } => {
            let p = potential(&c.c)?;
            let alphas = parse_grid(alpha_grid)?;
            let schedule = parse_radius_list(delta_schedule)?;
            spectrum(&p, &alphas, &schedule, *level)
        }
        Command::CoverCheck { max_sum, multi_i, multi_j, fnm_max_n, fnm_epsilon } => {
            let multi = match (multi_i, multi_j) {
                (Some(i), Some(j)) => Some((parse_index_list(i)?, parse_index_list(j)?)),
                _ => None,
            };
            let eps = parse_rational(fnm_epsilon)?;
            if !eps.is_positive() {
                return Err(CliError::Usage("--fnm-epsilon must be positive".into()));
            }
            cover_check(*max_sum, multi, *fnm_max_n, &eps)
        }
        Command::Validate => validate(seed),
        Command::Polynomial { c, x, n } => {
            let p = potential(&c.c)?;
            let x = parse_c(x, width, seed.wrapping_add(1))?;
            polynomial(&p, &x, *n)
        }
    }
}

fn bool_cell(b: bool) -> String {
    b.to_string()
}

pub fn extremes(p: &Potential, max_period: u32) -> CliResult<Report> {
    let averages = orbit_averages(p, max_period)?;
    let report = extremes_from_averages(&averages, max_period)?;
    let mut out = Report::new(
        "extremes",
        vec!["c", "max_period", "period", "word", "average", "is_singular", "is_argmin", "is_argmax"],
    );
    let c = point_cell(p.c());
    let mut orbits = Vec::with_capacity(averages.len());
    for (o, avg) in &averages {
        let (is_min, is_max) = (*o == report.argmin, *o == report.argmax);
        out.row(vec![
            c.clone(),
            max_period.to_string(),
            o.period().to_string(),
            o.word(),
            ext_cell(*avg),
            bool_cell(!avg.is_finite()),
            bool_cell(is_min),
            bool_cell(is_max),
        ]);
        orbits.push(json!({"word": o.word(), "period": o.period(), "average": avg}));
    }
    out.set("c", point_json(p.c()))
        .set("max_period", max_period)
        .set("alpha", report.alpha)
        .set("beta", report.beta)
        .set("argmin", &report.argmin)
        .set("argmax", &report.argmax)
        .set("orbit_count", report.orbit_count)
        .set("singular_orbits", &report.singular_orbits)
        .set("orbits", orbits);
    Ok(out)
}

pub fn gelfond(p: &Potential, max_period: u32) -> CliResult<Report> {
    let report = extremes_from_averages(&orbit_averages(p, max_period)?, max_period)?;
    let gamma = gelfond_from_beta(report.beta)?;
    let arc = sturmian_arc_check(&report);
    let mut out = Report::new(
        "gelfond",
        vec!["c", "max_period", "beta", "gelfond_exponent", "argmax_word", "argmax_period", "within_semicircle"],
    );
    out.row(vec![
        point_cell(p.c()),
        max_period.to_string(),
        ext_cell(report.beta),
        f64_cell(gamma),
        report.argmax.word(),
        report.argmax.period().to_string(),
        bool_cell(arc.within_semicircle),
    ]);
    out.set("c", point_json(p.c()))
        .set("max_period", max_period)
        .set("beta", report.beta)
        .set("gelfond_exponent", gamma)
        .set("argmax", &report.argmax)
        .set("argmax_arc", json!({
            "start": point_json(&arc.start),
            "length": rational_json(&arc.length),
            "within_semicircle": arc.within_semicircle,
        }));
    Ok(out)
}

pub fn mcstar(p: &Potential, horizon: u64) -> CliResult<Report> {
    let trace = mcstar_trace(p, horizon)?;
    let class = if p.c().is_rational() { Some(orbit_class_of_b(p)?) } else { None };
    let mut out = Report::new("mcstar", vec!["c", "n", "q", "partial_avg"]);
    let c = point_cell(p.c());
    for (i, (q, avg)) in trace.q.iter().zip(&trace.partial_avg).enumerate() {
        out.row(vec![c.clone(), (i + 1).to_string(), f64_cell(*q), f64_cell(*avg)]);
    }
    out.set("c", point_json(p.c()))
        .set("b", point_json(&p.b()))
        .set("orbit_class", class)
        .set("horizon", horizon)
        .set("m_star_estimate", trace.m_star_estimate)
        .set("periodic_at", trace.periodic_at)
        .set("last_average", trace.last_average())
        .set("q", &trace.q)
        .set("partial_avg", &trace.partial_avg);
    Ok(out)
}

pub fn binding(
    p: &Potential,
    rho: &BigRational,
    k0: f64,
    x: Option<&TorusPoint>,
    horizon: u64,
) -> CliResult<Report> {
    let report = binding_period(p, rho, k0)?;
    let free = x.map(|x| first_free_return(p, x, horizon)).transpose()?;
    let mut out = Report::new(
        "binding",
        vec![
            "c", "rho", "p", "k0", "rho0", "lower_bound", "bound_applies", "bound_holds",
            "bind2_holds", "free_return_time", "free_return_log2_average",
        ],
    );
    let opt = |v: Option<String>| v.unwrap_or_default();
    out.row(vec![
        point_cell(p.c()),
        rho.to_string(),
        report.p.to_string(),
        f64_cell(k0),
        report.rho0.to_string(),
        f64_cell(report.lower_bound),
        bool_cell(report.bound_applies),
        bool_cell(report.bound_holds),
        bool_cell(report.bind2_holds),
        opt(free.as_ref().and_then(|f| f.time).map(|t| t.to_string())),
        opt(free.as_ref().and_then(|f| f.log2_average).map(f64_cell)),
    ]);
    out.set("c", point_json(p.c()))
        .set("binding", &report)
        .set("x", x.map(point_json))
        .set("free_return", &free);
    Ok(out)
}

pub fn montecarlo(samples: usize, horizon: u64, seed: u64) -> CliResult<Report> {
    let s = monte_carlo_a5(samples, horizon, seed)?;
    let mut out = Report::new("montecarlo", vec!["sample", "average"]);
    let kept = (0..samples).filter(|i| !s.self_returns.contains(i));
    for (i, avg) in kept.zip(&s.averages) {
        out.row(vec![i.to_string(), f64_cell(*avg)]);
    }
    out.set("summary", &s).set("width", horizon + 64);
    Ok(out)
}

pub fn modulus(k_min: u32, k_max: u32, quad_points: usize) -> CliResult<Report> {
    let mut out = Report::new("modulus", vec!["k", "delta", "omega1", "ratio"]);
    let mut ratios = Vec::new();
    let mut rows = Vec::new();
    for k in k_min..=k_max {
        let delta = 2f64.powi(-(k as i32));
        let omega = modulus_of_continuity(delta, quad_points)?;
        let ratio = omega / (delta * delta.ln().abs());
        out.row(vec![k.to_string(), f64_cell(delta), f64_cell(omega), f64_cell(ratio)]);
        rows.push(json!({"k": k, "delta": delta, "omega1": omega, "ratio": ratio}));
        ratios.push(ratio);
    }
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    out.set("rows", rows)
        .set("ratio_min", min)
        .set("ratio_max", max)
        .set("band_ratio", max / min);
    Ok(out)
}

pub fn covariance(j: u32, ks: &[u32], quad_points: usize) -> CliResult<Report> {
    let mut out = Report::new("covariance", vec!["j", "k", "covariance"]);
    let mut rows = Vec::new();
    for &k in ks {
        let v = covariance_decay(j, k, quad_points)?;
        out.row(vec![j.to_string(), k.to_string(), f64_cell(v)]);
        rows.push(json!({"j": j, "k": k, "covariance": v}));
    }
    out.set("rows", rows);
    Ok(out)
}

pub fn pressure(p: &Potential, delta: &BigRational, level: u32, grid: &[f64]) -> CliResult<Report> {
    let curve = pressure_curve(p, delta, level, grid)?;
    let mut out = Report::new("pressure", vec!["t", "pLower", "pUpper"]);
    for s in &curve.samples {
        out.row(vec![f64_cell(s.t), f64_cell(s.lower), f64_cell(s.upper)]);
    }
    out.set("c", point_json(p.c()))
        .set("delta", rational_json(delta))
        .set("level", level)
        .set("samples", &curve.samples);
    Ok(out)
}

pub fn spectrum(p: &Potential, alphas: &[f64], schedule: &[BigRational], level: u32) -> CliResult<Report> {
    if p.c().is_zero() {
        return Err(CliError::Unsupported(
            "c = 0 lies outside 0 < c < 1; there the spectrum has the closed form \
             D(alpha) = |alpha| / log 2 on [-log 2, 0], which `validate` checks"
                .into(),
        ));
    }
    let curve = dimension_spectrum(p, alphas, schedule, level)?;
    let mut out = Report::new("spectrum", vec!["alpha", "dLower", "dUpper", "converged"]);
    for d in &curve.d {
        out.row(vec![f64_cell(d.alpha), f64_cell(d.lower), f64_cell(d.upper), bool_cell(d.converged)]);
    }
    out.set("c", point_json(p.c()))
        .set("alphaGrid", &curve.alpha_grid)
        .set("alphaWindow", curve.alpha_window)
        .set("deltaSchedule", schedule.iter().map(rational_json).collect::<Vec<_>>())
        .set("level", level)
        .set("D", &curve.d);
    Ok(out)
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

pub fn cover_check(
    max_sum: u32,
    multi: Option<(Vec<u32>, Vec<u32>)>,
    fnm_max_n: u32,
    eps: &BigRational,
) -> CliResult<Report> {
    let mut out = Report::new("cover-check", vec!["check", "params", "computed", "bound", "pass"]);
    let mut certs = Vec::new();
    for s in 2..=max_sum {
        for i in 1..s {
            let j = s - i;
            let cert = certify_hat_q_bound(i, j)?;
            let params = format!("i={i} j={j}");
            let measure_bound = BigRational::new(BigInt::from(M), pow2(j));
            out.row(vec![
                "hatq_per_j".into(),
                params.clone(),
                cert.max_per_j.to_string(),
                M.to_string(),
                bool_cell(cert.max_per_j <= M),
            ]);
            out.row(vec![
                "hatq_total".into(),
                params.clone(),
                cert.total_count.to_string(),
                (BigInt::from(M) * pow2(i)).to_string(),
                bool_cell(BigInt::from(cert.total_count) <= BigInt::from(M) * pow2(i)),
            ]);
            out.row(vec![
                "hatq_measure".into(),
                params,
                cert.measure.to_string(),
                measure_bound.to_string(),
                bool_cell(cert.measure <= measure_bound),
            ]);
            certs.push(cert);
        }
    }
    let mut failures = certs.iter().filter(|c| !c.pass).count();
    let multi = multi
        .map(|(i, j)| certify_multi_cover(&i, &j))
        .transpose()?;
    if let Some(m) = &multi {
        out.row(vec![
            "multi_cover".into(),
            format!("i={:?} j={:?}", m.i, m.j),
            m.count.to_string(),
            m.bound.to_string(),
            bool_cell(m.pass),
        ]);
        failures += usize::from(!m.pass);
    }
    let mut counts = Vec::new();
    for n in 1..=fnm_max_n {
        let f = enumerate_fnm(n, 1, eps)?;
        out.row(vec![
            "fnm_majorant".into(),
            format!("n={n} epsilon={eps}"),
            f.count.to_string(),
            format!("2^{} * {}", BigRational::from_integer((2 * n).into()) * eps, f.binomial_sum),
            bool_cell(f.within_majorant),
        ]);
        failures += usize::from(!f.within_majorant);
        counts.push(f);
    }
    out.set("max_sum", max_sum)
        .set("hat_q", &certs)
        .set("multi_cover", &multi)
        .set("fnm", &counts)
        .set("failures", failures);
    out.failures = failures;
    Ok(out)
}

pub fn polynomial(p: &Potential, x: &TorusPoint, n: u32) -> CliResult<Report> {
    let big_n = 1u64 << n;
    let direct = sigma_direct(p, x, big_n)?;
    let modulus = sigma_modulus(p, x, n as u64)?;
    let abs = direct.norm();
    let rel = (abs - modulus).abs() / modulus;
    let mut out = Report::new(
        "polynomial",
        vec!["c", "x", "n", "direct_re", "direct_im", "direct_abs", "modulus", "relative_difference"],
    );
    out.row(vec![
        point_cell(p.c()),
        point_cell(x),
        n.to_string(),
        f64_cell(direct.re),
        f64_cell(direct.im),
        f64_cell(abs),
        f64_cell(modulus),
        f64_cell(rel),
    ]);
    out.set("c", point_json(p.c()))
        .set("x", point_json(x))
        .set("n", n)
        .set("N", big_n)
        .set("direct", json!({"re": direct.re, "im": direct.im, "abs": abs}))
        .set("modulus", modulus)
        .set("relative_difference", rel);
    Ok(out)
}
