use super::quadrature::checked;
use crate::error::{Error, Result};
use num_integer::Integer;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

/// Default Gauss nodes per panel.
pub const DEFAULT_QUAD_POINTS: usize = 20;

/// Largest exponent accepted by [`covariance_decay`].
pub const MAX_COVARIANCE_EXPONENT: u32 = 14;

fn ln_sin_pi(x: f64) -> f64 {
    (PI * x).sin().abs().ln()
}

/// `int_0^1 log|sin pi x| dx`, which equals `-log 2`.
pub fn log_sine_integral(quad_points: usize) -> Result<f64> {
    checked(quad_points, |g| 2.0 * g.integrate_from_singularity(ln_sin_pi, 0.5))
}

/// `Omega_1(delta) = int_T |f(x + delta) - f(x)| dx` for `f = log|sin pi x|`.
///
/// On `(0, 1 - delta)` the integrand changes sign at `(1 - delta)/2` and the
/// two halves are mirror images, each singular at one end. On `(1 - delta, 1)`
/// it is symmetric about the midpoint. Each piece is parametrized by its
/// offset from the singular end.
pub fn modulus_of_continuity(delta: f64, quad_points: usize) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::PreconditionViolated(format!(
            "delta = {delta} must lie in (0, 1/4)"
        )));
    }
    checked(quad_points, |g| {
        let outer = g.integrate_from_singularity(
            |u| ln_sin_pi(u + delta) - ln_sin_pi(u),
            (1.0 - delta) / 2.0,
        );
        let inner = g.integrate_from_singularity(
            |v| ln_sin_pi(delta - v) - ln_sin_pi(v),
            delta / 2.0,
        );
        2.0 * outer + 2.0 * inner
    })
}

/// `log|sin pi m x|` at `x = s/L + u`, with the exact part reduced mod 1 first.
fn factor(m: u64, s: u64, l: u64, u: f64) -> f64 {
    let r = ((m as u128 * s as u128) % l as u128) as u64;
    if r == 0 {
        ln_sin_pi(m as f64 * u)
    } else {
        ln_sin_pi(r as f64 / l as f64 + m as f64 * u)
    }
}

/// `Cov(f; p, q) = int_0^1 f(px) f(qx) dx - (int f)^2` with `p = 2^j - 1`,
/// `q = 2^k - 1`, `f = log|sin pi x|`.
///
/// The zeros of both factors split the circle into cells; each cell is halved
/// and integrated toward its singular ends.
pub fn covariance_decay(j: u32, k: u32, quad_points: usize) -> Result<f64> {
    let (j, k) = (j.min(k), j.max(k));
    if j == 0 || k > MAX_COVARIANCE_EXPONENT {
        return Err(Error::PreconditionViolated(format!(
            "need 1 <= j <= k <= {MAX_COVARIANCE_EXPONENT}, got ({j}, {k})"
        )));
    }
    let p = (1u64 << j) - 1;
    let q = (1u64 << k) - 1;
    let l = p.lcm(&q);
    let mut cuts: Vec<u64> = (0..=p).map(|m| m * (l / p)).chain((0..=q).map(|m| m * (l / q))).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let integrand = move |s: u64, u: f64| factor(p, s, l, u) * factor(q, s, l, u);
    let second_moment = checked(quad_points, |g| {
        let parts: Vec<f64> = cuts
            .par_windows(2)
            .map(|w| {
                let half = (w[1] - w[0]) as f64 / l as f64 / 2.0;
                g.integrate_from_singularity(|u| integrand(w[0], u), half)
                    + g.integrate_from_singularity(|u| integrand(w[1], -u), half)
            })
            .collect();
        parts.into_iter().collect::<crate::numeric::CompensatedSum>().value()
    })?;
    Ok(second_moment - LN_2 * LN_2)
}
