use crate::dyadic::{torus_distance, Potential, TorusPoint};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::LN_2;

#[derive(Clone, Debug, Serialize)]
pub struct BindingReport {
    #[serde(serialize_with = "crate::singularity::ser_ratio")]
    pub rho: BigRational,
    /// Largest `p` with `2^(k+1) rho < d(T^k b, b)` for all `1 <= k <= p`.
    pub p: u64,
    pub k0: f64,
    #[serde(serialize_with = "crate::singularity::ser_ratio")]
    pub rho0: BigRational,
    /// `C log2(1/rho)` with `C = 1/(2(K0 + 2))`.
    pub lower_bound: f64,
    /// Whether `rho <= rho0`, the range where the lower bound is claimed.
    pub bound_applies: bool,
    pub bound_holds: bool,
    /// `2^(p+2) rho >= d(T^(p+1) b, b)`.
    pub bind2_holds: bool,
    /// Number of `n` checked for the `K0` hypothesis.
    pub hypothesis_horizon: u64,
}

fn pow2(k: u64) -> BigRational {
    BigRational::from_integer(BigInt::one() << k)
}

fn log2_ratio(r: &BigRational) -> f64 {
    TorusPoint::Rational(r.clone()).ln() / LN_2
}

/// `d(T^k b, b)` for `k = 0..=n`.
fn return_distances(b: &TorusPoint, n: u64) -> Result<Vec<TorusPoint>> {
    if let Some(width) = b.width() {
        if width < n as usize + 2 {
            return Err(Error::InsufficientPrecision {
                needed: n as usize + 2,
                available: width,
            });
        }
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut y = b.clone();
    for k in 0..=n {
        if k > 0 {
            y = y.double();
        }
        out.push(torus_distance(&y, b));
    }
    Ok(out)
}

/// Smallest `k` with `2^(k+1) rho >= 1/2`; (bind1) must fail by then.
fn exhaustion_step(rho: &BigRational) -> u64 {
    let half = BigRational::new(1.into(), 2.into());
    let mut k = 0;
    while pow2(k + 1) * rho < half {
        k += 1;
    }
    k
}

/// Binding period of radius `rho` given the return distances of `b`.
fn binding_from(dist: &[TorusPoint], rho: &BigRational) -> u64 {
    let mut p = 0;
    for (k, d) in dist.iter().enumerate().skip(1) {
        if pow2(k as u64 + 1) * rho < d.to_ratio() {
            p = k as u64;
        } else {
            break;
        }
    }
    p
}

/// Binding period `p(rho)` of the singular point, with the hypothesis
/// `(1/n) sum_{i=1..n} log2 d(T^i b, b) > -K0` verified for every `n` up to
/// the step where the binding condition is bound to fail.
pub fn binding_period(p: &Potential, rho: &BigRational, k0: f64) -> Result<BindingReport> {
    if !rho.is_positive() {
        return Err(Error::PreconditionViolated("rho must be positive".into()));
    }
    let b = p.b();
    let kmax = exhaustion_step(rho);
    let horizon = kmax.max(1);
    let dist = return_distances(&b, horizon + 1)?;

    let mut sum = 0.0;
    for n in 1..=horizon {
        let d = &dist[n as usize];
        if d.is_zero() {
            return Err(Error::HypothesisViolated(format!(
                "b returns to itself at n = {n}; no K0 bounds its return averages"
            )));
        }
        sum += d.ln() / LN_2;
        if sum / n as f64 <= -k0 {
            return Err(Error::HypothesisViolated(format!(
                "average of log2 d(T^i b, b) over i <= {n} is {:.6}, not above -K0 = {}",
                sum / n as f64,
                -k0
            )));
        }
    }

    let pp = binding_from(&dist, rho);
    let bind2_holds = pow2(pp + 2) * rho >= dist[pp as usize + 1].to_ratio();
    let rho0 = dist[1].to_ratio() / BigRational::from_integer(8.into());
    let lower_bound = -log2_ratio(rho) / (2.0 * (k0 + 2.0));
    let bound_applies = rho <= &rho0 && !rho0.is_zero();
    Ok(BindingReport {
        rho: rho.clone(),
        p: pp,
        k0,
        rho0,
        lower_bound,
        bound_applies,
        bound_holds: !bound_applies || pp as f64 >= lower_bound.floor(),
        bind2_holds,
        hypothesis_horizon: horizon,
    })
}

/// Outcome of a free-return search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeReturn {
    pub binding_period: u64,
    /// First `s > p` with `d(T^s x, b) < rho0`, if one occurs by the horizon.
    pub time: Option<u64>,
    /// `(1/s) sum_{i<s} log2 d(T^i x, b)` when a return was found.
    pub log2_average: Option<f64>,
}

/// First free return of `x` to `B(b, rho0)`, `rho0 = d(Tb, b)/8`.
pub fn first_free_return(p: &Potential, x: &TorusPoint, horizon: u64) -> Result<FreeReturn> {
    let b = p.b();
    let rho = torus_distance(x, &b).to_ratio();
    if rho.is_zero() {
        return Err(Error::PreconditionViolated("x must differ from b".into()));
    }
    let kmax = exhaustion_step(&rho);
    let dist = return_distances(&b, kmax.max(1) + 1)?;
    let pp = binding_from(&dist, &rho);
    let rho0 = dist[1].to_ratio() / BigRational::from_integer(8.into());
    if let Some(width) = x.width() {
        let needed = horizon as usize + 1;
        if width < needed {
            return Err(Error::InsufficientPrecision {
                needed,
                available: width,
            });
        }
    }
    let mut y = x.clone();
    let mut log_sum = 0.0;
    for s in 0..=horizon {
        if s > 0 {
            y = y.double();
        }
        let d = torus_distance(&y, &b);
        if s > pp && d.to_ratio() < rho0 {
            return Ok(FreeReturn {
                binding_period: pp,
                time: Some(s),
                log2_average: Some(log_sum / s as f64),
            });
        }
        log_sum += d.ln() / LN_2;
    }
    Ok(FreeReturn {
        binding_period: pp,
        time: None,
        log2_average: None,
    })
}

/// `rho` as a float, for reporting.
pub fn rho_f64(rho: &BigRational) -> f64 {
    rho.to_f64().unwrap_or(0.0)
}
