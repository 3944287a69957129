use crate::dyadic::{log_sin_pi_distance, torus_distance, Potential, TorusPoint, ExtendedReal};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Cap on the number of doublings spent detecting the cycle of `b`.
pub const CYCLE_SEARCH_LIMIT: u64 = 50_000_000;

/// Extra bits beyond the horizon required of binary inputs.
pub const TRACE_GUARD_BITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitClass {
    Periodic { period: u64 },
    Preperiodic { tail: u64, period: u64 },
    /// Unreachable for rational input; kept so callers match exhaustively.
    AperiodicRational,
}

/// Tail and cycle length of the doubling orbit of `b = 1/2 - c` (Brent).
pub fn orbit_class_of_b(p: &Potential) -> Result<OrbitClass> {
    if !p.c().is_rational() {
        return Err(Error::NonRationalInput);
    }
    let b = p.b();
    let step = |x: &TorusPoint| x.double();
    let mut power = 1u64;
    let mut lambda = 1u64;
    let mut tortoise = b.clone();
    let mut hare = step(&b);
    let mut spent = 1u64;
    while tortoise != hare {
        if power == lambda {
            tortoise = hare.clone();
            power *= 2;
            lambda = 0;
        }
        hare = step(&hare);
        lambda += 1;
        spent += 1;
        if spent > CYCLE_SEARCH_LIMIT {
            return Err(Error::SizeLimit {
                what: "cycle search steps",
                value: spent,
                limit: CYCLE_SEARCH_LIMIT,
            });
        }
    }
    let mut tortoise = b.clone();
    let mut hare = b;
    for _ in 0..lambda {
        hare = step(&hare);
    }
    let mut mu = 0u64;
    while tortoise != hare {
        tortoise = step(&tortoise);
        hare = step(&hare);
        mu += 1;
    }
    Ok(if mu == 0 {
        OrbitClass::Periodic { period: lambda }
    } else {
        OrbitClass::Preperiodic {
            tail: mu,
            period: lambda,
        }
    })
}

/// Close returns of a point `b` to itself under doubling.
#[derive(Clone, Debug, Serialize)]
pub struct ReturnTrace {
    pub horizon: u64,
    /// `q[n-1] = -log2 d(T^n b, b)`, `n = 1..`.
    pub q: Vec<f64>,
    /// `partial_avg[n-1] = (1/n) sum_{k=1..n} log sin(pi d(T^k b, b))`.
    pub partial_avg: Vec<f64>,
    /// Infimum of `partial_avg` over `n >= horizon / 2`; `-inf` if periodic.
    pub m_star_estimate: ExtendedReal,
    /// First `n` with `T^n b = b`, where the trace stops.
    pub periodic_at: Option<u64>,
}

impl ReturnTrace {
    pub fn is_periodic(&self) -> bool {
        self.periodic_at.is_some()
    }

    pub fn last_average(&self) -> Option<f64> {
        self.partial_avg.last().copied()
    }
}

/// Trace of `d(T^n x, x)` for `n = 1..=horizon`.
pub fn return_trace(x: &TorusPoint, horizon: u64) -> Result<ReturnTrace> {
    if let Some(width) = x.width() {
        let needed = horizon as usize + TRACE_GUARD_BITS;
        if width < needed {
            return Err(Error::InsufficientPrecision {
                needed,
                available: width,
            });
        }
    }
    let mut q = Vec::with_capacity(horizon as usize);
    let mut partial_avg = Vec::with_capacity(horizon as usize);
    let mut acc = CompensatedSum::new();
    let mut periodic_at = None;
    let mut y = x.clone();
    for n in 1..=horizon {
        y = y.double();
        let d = torus_distance(&y, x);
        if d.is_zero() {
            periodic_at = Some(n);
            break;
        }
        q.push(-d.ln() / LN_2);
        acc.add(log_sin_pi_distance(&d));
        partial_avg.push(acc.value() / n as f64);
    }
    let m_star_estimate = if periodic_at.is_some() {
        ExtendedReal::NegInfinity
    } else {
        let from = (horizon / 2).max(1) as usize - 1;
        ExtendedReal::Finite(
            partial_avg[from.min(partial_avg.len().saturating_sub(1))..]
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
        )
    };
    Ok(ReturnTrace {
        horizon,
        q,
        partial_avg,
        m_star_estimate,
        periodic_at,
    })
}

/// Return trace of the singular point `b`; estimates `m_c*`.
pub fn mcstar_trace(p: &Potential, horizon: u64) -> Result<ReturnTrace> {
    if horizon == 0 {
        return Err(Error::PreconditionViolated("horizon must be positive".into()));
    }
    return_trace(&p.b(), horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::BinaryFixed;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn class(n: i64, d: i64) -> OrbitClass {
        orbit_class_of_b(&Potential::rational(n, d)).unwrap()
    }

    /// Tail = 2-adic valuation of the denominator of b, period = order of 2
    /// modulo its odd part.
    fn number_theory_class(bn: u64, bd: u64) -> OrbitClass {
        let g = bn.gcd(&bd);
        let (bn, bd) = (bn / g, bd / g);
        let tail = bd.trailing_zeros() as u64;
        let odd = bd >> tail;
        let mut period = 1;
        let mut v = 2 % odd;
        while v != 1 % odd {
            v = v * 2 % odd;
            period += 1;
        }
        let _ = bn;
        if tail == 0 {
            OrbitClass::Periodic { period }
        } else {
            OrbitClass::Preperiodic { tail, period }
        }
    }

    #[test]
    fn class_examples() {
        assert_eq!(class(1, 2), OrbitClass::Periodic { period: 1 });
        assert_eq!(class(1, 4), OrbitClass::Preperiodic { tail: 2, period: 1 });
        assert_eq!(class(1, 6), OrbitClass::Periodic { period: 2 });
    }

    #[test]
    fn binary_c_is_rejected() {
        let p = Potential::new(BinaryFixed::zero(64).into());
        assert_eq!(orbit_class_of_b(&p), Err(Error::NonRationalInput));
    }

    #[test]
    fn trace_examples() {
        let t = mcstar_trace(&Potential::rational(1, 2), 10).unwrap();
        assert_eq!(t.periodic_at, Some(1));
        assert_eq!(t.m_star_estimate, ExtendedReal::NegInfinity);

        let t = mcstar_trace(&Potential::rational(1, 6), 10).unwrap();
        assert_eq!(t.periodic_at, Some(2));

        let t = mcstar_trace(&Potential::rational(1, 4), 100).unwrap();
        assert!(!t.is_periodic());
        let target = -0.5 * LN_2;
        assert!((t.last_average().unwrap() - target).abs() < 1e-12);
        assert!(t.q.iter().all(|&q| (q - 2.0).abs() < 1e-12));
    }

    #[test]
    fn binary_trace_needs_guard_bits() {
        let x = TorusPoint::from(BinaryFixed::half(100));
        assert!(matches!(
            return_trace(&x, 40),
            Err(Error::InsufficientPrecision { needed: 104, .. })
        ));
    }

    proptest! {
        #[test]
        fn brent_matches_number_theory(n in 0u64..5000, d in 1u64..5000) {
            let p = Potential::rational(n as i64, d as i64);
            let b = p.b().to_ratio();
            let bn = b.numer().try_into().unwrap();
            let bd = b.denom().try_into().unwrap();
            prop_assert_eq!(orbit_class_of_b(&p).unwrap(), number_theory_class(bn, bd));
        }

        #[test]
        fn periodic_iff_trace_flags(n in 0i64..300, d in 1i64..300) {
            let p = Potential::rational(n, d);
            let t = mcstar_trace(&p, 400).unwrap();
            match orbit_class_of_b(&p).unwrap() {
                OrbitClass::Periodic { period } => {
                    prop_assert_eq!(t.periodic_at, Some(period));
                    prop_assert_eq!(t.m_star_estimate, ExtendedReal::NegInfinity);
                }
                _ => {
                    prop_assert!(!t.is_periodic());
                    prop_assert!(t.partial_avg.iter().all(|a| a.is_finite()));
                }
            }
        }
    }
}
