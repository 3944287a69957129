//! Parsers for the textual knobs: the parameter `c`, rationals, and grids.

use crate::error::{CliError, CliResult};
use doubling_spectrum::dyadic::{BinaryFixed, TorusPoint};
use doubling_spectrum::thermo::standard_t_grid;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Exact rational from `"p/q"`, an integer, or a decimal such as `"-0.125"`.
pub fn parse_rational(text: &str) -> CliResult<BigRational> {
    let t = text.trim();
    let bad = || usage(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(usage(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !digits_ok(int) || !digits_ok(frac) {
        return Err(bad());
    }
    let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// A point of `[0, 1)`: `"p/q"`, a decimal, or `"random"`.
///
/// `"random"` draws `width` bits from ChaCha8 seeded with `seed`.
pub fn parse_c(text: &str, width: Option<usize>, seed: u64) -> CliResult<TorusPoint> {
    if text.trim() == "random" {
        let width = width.ok_or_else(|| usage("\"random\" needs --width"))?;
        if width == 0 {
            return Err(usage("--width must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(TorusPoint::BinaryFixed(BinaryFixed::random(&mut rng, width)));
    }
    let r = parse_rational(text)?;
    if r.is_negative() || r >= BigRational::one() {
        return Err(usage(format!("{text} is not in [0, 1)")));
    }
    Ok(TorusPoint::Rational(r))
}

/// A rational in the open interval `(0, 1/2)`.
pub fn parse_radius(text: &str) -> CliResult<BigRational> {
    let r = parse_rational(text)?;
    if !r.is_positive() || r >= BigRational::new(1.into(), 2.into()) {
        return Err(usage(format!("{text} is not in (0, 1/2)")));
    }
    Ok(r)
}

fn parse_f64(text: &str) -> CliResult<f64> {
    let x: f64 = text
        .trim()
        .parse()
        .map_err(|_| usage(format!("not a number: {text:?}")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("not a finite number: {text:?}")))
    }
}

/// `"a:b:step"` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (parse_f64(a)?, parse_f64(b)?, parse_f64(step)?);
            if step <= 0.0 || b < a {
                return Err(usage(format!("bad range {text:?}: need a <= b and step > 0")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(usage(format!("range {text:?} has too many points")));
            }
            (0..=n).map(|i| a + i as f64 * step).collect()
        }
        [_] => text.split(',').map(parse_f64).collect::<CliResult<Vec<_>>>()?,
        _ => return Err(usage(format!("bad grid {text:?}"))),
    };
    if grid.is_empty() {
        return Err(usage("empty grid"));
    }
    Ok(grid)
}

/// As [`parse_grid`], with `"standard"` naming the default pressure grid.
pub fn parse_t_grid(text: &str) -> CliResult<Vec<f64>> {
    if text.trim() == "standard" {
        Ok(standard_t_grid())
    } else {
        parse_grid(text)
    }
}

/// Comma-separated rationals in `(0, 1/2)`.
pub fn parse_radius_list(text: &str) -> CliResult<Vec<BigRational>> {
    text.split(',').map(parse_radius).collect()
}

/// Comma-separated positive integers.
pub fn parse_index_list(text: &str) -> CliResult<Vec<u32>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| usage(format!("not a positive integer: {s:?}")))
        })
        .collect()
}
