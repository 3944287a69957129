use super::pressure::PressureCurve;
use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::LN_2;

/// Boundary secants below this magnitude count as flat.
pub const FLAT_SLOPE: f64 = 1e-9;

/// Boundary secants steeper than this toward the boundary count as unbounded.
pub const STEEP_SLOPE: f64 = 1e-6;

/// Value of `inf_t (p(t) - t alpha)` over a sampled curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Conjugate {
    Finite { lower: f64, upper: f64 },
    MinusInfinity,
}

impl Conjugate {
    pub fn midpoint(&self) -> f64 {
        match self {
            Conjugate::Finite { lower, upper } => (lower + upper) / 2.0,
            Conjugate::MinusInfinity => f64::NEG_INFINITY,
        }
    }
}

/// Discrete Legendre-Fenchel transform with bracket propagation.
///
/// When the minimum sits at an end of the grid the last secant there decides:
/// flat means the minimum is finite, still descending toward the end means
/// `-inf`, anything in between is [`Error::GridTooNarrow`].
pub fn legendre_transform(curve: &PressureCurve, alpha: f64) -> Result<Conjugate> {
    let s = &curve.samples;
    if s.len() < 3 {
        return Err(Error::PreconditionViolated(format!(
            "a Legendre transform needs at least 3 samples, got {}",
            s.len()
        )));
    }
    let lower = s.iter().map(|x| x.lower - x.t * alpha).fold(f64::INFINITY, f64::min);
    let upper = s.iter().map(|x| x.upper - x.t * alpha).fold(f64::INFINITY, f64::min);
    let g: Vec<f64> = s.iter().map(|x| (x.lower + x.upper) / 2.0 - x.t * alpha).collect();
    let min = g.iter().copied().fold(f64::INFINITY, f64::min);
    let arg = g.iter().position(|&v| v == min).unwrap_or(0);
    let last = s.len() - 1;
    let verdict = if arg == 0 {
        Some((g[1] - g[0]) / (s[1].t - s[0].t))
    } else if arg == last {
        // Sign flipped so that a positive value means descending toward the end.
        Some(-(g[last] - g[last - 1]) / (s[last].t - s[last - 1].t))
    } else {
        None
    };
    match verdict {
        Some(slope) if slope.abs() < FLAT_SLOPE => {}
        Some(slope) if slope >= STEEP_SLOPE => return Ok(Conjugate::MinusInfinity),
        Some(_) => return Err(Error::GridTooNarrow { alpha }),
        None => {}
    }
    Ok(Conjugate::Finite {
        lower,
        upper: upper.max(lower),
    })
}

/// Pressure at `c = 0`: `max((1 - t) log 2, 0)`.
pub fn c_zero_reference(t: f64) -> f64 {
    ((1.0 - t) * LN_2).max(0.0)
}

/// Its conjugate: `|alpha|` on `[-log 2, 0]`, `-inf` elsewhere.
pub fn c_zero_spectrum(alpha: f64) -> f64 {
    if (-LN_2..=0.0).contains(&alpha) {
        alpha.abs()
    } else {
        f64::NEG_INFINITY
    }
}
