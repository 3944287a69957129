//! Periodic orbits of the doubling map and the dynamical extremes of `f_c`.
//!
//! A periodic orbit of least period `p` is a primitive binary necklace; its
//! points are `r / (2^p - 1)` where `r` runs over the rotations of the word read
//! as a binary integer. The scan computes every orbit average up to a maximal
//! period and reports the extreme values.

use crate::dyadic::{ExtendedReal, Potential, RationalEvaluator, TorusPoint};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::fmt;

/// Largest period accepted by [`enumerate_orbits`].
pub const MAX_PERIOD_LIMIT: u32 = 24;

/// Relative tolerance for deciding that two averages are tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicOrbit {
    /// The lexicographically least rotation, read as a binary integer.
    bits: u64,
    period: u32,
}

impl PeriodicOrbit {
    /// Canonical orbit of a word of `0`/`1` characters; `None` if the word is
    /// empty, too long, not binary, or a proper power. `"1"` maps to `"0"`.
    pub fn from_word(word: &str) -> Option<Self> {
        let p = word.len() as u32;
        if p == 0 || p > MAX_PERIOD_LIMIT || !word.bytes().all(|c| c == b'0' || c == b'1') {
            return None;
        }
        if word == "1" {
            return Some(PeriodicOrbit { bits: 0, period: 1 });
        }
        let bits = u64::from_str_radix(word, 2).ok()?;
        let raw = PeriodicOrbit { bits, period: p };
        let rotations: Vec<u64> = (0..p).map(|i| raw.rotation(i)).collect();
        if (1..p).any(|i| rotations[i as usize] == bits) {
            return None;
        }
        let min = *rotations.iter().min()?;
        Some(PeriodicOrbit { bits: min, period: p })
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn word(&self) -> String {
        format!("{:0width$b}", self.bits, width = self.period as usize)
    }

    /// `2^p - 1`, the common denominator of the orbit points.
    pub fn denominator(&self) -> u64 {
        (1u64 << self.period) - 1
    }

    /// Numerator of point `i`: the word rotated left by `i` places.
    pub fn rotation(&self, i: u32) -> u64 {
        let p = self.period;
        let i = i % p;
        if i == 0 {
            return self.bits;
        }
        let mask = (1u64 << p) - 1;
        ((self.bits << i) | (self.bits >> (p - i))) & mask
    }

    pub fn point(&self, i: u32) -> TorusPoint {
        TorusPoint::rational(self.rotation(i), self.denominator())
    }

    pub fn points(&self) -> Vec<TorusPoint> {
        (0..self.period).map(|i| self.point(i)).collect()
    }
}

impl fmt::Display for PeriodicOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl Serialize for PeriodicOrbit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PeriodicOrbit", 2)?;
        st.serialize_field("word", &self.word())?;
        st.serialize_field("period", &self.period)?;
        st.end()
    }
}

/// Lyndon words of length at most `n` in lexicographic order (Duval).
fn lyndon_words(n: u32) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        let bits = w.iter().fold(0u64, |acc, &d| (acc << 1) | d as u64);
        out.push((bits, w.len() as u32));
        let m = w.len();
        while w.len() < n as usize {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Every periodic orbit of least period at most `max_period`, once each,
/// ordered by period then word. The all-ones word is the fixed point `0` and
/// is not listed separately.
pub fn enumerate_orbits(max_period: u32) -> Result<Vec<PeriodicOrbit>> {
    if max_period == 0 {
        return Err(Error::PreconditionViolated("maxPeriod must be positive".into()));
    }
    if max_period > MAX_PERIOD_LIMIT {
        return Err(Error::SizeLimit {
            what: "maxPeriod",
            value: max_period as u64,
            limit: MAX_PERIOD_LIMIT as u64,
        });
    }
    let mut orbits: Vec<PeriodicOrbit> = lyndon_words(max_period)
        .into_iter()
        .filter(|&(bits, p)| !(p == 1 && bits == 1))
        .map(|(bits, period)| PeriodicOrbit { bits, period })
        .collect();
    orbits.sort_by_key(|o| (o.period, o.bits));
    Ok(orbits)
}

fn average_with(eval: &RationalEvaluator, o: &PeriodicOrbit) -> ExtendedReal {
    let den = o.denominator();
    let mut acc = CompensatedSum::new();
    for i in 0..o.period {
        match eval.eval(o.rotation(i), den) {
            ExtendedReal::Finite(v) => acc.add(v),
            ExtendedReal::NegInfinity => return ExtendedReal::NegInfinity,
        }
    }
    ExtendedReal::Finite(acc.value() / o.period as f64)
}

/// `(1/p) sum_i f_c(points[i])`; `-inf` iff `b` lies on the orbit.
pub fn orbit_average(p: &Potential, o: &PeriodicOrbit) -> ExtendedReal {
    average_with(&RationalEvaluator::new(p), o)
}

/// Averages of all orbits up to `max_period`, in enumeration order.
pub fn orbit_averages(p: &Potential, max_period: u32) -> Result<Vec<(PeriodicOrbit, ExtendedReal)>> {
    let orbits = enumerate_orbits(max_period)?;
    let eval = RationalEvaluator::new(p);
    Ok(orbits
        .into_par_iter()
        .map(|o| {
            let avg = average_with(&eval, &o);
            (o, avg)
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremesReport {
    pub alpha: ExtendedReal,
    pub beta: ExtendedReal,
    pub argmin: PeriodicOrbit,
    pub argmax: PeriodicOrbit,
    pub max_period: u32,
    pub orbit_count: usize,
    pub singular_orbits: Vec<PeriodicOrbit>,
}

/// Compares `candidate` with `best`, treating values within the relative tie
/// tolerance as equal.
fn tolerant_cmp(candidate: ExtendedReal, best: ExtendedReal) -> Ordering {
    match (candidate, best) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
            let tol = TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0);
            if (a - b).abs() <= tol {
                Ordering::Equal
            } else {
                a.total_cmp(&b)
            }
        }
        _ => candidate.cmp(&best),
    }
}

/// Reduces precomputed averages (in enumeration order) to the extremes.
/// Earlier orbits win ties, which realizes "shortest period, then least word".
pub fn extremes_from_averages(
    averages: &[(PeriodicOrbit, ExtendedReal)],
    max_period: u32,
) -> Result<ExtremesReport> {
    let (first, first_avg) = averages
        .first()
        .ok_or_else(|| Error::PreconditionViolated("no orbits to scan".into()))?;
    let mut min = (first, *first_avg);
    let mut max: Option<(&PeriodicOrbit, ExtendedReal)> = None;
    let mut singular = Vec::new();
    for (o, avg) in averages {
        if tolerant_cmp(*avg, min.1) == Ordering::Less {
            min = (o, *avg);
        }
        if avg.is_finite() {
            if max.is_none_or(|m| tolerant_cmp(*avg, m.1) == Ordering::Greater) {
                max = Some((o, *avg));
            }
        } else {
            singular.push(o.clone());
        }
    }
    let max = max.unwrap_or((first, *first_avg));
    Ok(ExtremesReport {
        alpha: min.1,
        beta: max.1,
        argmin: min.0.clone(),
        argmax: max.0.clone(),
        max_period,
        orbit_count: averages.len(),
        singular_orbits: singular,
    })
}

/// Exhaustive scan of all orbits with period at most `max_period`.
///
/// `alpha_P >= alpha(c)` and `beta_P <= beta(c)`; no extrapolation is made.
pub fn extremes_scan(p: &Potential, max_period: u32) -> Result<ExtremesReport> {
    extremes_from_averages(&orbit_averages(p, max_period)?, max_period)
}

/// `1 + beta / log 2` for a finite `beta`.
pub fn gelfond_from_beta(beta: ExtendedReal) -> Result<f64> {
    beta.finite()
        .map(|b| 1.0 + b / LN_2)
        .ok_or(Error::Undefined("Gelfond exponent (beta is -inf)"))
}

/// Lower bound `1 + beta_P / log 2` for the Gelfond exponent.
pub fn gelfond_exponent(p: &Potential, max_period: u32) -> Result<f64> {
    gelfond_from_beta(extremes_scan(p, max_period)?.beta)
}

/// The shortest closed arc containing an orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcCheck {
    /// True iff the arc has length at most 1/2.
    pub within_semicircle: bool,
    /// Counter-clockwise start of the arc.
    pub start: TorusPoint,
    pub length: BigRational,
}

/// Minimal enclosing arc of an orbit, exact.
pub fn minimal_arc(o: &PeriodicOrbit) -> ArcCheck {
    let m = o.denominator();
    let mut r: Vec<u64> = (0..o.period).map(|i| o.rotation(i)).collect();
    r.sort_unstable();
    // The largest gap between cyclically consecutive points is left out.
    let mut best_gap = r[0] + m - r[r.len() - 1];
    let mut start = r[0];
    for w in r.windows(2) {
        if w[1] - w[0] > best_gap {
            best_gap = w[1] - w[0];
            start = w[1];
        }
    }
    let length = BigRational::new((m - best_gap).into(), m.into());
    ArcCheck {
        within_semicircle: length <= BigRational::new(1.into(), 2.into()),
        start: TorusPoint::rational(start, m),
        length,
    }
}

/// Checks that the maximizing orbit lies in a closed semicircle.
pub fn sturmian_arc_check(report: &ExtremesReport) -> ArcCheck {
    minimal_arc(&report.argmax)
}

/// `max_x S_n f_c(x) - n beta` over the grid `{k/q : 0 <= k < q}`, where `q`
/// is the largest odd number not exceeding `grid_size`. Odd `q` keeps the grid
/// off the dyadic rationals, which all collapse onto `0`.
///
/// Returns `-inf` only if every grid point is pre-singular within `n` steps.
pub fn max_defect_bound(p: &Potential, n: u32, grid_size: u64, beta: f64) -> Result<ExtendedReal> {
    if n == 0 || grid_size == 0 {
        return Err(Error::PreconditionViolated("n and gridSize must be positive".into()));
    }
    let q = if grid_size % 2 == 1 { grid_size } else { grid_size - 1 };
    let eval = RationalEvaluator::new(p);
    let best = (0..q)
        .into_par_iter()
        .map(|k| {
            let mut acc = CompensatedSum::new();
            let mut x = k;
            for _ in 0..n {
                match eval.eval(x, q) {
                    ExtendedReal::Finite(v) => acc.add(v),
                    ExtendedReal::NegInfinity => return ExtendedReal::NegInfinity,
                }
                x = (2 * x) % q;
            }
            ExtendedReal::Finite(acc.value() - n as f64 * beta)
        })
        .max()
        .unwrap_or(ExtendedReal::NegInfinity);
    Ok(best)
}
