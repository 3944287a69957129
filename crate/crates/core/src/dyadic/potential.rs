use super::fixed::BinaryFixed;
use super::point::{torus_distance, TorusPoint, MIN_SIGNIFICANT_BITS};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, DoubleDouble};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::ops::Add;
use std::sync::OnceLock;

/// Largest `N` accepted by [`sigma_direct`].
pub const SIGMA_DIRECT_LIMIT: u64 = 1 << 24;

/// A real number or `-inf`. Finite values are never NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    NegInfinity,
}

impl ExtendedReal {
    /// Maps `-inf` to the sentinel. Panics on NaN or `+inf`.
    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan() && x != f64::INFINITY, "not an extended real: {x}");
        if x == f64::NEG_INFINITY {
            ExtendedReal::NegInfinity
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::NegInfinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::NEG_INFINITY)
    }

    /// Division by a positive count.
    pub fn div(self, n: f64) -> Self {
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x / n),
            ExtendedReal::NegInfinity => ExtendedReal::NegInfinity,
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::NegInfinity,
        }
    }
}

impl Eq for ExtendedReal {}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedReal::NegInfinity, ExtendedReal::NegInfinity) => Ordering::Equal,
            (ExtendedReal::NegInfinity, _) => Ordering::Less,
            (_, ExtendedReal::NegInfinity) => Ordering::Greater,
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.total_cmp(b),
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::NegInfinity => f.write_str("-inf"),
        }
    }
}

/// Serialized as a number, or the string `"-inf"`.
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => s.serialize_f64(*x),
            ExtendedReal::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

/// The potential `f_c(x) = log|cos pi(x + c)| = log|sin pi(x - b)|`, `b = 1/2 - c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    c: TorusPoint,
}

impl Potential {
    pub fn new(c: TorusPoint) -> Self {
        Potential { c }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::new(TorusPoint::rational(num, den))
    }

    pub fn c(&self) -> &TorusPoint {
        &self.c
    }

    /// The singular point `1/2 - c mod 1`, recomputed on every call.
    pub fn b(&self) -> TorusPoint {
        match &self.c {
            TorusPoint::Rational(c) => {
                let half = BigRational::new(One::one(), 2.into());
                TorusPoint::from_ratio(half - c)
            }
            TorusPoint::BinaryFixed(c) => {
                TorusPoint::BinaryFixed(BinaryFixed::half(c.width()).sub_mod1(c))
            }
        }
    }
}

/// `log sin(pi d)` for a circle distance `d` in `(0, 1/2]`.
pub(crate) fn log_sin_pi_distance(d: &TorusPoint) -> f64 {
    let df = d.to_f64();
    if df > 1e-300 {
        (PI * df).sin().ln()
    } else {
        PI.ln() + d.ln()
    }
}

fn eval_with_b(b: &TorusPoint, x: &TorusPoint) -> ExtendedReal {
    let d = torus_distance(x, b);
    if d.is_zero() {
        ExtendedReal::NegInfinity
    } else {
        ExtendedReal::Finite(log_sin_pi_distance(&d))
    }
}

/// Evaluates `f_c` at many rationals `num/den` with small denominators.
///
/// When `b` is a small rational the distance is computed in exact `u128`
/// arithmetic; otherwise this falls back to the general path.
pub(crate) enum RationalEvaluator {
    Small { a: u128, q: u128 },
    General(TorusPoint),
}

impl RationalEvaluator {
    pub(crate) fn new(p: &Potential) -> Self {
        let b = p.b();
        match b.small_parts() {
            Some((a, q)) => RationalEvaluator::Small {
                a: a as u128,
                q: q as u128,
            },
            None => RationalEvaluator::General(b),
        }
    }

    /// `f_c(num/den)` for `num < den < 2^64`.
    pub(crate) fn eval(&self, num: u64, den: u64) -> ExtendedReal {
        match self {
            RationalEvaluator::Small { a, q } => {
                let (num, den) = (num as u128, den as u128);
                let full = den * q;
                let (x, y) = (num * q, a * den);
                let diff = if x >= y { x - y } else { full - (y - x) };
                let d = diff.min(full - diff);
                if d == 0 {
                    ExtendedReal::NegInfinity
                } else {
                    ExtendedReal::Finite((PI * (d as f64 / full as f64)).sin().ln())
                }
            }
            RationalEvaluator::General(b) => eval_with_b(b, &TorusPoint::rational(num, den)),
        }
    }
}

/// `f_c(x)`, with `-inf` exactly when `x = b`.
pub fn potential_eval(p: &Potential, x: &TorusPoint) -> ExtendedReal {
    eval_with_b(&p.b(), x)
}

fn check_budget(x: &TorusPoint, steps: u64) -> Result<()> {
    if let Some(width) = x.width() {
        let needed = steps as usize + MIN_SIGNIFICANT_BITS;
        if width < needed {
            return Err(Error::InsufficientPrecision {
                needed,
                available: width,
            });
        }
    }
    Ok(())
}

/// Calls `visit(k, f_c(T^k x))` for `k < n`, stopping early if it returns false.
pub(crate) fn for_each_term(
    p: &Potential,
    x: &TorusPoint,
    n: u64,
    mut visit: impl FnMut(u64, ExtendedReal) -> bool,
) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    check_budget(x, n - 1)?;
    let b = p.b();
    let mut y = x.clone();
    for k in 0..n {
        if !visit(k, eval_with_b(&b, &y)) {
            break;
        }
        if k + 1 < n {
            y = y.double();
        }
    }
    Ok(())
}

/// `S_n f_c(x) = sum_{k<n} f_c(T^k x)`.
pub fn birkhoff_sum(p: &Potential, x: &TorusPoint, n: u64) -> Result<ExtendedReal> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let mut acc = CompensatedSum::new();
    let mut singular = false;
    for_each_term(p, x, n, |_, v| match v {
        ExtendedReal::Finite(v) => {
            acc.add(v);
            true
        }
        ExtendedReal::NegInfinity => {
            singular = true;
            false
        }
    })?;
    Ok(if singular {
        ExtendedReal::NegInfinity
    } else {
        ExtendedReal::Finite(acc.value())
    })
}

/// `|sigma_{2^n}(x)| = 2^n prod_{k<n} |cos pi(2^k x + c)|`.
pub fn sigma_modulus(p: &Potential, x: &TorusPoint, n: u64) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    Ok(match birkhoff_sum(p, x, n)? {
        ExtendedReal::Finite(s) => (n as f64 * LN_2 + s).exp(),
        ExtendedReal::NegInfinity => 0.0,
    })
}

/// Bits of the phase that select a twiddle factor.
const TWIDDLE_BITS: u32 = 8;

/// `exp(2 pi i k / 256)` in double-double, by repeated multiplication.
fn twiddles() -> &'static [(DoubleDouble, DoubleDouble)] {
    static TABLE: OnceLock<Vec<(DoubleDouble, DoubleDouble)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 1usize << TWIDDLE_BITS;
        let step = DoubleDouble::TWO_PI.mul_f64(1.0 / n as f64).cos_sin_small();
        let mut table = Vec::with_capacity(n);
        let mut z = (DoubleDouble::ONE, DoubleDouble::ZERO);
        for _ in 0..n {
            table.push(z);
            z = (
                z.0.mul(step.0).sub(z.1.mul(step.1)),
                z.0.mul(step.1).add(z.1.mul(step.0)),
            );
        }
        table
    })
}

/// `exp(2 pi i phase / 2^128)` in double-double.
fn cis_q128(phase: u128) -> (DoubleDouble, DoubleDouble) {
    let shift = 128 - TWIDDLE_BITS;
    let (wc, ws) = twiddles()[(phase >> shift) as usize];
    let rest = DoubleDouble::from_u128_scaled(phase & ((1u128 << shift) - 1), 128);
    let (c, s) = DoubleDouble::TWO_PI.mul(rest).cos_sin_small();
    (wc.mul(c).sub(ws.mul(s)), wc.mul(s).add(ws.mul(c)))
}

/// `sum_{m<N} exp(2 pi i (c s_2(m) + m x))`, summed term by term.
///
/// Phases are accumulated modulo 1 in 128-bit fixed point; each term and the
/// running sums are kept in double-double, so sums that cancel to far below
/// one are still resolved to many digits.
pub fn sigma_direct(p: &Potential, x: &TorusPoint, n: u64) -> Result<Complex64> {
    if n > SIGMA_DIRECT_LIMIT {
        return Err(Error::SizeLimit {
            what: "N",
            value: n,
            limit: SIGMA_DIRECT_LIMIT,
        });
    }
    let x128 = x.to_q128();
    let c128 = p.c().to_q128();
    let mut re = DoubleDouble::ZERO;
    let mut im = DoubleDouble::ZERO;
    for m in 0..n {
        let phase = (m as u128)
            .wrapping_mul(x128)
            .wrapping_add((m.count_ones() as u128).wrapping_mul(c128));
        let (c, s) = cis_q128(phase);
        re = re.add(c);
        im = im.add(s);
    }
    Ok(Complex64::new(re.to_f64(), im.to_f64()))
}
