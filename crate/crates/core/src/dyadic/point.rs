use super::fixed::BinaryFixed;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::LN_2;
use std::fmt;

/// Significant bits that must survive every doubling of a [`BinaryFixed`].
pub const MIN_SIGNIFICANT_BITS: usize = 53;

/// A point of the circle `R/Z`.
#[derive(Clone, Debug)]
pub enum TorusPoint {
    /// Reduced fraction with `0 <= num < den`.
    Rational(BigRational),
    BinaryFixed(BinaryFixed),
}

impl TorusPoint {
    pub fn zero() -> Self {
        TorusPoint::Rational(BigRational::zero())
    }

    /// `num/den mod 1`. Panics if `den` is zero.
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::from_ratio(BigRational::new(num.into(), den.into()))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        let frac = &r - r.floor();
        TorusPoint::Rational(frac)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, TorusPoint::Rational(_))
    }

    pub fn as_ratio(&self) -> Option<&BigRational> {
        match self {
            TorusPoint::Rational(r) => Some(r),
            TorusPoint::BinaryFixed(_) => None,
        }
    }

    /// Exact value as a fraction (binary fractions are dyadic rationals).
    pub fn to_ratio(&self) -> BigRational {
        match self {
            TorusPoint::Rational(r) => r.clone(),
            TorusPoint::BinaryFixed(b) => b.to_ratio(),
        }
    }

    /// `(num, den)` when both fit in a `u64`.
    pub fn small_parts(&self) -> Option<(u64, u64)> {
        let r = self.as_ratio()?;
        Some((r.numer().to_u64()?, r.denom().to_u64()?))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TorusPoint::Rational(r) => r.is_zero(),
            TorusPoint::BinaryFixed(b) => b.is_zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            TorusPoint::Rational(r) => r.to_f64().unwrap_or(0.0),
            TorusPoint::BinaryFixed(b) => b.to_f64(),
        }
    }

    /// Natural logarithm of the value in `[0, 1)`, robust to underflow.
    pub fn ln(&self) -> f64 {
        match self {
            TorusPoint::Rational(r) => {
                if r.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
                }
            }
            TorusPoint::BinaryFixed(b) => b.ln(),
        }
    }

    /// Leading 128 bits of the binary expansion, truncated.
    pub fn to_q128(&self) -> u128 {
        match self {
            TorusPoint::Rational(r) => {
                let scaled = (r.numer() << 128u32) / r.denom();
                scaled.to_u128().unwrap_or(u128::MAX)
            }
            TorusPoint::BinaryFixed(b) => b.to_q128(),
        }
    }

    /// Remaining precision budget in bits; `None` means exact forever.
    pub fn width(&self) -> Option<usize> {
        match self {
            TorusPoint::Rational(_) => None,
            TorusPoint::BinaryFixed(b) => Some(b.width()),
        }
    }

    /// One application of the doubling map. Unlike [`doubling_iterate`] this
    /// does not enforce the 53-bit budget; it only needs one bit to spare.
    pub fn double(&self) -> Self {
        match self {
            TorusPoint::Rational(_) => double_rational(self, 1),
            TorusPoint::BinaryFixed(b) => TorusPoint::BinaryFixed(b.shl(1)),
        }
    }
}

impl From<BinaryFixed> for TorusPoint {
    fn from(b: BinaryFixed) -> Self {
        TorusPoint::BinaryFixed(b)
    }
}

/// Equality of the denoted real numbers, across representations.
impl PartialEq for TorusPoint {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (TorusPoint::Rational(a), TorusPoint::Rational(b)) => a == b,
            _ => torus_distance(self, other).is_zero(),
        }
    }
}

impl Eq for TorusPoint {}

impl serde::Serialize for TorusPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusPoint::Rational(r) => write!(f, "{r}"),
            TorusPoint::BinaryFixed(b) => write!(f, "{:.17}[{} bits]", b.to_f64(), b.width()),
        }
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().map(f64::ln).unwrap_or(f64::NEG_INFINITY)
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap_or(1.0);
        top.ln() + shift as f64 * LN_2
    }
}

fn ratio_from_u128(num: u128, den: u128) -> BigRational {
    let g = num.gcd(&den);
    BigRational::new_raw(BigInt::from(num / g), BigInt::from(den / g))
}

/// Distance `min_n |x - y - n|`, returned as a point of `[0, 1/2]`. The result
/// is rational when both inputs are, and a binary fraction when both are.
pub fn torus_distance(x: &TorusPoint, y: &TorusPoint) -> TorusPoint {
    match (x, y) {
        (TorusPoint::BinaryFixed(a), TorusPoint::BinaryFixed(b)) => {
            TorusPoint::BinaryFixed(a.distance(b))
        }
        (TorusPoint::Rational(_), TorusPoint::Rational(_)) => {
            if let (Some((a, q)), Some((e, r))) = (x.small_parts(), y.small_parts()) {
                let (a, q, e, r) = (a as u128, q as u128, e as u128, r as u128);
                let den = q * r;
                let (ar, eq) = (a * r, e * q);
                let diff = if ar >= eq { ar - eq } else { den - (eq - ar) };
                let d = diff.min(den - diff);
                return TorusPoint::Rational(ratio_from_u128(d, den));
            }
            distance_big(&x.to_ratio(), &y.to_ratio())
        }
        _ => distance_big(&x.to_ratio(), &y.to_ratio()),
    }
}

fn distance_big(x: &BigRational, y: &BigRational) -> TorusPoint {
    let diff = x - y;
    let frac = &diff - diff.floor();
    let other = BigRational::one() - &frac;
    TorusPoint::Rational(if frac <= other { frac } else { other })
}

fn pow2_mod(n: u64, m: u128) -> u128 {
    let (mut base, mut exp, mut acc) = (2u128 % m, n, 1u128 % m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn double_rational(x: &TorusPoint, n: u64) -> TorusPoint {
    if let Some((a, q)) = x.small_parts() {
        let q = q as u128;
        let num = (a as u128) * pow2_mod(n, q) % q;
        return TorusPoint::Rational(ratio_from_u128(num, q));
    }
    let r = x.to_ratio();
    let den = r.denom().magnitude().clone();
    let num = r.numer().magnitude() * BigUint::from(2u32).modpow(&BigUint::from(n), &den) % &den;
    TorusPoint::Rational(BigRational::new(
        BigInt::from_biguint(Sign::Plus, num),
        BigInt::from_biguint(Sign::Plus, den),
    ))
}

/// `T^n x = 2^n x mod 1`, exactly.
///
/// Binary fractions must keep at least 53 significant bits after the shift.
pub fn doubling_iterate(x: &TorusPoint, n: u64) -> Result<TorusPoint> {
    match x {
        TorusPoint::Rational(_) => Ok(double_rational(x, n)),
        TorusPoint::BinaryFixed(b) => {
            let needed = n as usize + MIN_SIGNIFICANT_BITS;
            if b.width() < needed {
                return Err(Error::InsufficientPrecision {
                    needed,
                    available: b.width(),
                });
            }
            Ok(TorusPoint::BinaryFixed(b.shl(n as usize)))
        }
    }
}
