use crate::dyadic::{Potential, TorusPoint};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

fn frac(x: BigRational) -> BigRational {
    &x - x.floor()
}

/// Representative of `y - b` in `(-1/2, 1/2]`.
fn signed_offset(y: &BigRational, b: &BigRational) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    let mut d = frac(y - b);
    if d > half {
        d -= BigRational::one();
    }
    d
}

/// `(delta, delta')`-good times of `x` up to `horizon`.
///
/// `n` is good when `d(T^n x, b) < delta'` and, writing `e` for the signed
/// offset of `T^n x` from `b` and `z = x - e 2^-n`, the interval of half-length
/// `delta 2^(j-n)` around `T^j z` misses `b` for every `0 <= j < n`. That
/// interval is `T^j` of the level-`n` pullback of `B(b, delta)` through `x`.
pub fn good_time_detector(
    p: &Potential,
    x: &TorusPoint,
    delta: &BigRational,
    delta_prime: &BigRational,
    horizon: u64,
) -> Result<Vec<u64>> {
    let half = BigRational::new(1.into(), 2.into());
    if !(delta_prime.is_positive() && delta_prime < delta && *delta < half) {
        return Err(Error::PreconditionViolated(
            "need 0 < delta' < delta < 1/2".into(),
        ));
    }
    let x = x.as_ratio().ok_or(Error::NonRationalInput)?.clone();
    let b = p.b().as_ratio().ok_or(Error::NonRationalInput)?.clone();
    let two = BigRational::from_integer(2.into());

    let mut orbit = vec![x];
    let mut good = Vec::new();
    for n in 1..=horizon {
        let next = frac(orbit.last().expect("nonempty") * &two);
        let e = signed_offset(&next, &b);
        orbit.push(next);
        if e.abs() >= *delta_prime {
            continue;
        }
        // T^j z = T^j x - e 2^(j-n); the ball radius scales the same way.
        let mut scale = BigRational::new(BigInt::one(), BigInt::one() << n);
        let mut clear = true;
        for y in &orbit[..n as usize] {
            let centre = signed_offset(y, &b) - &e * &scale;
            if centre.abs() < delta * &scale {
                clear = false;
                break;
            }
            scale *= &two;
        }
        if clear {
            good.push(n);
        }
    }
    Ok(good)
}
