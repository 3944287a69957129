use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Largest `n` accepted by [`enumerate_fnm`].
pub const MAX_FNM_N: u32 = 28;

/// Largest `epsilon` denominator for which the majorant is compared exactly
/// when the integer-exponent comparison is inconclusive.
const EXACT_ROOT_LIMIT: u64 = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct FnmCount {
    pub n: u32,
    pub m: u32,
    pub epsilon: String,
    pub count: u128,
    /// Count split by the number `k` of indices; `by_k[k - 1]`.
    pub by_k: Vec<u128>,
    /// `sum_{k <= floor(epsilon n)} C(n - 1, k - 1)`.
    pub binomial_sum: String,
    /// `log2` of `2^(2 epsilon n) * binomial_sum`.
    pub majorant_log2: f64,
    pub within_majorant: bool,
}

/// `floor(epsilon * n)` exactly.
fn floor_times(eps: &BigRational, n: u32) -> i64 {
    (eps * BigRational::from_integer(n.into()))
        .floor()
        .to_integer()
        .to_i64()
        .unwrap_or(i64::MAX)
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Whether `count <= 2^(2 epsilon n) * b`.
fn below_majorant(count: u128, b: &BigUint, eps: &BigRational, n: u32) -> bool {
    let count = BigUint::from(count);
    let e = BigRational::from_integer((2 * n).into()) * eps;
    // 2^floor(e) <= 2^e, so this direction is already conclusive.
    let floor = e.floor().to_integer().to_u64().unwrap_or(0);
    if count <= b << floor {
        return true;
    }
    // count^q <= 2^p * b^q with e = p / q.
    let (p, q) = (e.numer().to_u64(), e.denom().to_u64());
    match (p, q) {
        (Some(p), Some(q)) if q <= EXACT_ROOT_LIMIT => {
            let q = q as u32;
            count.pow(q) <= b.pow(q) << p
        }
        _ => false,
    }
}

fn validate(n: u32, m: u32, eps: &BigRational) -> Result<()> {
    if n == 0 || m == 0 || eps <= &BigRational::zero() {
        return Err(Error::PreconditionViolated(
            "need n, m >= 1 and epsilon > 0".into(),
        ));
    }
    if n > MAX_FNM_N {
        return Err(Error::SizeLimit {
            what: "n",
            value: n as u64,
            limit: MAX_FNM_N as u64,
        });
    }
    Ok(())
}

/// Counts `(i_1 < ... < i_k = n; j_1, ..., j_k = m)` with
/// `i_(l+1) - i_l >= j_l`, `k <= epsilon n` and `n - sum_(l<k) j_l <= epsilon n`.
///
/// Dynamic programming over `(i_l, l, j_1 + ... + j_(l-1))`; `m` does not
/// constrain anything but is part of the index.
pub fn enumerate_fnm(n: u32, m: u32, eps: &BigRational) -> Result<FnmCount> {
    validate(n, m, eps)?;
    let kmax = floor_times(eps, n).clamp(0, n as i64) as usize;
    let min_spacing = n as usize - kmax;
    let n = n as usize;
    // ways[l][i][s]: sequences of l indices ending at i with spacing sum s.
    let mut ways = vec![vec![vec![0u128; n]; n + 1]; kmax + 1];
    if kmax >= 1 {
        for i in 1..=n {
            ways[1][i][0] = 1;
        }
    }
    for l in 1..kmax {
        for i in 1..n {
            for s in 0..n {
                let w = ways[l][i][s];
                if w == 0 {
                    continue;
                }
                for next in i + 1..=n {
                    // s + j <= next - i_1 <= n - 1
                    for j in 1..=next - i {
                        ways[l + 1][next][s + j] += w;
                    }
                }
            }
        }
    }
    let by_k: Vec<u128> = (1..=n)
        .map(|k| {
            if k > kmax {
                0
            } else {
                ways[k][n][min_spacing.min(n)..].iter().sum()
            }
        })
        .collect();
    let count = by_k.iter().sum();
    let b: BigUint = (1..=kmax as u64).map(|k| binomial(n as u64 - 1, k - 1)).sum();
    let majorant_log2 = if b.is_zero() {
        f64::NEG_INFINITY
    } else {
        2.0 * eps.to_f64().unwrap_or(f64::NAN) * n as f64 + b.to_f64().unwrap_or(f64::INFINITY).log2()
    };
    Ok(FnmCount {
        n: n as u32,
        m,
        epsilon: eps.to_string(),
        count,
        by_k,
        binomial_sum: b.to_string(),
        majorant_log2,
        within_majorant: below_majorant(count, &b, eps, n as u32),
    })
}

/// Direct enumeration of the same tuples: every index subset, every spacing
/// vector with `1 <= j_l <= i_(l+1) - i_l`, and the two counting conditions
/// checked literally in rational arithmetic. Exponential; for `n <= 14`.
pub fn brute_force_fnm(n: u32, m: u32, eps: &BigRational) -> Result<u128> {
    validate(n, m, eps)?;
    if n > 14 {
        return Err(Error::SizeLimit {
            what: "n",
            value: n as u64,
            limit: 14,
        });
    }
    let en = eps * BigRational::from_integer(BigInt::from(n));
    let mut count = 0u128;
    // Every subset of {1, ..., n - 1} supplies i_1 < ... < i_(k-1).
    for mask in 0u32..1 << (n - 1) {
        let mut idx: Vec<u32> = (1..n).filter(|b| mask >> (b - 1) & 1 == 1).collect();
        idx.push(n);
        let k = idx.len();
        if BigRational::from_integer(BigInt::from(k)) > en {
            continue;
        }
        let mut js = vec![1u32; k - 1];
        loop {
            let sum: u32 = js.iter().sum();
            if BigRational::from_integer(BigInt::from(n as i64 - sum as i64)) <= en {
                count += 1;
            }
            // Odometer over j_l in 1..=i_(l+1) - i_l.
            let mut pos = 0;
            while pos < js.len() && js[pos] == idx[pos + 1] - idx[pos] {
                js[pos] = 1;
                pos += 1;
            }
            if pos == js.len() {
                break;
            }
            js[pos] += 1;
        }
    }
    Ok(count)
}
