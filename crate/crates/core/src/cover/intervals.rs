use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Largest `i` or `j` accepted by [`compute_qij`].
pub const MAX_QIJ_INDEX: u32 = 20;

/// Deepest dyadic level used by the certificates.
pub const MAX_CERT_LEVEL: u32 = 22;

/// The constant bounding the number of level-`(i + j)` intervals per `J`.
pub const M: u64 = 15;

/// Sorted, disjoint half-open intervals `[a, b)` inside `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet {
    intervals: Vec<(BigRational, BigRational)>,
}

impl IntervalSet {
    /// Normalizes arbitrary intervals of `[0, 1]`: sorts, drops empty ones and
    /// merges overlapping or touching ones.
    pub fn new(mut raw: Vec<(BigRational, BigRational)>) -> Self {
        raw.retain(|(a, b)| a < b);
        raw.sort();
        let mut intervals: Vec<(BigRational, BigRational)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match intervals.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => intervals.push((a, b)),
            }
        }
        IntervalSet { intervals }
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|(a, b)| a <= x && x < b)
    }
}

fn ratio(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn check_ij(i: u32, j: u32, max_sum: u32) -> Result<()> {
    if i == 0 || j == 0 {
        return Err(Error::PreconditionViolated(format!("need i, j >= 1, got ({i}, {j})")));
    }
    if i + j > max_sum {
        return Err(Error::SizeLimit {
            what: "i + j",
            value: (i + j) as u64,
            limit: max_sum as u64,
        });
    }
    Ok(())
}

/// `Q_i^j = {x : d(T^i x, x) <= 2^-j}`, the union over `m` of the closed
/// intervals of radius `2^-j / (2^i - 1)` around `m / (2^i - 1)`.
///
/// Returned half-open; the endpoints have measure zero.
pub fn compute_qij(i: u32, j: u32) -> Result<IntervalSet> {
    if i > MAX_QIJ_INDEX || j > MAX_QIJ_INDEX {
        return Err(Error::SizeLimit {
            what: "max(i, j)",
            value: i.max(j) as u64,
            limit: MAX_QIJ_INDEX as u64,
        });
    }
    check_ij(i, j, 2 * MAX_QIJ_INDEX)?;
    let q = (1i128 << i) - 1;
    let den = q << j;
    let mut raw = Vec::new();
    for m in 0..q {
        let lo = (m << j) - 1;
        let hi = (m << j) + 1;
        if lo < 0 {
            raw.push((ratio(lo + den, den), BigRational::one()));
            raw.push((BigRational::zero(), ratio(hi.min(den), den)));
        } else if hi > den {
            raw.push((ratio(lo, den), BigRational::one()));
            raw.push((BigRational::zero(), ratio(hi - den, den)));
        } else {
            raw.push((ratio(lo, den), ratio(hi, den)));
        }
    }
    Ok(IntervalSet::new(raw))
}

/// `|Q_i^j| = min(1, 2^(1 - j))`.
pub fn qij_measure_closed_form(j: u32) -> BigRational {
    if j <= 1 {
        BigRational::one()
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (j - 1))
    }
}

/// Membership bitmap over the `2^level` dyadic intervals of one level.
#[derive(Clone, Debug)]
pub(crate) struct DyadicSet {
    level: u32,
    bits: Vec<u64>,
}

impl DyadicSet {
    fn empty(level: u32) -> Self {
        DyadicSet {
            level,
            bits: vec![0; (1usize << level).div_ceil(64)],
        }
    }

    fn insert(&mut self, k: u64) {
        self.bits[(k / 64) as usize] |= 1 << (k % 64);
    }

    pub(crate) fn contains(&self, k: u64) -> bool {
        self.bits[(k / 64) as usize] >> (k % 64) & 1 == 1
    }

    pub(crate) fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Members inside `[start, start + len)`.
    fn count_range(&self, start: u64, len: u64) -> u64 {
        (start..start + len).filter(|&k| self.contains(k)).count() as u64
    }
}

/// `hat Q_i^j`: the level-`(i + j)` dyadic intervals whose closures meet a
/// closed interval of `Q_i^j`.
pub(crate) fn hat_q(i: u32, j: u32) -> DyadicSet {
    let level = i + j;
    let size = 1i128 << level;
    let q = (1i128 << i) - 1;
    let mut set = DyadicSet::empty(level);
    for m in 0..q {
        // The interval around m/q spans [lo/q, hi/q] in units of 2^-level.
        let lo = ((m << j) - 1) << i;
        let hi = ((m << j) + 1) << i;
        let first = lo.div_euclid(q) + if lo.rem_euclid(q) == 0 { -1 } else { 0 };
        let last = hi.div_euclid(q);
        for k in first..=last {
            set.insert(k.rem_euclid(size) as u64);
        }
    }
    set
}

#[derive(Clone, Debug, Serialize)]
pub struct HatQCertificate {
    pub i: u32,
    pub j: u32,
    /// Largest number of level-`(i + j)` intervals inside one `J` of level `i`.
    pub max_per_j: u64,
    pub total_count: u64,
    #[serde(serialize_with = "crate::singularity::ser_ratio")]
    pub measure: BigRational,
    pub pass: bool,
}

/// Exhaustive check of the three bounds on `hat Q_i^j`.
pub fn certify_hat_q_bound(i: u32, j: u32) -> Result<HatQCertificate> {
    check_ij(i, j, MAX_CERT_LEVEL)?;
    let set = hat_q(i, j);
    let block = 1u64 << j;
    let max_per_j = (0..1u64 << i)
        .map(|b| set.count_range(b * block, block))
        .max()
        .unwrap_or(0);
    let total_count = set.count();
    let measure = BigRational::new(BigInt::from(total_count), BigInt::one() << (i + j));
    let pass = max_per_j <= M
        && total_count <= M << i
        && measure <= BigRational::new(BigInt::from(M), BigInt::one() << j);
    Ok(HatQCertificate {
        i,
        j,
        max_per_j,
        total_count,
        measure,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiCoverCertificate {
    pub i: Vec<u32>,
    pub j: Vec<u32>,
    pub count: u64,
    /// `M^k 2^(i_k - j_1 - ... - j_(k-1))`.
    pub bound: u128,
    pub pass: bool,
}

/// Counts the level-`(i_k + j_k)` intervals of the intersection of the
/// `hat Q_(i_l)^(j_l)` and compares with the covering bound.
pub fn certify_multi_cover(i: &[u32], j: &[u32]) -> Result<MultiCoverCertificate> {
    let k = i.len();
    if k == 0 || j.len() != k || i.contains(&0) || j.contains(&0) {
        return Err(Error::PreconditionViolated(
            "need equally long, nonempty index vectors of positive integers".into(),
        ));
    }
    for l in 0..k - 1 {
        if i[l + 1] <= i[l] || i[l + 1] - i[l] < j[l] {
            return Err(Error::PreconditionViolated(format!(
                "spacing fails at l = {}: i = {}, {}; j = {}",
                l + 1,
                i[l],
                i[l + 1],
                j[l]
            )));
        }
    }
    check_ij(i[k - 1], j[k - 1], MAX_CERT_LEVEL)?;
    let sets: Vec<DyadicSet> = (0..k).map(|l| hat_q(i[l], j[l])).collect();
    let last = &sets[k - 1];
    let count = (0..1u64 << last.level)
        .filter(|&x| sets.iter().all(|s| s.contains(x >> (last.level - s.level))))
        .count() as u64;
    let spacing: u32 = j[..k - 1].iter().sum();
    let bound = (M as u128).pow(k as u32) << (i[k - 1] - spacing);
    Ok(MultiCoverCertificate {
        i: i.to_vec(),
        j: j.to_vec(),
        count,
        bound,
        pass: (count as u128) <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn qij_examples() {
        let full = compute_qij(1, 1).unwrap();
        assert_eq!(full.intervals(), &[(r(0, 1), r(1, 1))]);
        let q12 = compute_qij(1, 2).unwrap();
        assert_eq!(q12.intervals(), &[(r(0, 1), r(1, 4)), (r(3, 4), r(1, 1))]);
        assert_eq!(q12.measure(), r(1, 2));
        let q22 = compute_qij(2, 2).unwrap();
        assert_eq!(q22.len(), 4); // the interval around 0 wraps
        assert_eq!(q22.measure(), r(1, 2));
        assert!(q22.contains(&r(1, 3)) && q22.contains(&r(2, 5)) && !q22.contains(&r(5, 12)) && !q22.contains(&r(1, 2)));
    }

    #[test]
    fn measure_closed_form() {
        for i in 1..=12 {
            for j in 1..=12 {
                assert_eq!(compute_qij(i, j).unwrap().measure(), qij_measure_closed_form(j), "({i},{j})");
            }
        }
    }

    #[test]
    fn hat_q_contains_q() {
        // Every point of Q lies in a member of hat Q, and hat Q is not much larger.
        for (i, j) in [(1, 1), (1, 3), (2, 2), (3, 4), (5, 2), (4, 7)] {
            let q = compute_qij(i, j).unwrap();
            let hat = hat_q(i, j);
            let level = i + j;
            let scale = BigRational::from_integer(BigInt::one() << level);
            for (a, b) in q.intervals() {
                for t in 0..=8 {
                    let x = a + (b - a) * r(t, 8);
                    let k = (&x * &scale).floor().to_integer() % (BigInt::one() << level);
                    assert!(hat.contains(k.try_into().unwrap()), "({i},{j}) at {x}");
                }
            }
            let hat_measure = BigRational::new(BigInt::from(hat.count()), BigInt::one() << level);
            let slack = BigRational::new(BigInt::from(2 * q.len()), BigInt::one() << level);
            assert!(hat_measure <= q.measure() + slack);
        }
    }

    #[test]
    fn hat_q_small_cases() {
        let c = certify_hat_q_bound(1, 1).unwrap();
        assert!(c.max_per_j <= 2 && c.pass);
        assert!(certify_hat_q_bound(5, 5).unwrap().pass);
        assert!(matches!(certify_hat_q_bound(12, 11), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn multi_cover_examples() {
        let single = certify_multi_cover(&[5], &[4]).unwrap();
        assert_eq!(single.count, certify_hat_q_bound(5, 4).unwrap().total_count);
        let two = certify_multi_cover(&[3, 6], &[3, 3]).unwrap();
        assert_eq!(two.bound, 1800);
        assert!(two.pass);
        let three = certify_multi_cover(&[2, 4, 8], &[2, 4, 2]).unwrap();
        assert_eq!(three.bound, 13500);
        assert!(three.pass);
        assert!(matches!(
            certify_multi_cover(&[3, 4], &[3, 3]),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
