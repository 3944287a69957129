use super::intervals::M;
use crate::numeric::CompensatedSum;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct TailSum {
    /// Terms are `M 2^(n e)`; `e` exactly, as a fraction.
    pub exponent: String,
    /// `2^e`, the ratio of consecutive terms.
    pub ratio: f64,
    pub convergent: bool,
    pub partial_sum: f64,
}

/// `sum_{n = start..=end} M 2^n 2^(-(K + 1) n alpha)`. Convergence is decided
/// exactly: the series converges iff `alpha > 1/(K + 1)`.
pub fn tail_sum_yk(k: u32, alpha: &BigRational, start: u64, end: u64) -> TailSum {
    let e = BigRational::one() - BigRational::from_integer((k + 1).into()) * alpha;
    let ef = e.to_f64().unwrap_or(f64::NAN);
    let partial_sum = (start..=end)
        .map(|n| M as f64 * (n as f64 * ef).exp2())
        .collect::<CompensatedSum>()
        .value();
    TailSum {
        exponent: e.to_string(),
        ratio: ef.exp2(),
        convergent: e.is_negative(),
        partial_sum,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TailSumZ {
    /// `epsilon' + epsilon + epsilon log2 M`.
    pub threshold: f64,
    /// `delta - threshold`; terms in `n` decay like `2^(-rate n)`.
    pub rate: f64,
    pub convergent: bool,
    pub partial_sum: f64,
}

/// `sum_{n = start..=end} sum_{m = 1..=end} 2^(eps' n) M^(eps n) 2^(eps n) 2^(-delta (n + m))`
/// with the constant in front taken as 1.
pub fn tail_sum_z(eps: f64, eps_prime: f64, delta: f64, start: u64, end: u64) -> TailSumZ {
    let threshold = eps_prime + eps + eps * (M as f64).log2();
    let rate = delta - threshold;
    let m_sum: f64 = (1..=end).map(|m| (-delta * m as f64).exp2()).collect::<CompensatedSum>().value();
    let n_sum = (start..=end)
        .map(|n| (-rate * n as f64).exp2())
        .collect::<CompensatedSum>()
        .value();
    TailSumZ {
        threshold,
        rate,
        convergent: rate > 0.0,
        partial_sum: m_sum * n_sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn yk_examples() {
        let conv = tail_sum_yk(1, &r(3, 5), 1, 200);
        assert!(conv.convergent);
        assert_eq!(conv.exponent, "-1/5");
        assert!((conv.ratio - 2f64.powf(-0.2)).abs() < 1e-15);
        assert!(!tail_sum_yk(1, &r(2, 5), 1, 50).convergent);
        assert!(tail_sum_yk(3, &r(3, 10), 1, 50).convergent);
        // exactly at the threshold the terms are constant
        assert!(!tail_sum_yk(1, &r(1, 2), 1, 10).convergent);
    }

    #[test]
    fn yk_tails_shrink_geometrically() {
        let a = r(3, 5);
        let tails: Vec<f64> = (10..15).map(|s| tail_sum_yk(1, &a, s, 2000).partial_sum).collect();
        for w in tails.windows(2) {
            assert!((w[1] / w[0] - 2f64.powf(-0.2)).abs() < 1e-9);
        }
        // Below the threshold each added term is larger than the last.
        let grow: Vec<f64> = (10..15).map(|s| tail_sum_yk(1, &r(2, 5), 1, s).partial_sum).collect();
        assert!(grow.windows(3).all(|w| w[2] - w[1] > w[1] - w[0]));
    }

    #[test]
    fn z_threshold() {
        let (eps, epsp) = (0.01, 0.02);
        let th = epsp + eps + eps * 15f64.log2();
        let conv = tail_sum_z(eps, epsp, th + 0.1, 1, 400);
        assert!(conv.convergent && conv.partial_sum.is_finite());
        let later = tail_sum_z(eps, epsp, th + 0.1, 11, 400);
        assert!((later.partial_sum / conv.partial_sum - 2f64.powf(-1.0)).abs() < 1e-9);
        assert!(!tail_sum_z(eps, epsp, th - 0.01, 1, 400).convergent);
    }
}
