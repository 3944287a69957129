//! Small floating-point helpers shared across modules.

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`, about 106 bits.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> DoubleDouble {
    let s = a + b;
    DoubleDouble { hi: s, lo: b - (s - a) }
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };
    pub const TWO_PI: DoubleDouble = DoubleDouble {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// `x * 2^-shift`, exact up to about 2^-106 relative.
    pub fn from_u128_scaled(x: u128, shift: i32) -> Self {
        let hi = x as f64;
        let rest = x as i128 - hi as u128 as i128;
        let scale = 2f64.powi(-shift);
        quick_two_sum(hi * scale, rest as f64 * scale)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }

    pub fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        quick_two_sum(p, e)
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p) + self.lo * x;
        quick_two_sum(p, e)
    }

    /// Division by a double, refined twice.
    pub fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        let r = self.sub(DoubleDouble::from_f64(x).mul_f64(q1));
        let q2 = r.hi / x;
        let r = r.sub(DoubleDouble::from_f64(x).mul_f64(q2));
        let q3 = r.hi / x;
        quick_two_sum(q1, q2).add(DoubleDouble::from_f64(q3))
    }

    /// `(cos a, sin a)` by Taylor series; accurate for `|a| <= 0.03`.
    pub fn cos_sin_small(self) -> (Self, Self) {
        let a2 = self.mul(self);
        // Terms through a^17 / 17!, below 2^-130 for |a| <= 0.03.
        let mut cos = Self::ONE;
        let mut sin = Self::ONE;
        for k in (1..=8u32).rev() {
            let n = (2 * k) as f64;
            cos = Self::ONE.sub(a2.mul(cos).div_f64((n - 1.0) * n));
            sin = Self::ONE.sub(a2.mul(sin).div_f64(n * (n + 1.0)));
        }
        (cos, self.mul(sin))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn double_double_arithmetic() {
        let third = DoubleDouble::ONE.div_f64(3.0);
        let r = DoubleDouble::ONE.sub(third.mul_f64(3.0));
        assert!(r.to_f64().abs() < 1e-31);
        assert!(third.lo != 0.0);
        let x = DoubleDouble::from_u128_scaled((1u128 << 100) + 1, 100);
        assert_eq!(x.hi, 1.0);
        assert_eq!(x.lo, 2f64.powi(-100));
        // (1 + 2^-60)^2 = 1 + 2^-59 + 2^-120
        let y = DoubleDouble::from_u128_scaled((1u128 << 60) + 1, 60);
        let sq = y.mul(y).sub(DoubleDouble::ONE);
        assert_eq!(sq.hi, 2f64.powi(-59));
    }

    #[test]
    fn small_angle_trig() {
        for a in [0.0, 1e-5, 0.01, -0.0245] {
            let (c, s) = DoubleDouble::from_f64(a).cos_sin_small();
            assert!((c.to_f64() - a.cos()).abs() < 1e-16);
            assert!((s.to_f64() - a.sin()).abs() < 1e-16);
            // cos^2 + sin^2 = 1 far beyond double precision
            let one = c.mul(c).add(s.mul(s)).sub(DoubleDouble::ONE);
            assert!(one.to_f64().abs() < 1e-30, "{a}: {}", one.to_f64());
        }
    }
}
