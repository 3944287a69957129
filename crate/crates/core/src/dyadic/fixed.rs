//! Wide binary fixed-point fractions in `[0, 1)`.
//!
//! A [`BinaryFixed`] of width `w` denotes `sum_{i<w} bit_i * 2^-(i+1)`. Bits are
//! stored most significant first, 64 per word; bits past the width are kept zero.
//! Doubling is an exact left shift that drops the leading bit, so a value of
//! width `w` supports `w - 53` doublings before fewer than 53 significant bits
//! remain.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use std::f64::consts::LN_2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryFixed {
    words: Vec<u64>,
    width: usize,
}

fn word_count(width: usize) -> usize {
    width.div_ceil(64)
}

impl BinaryFixed {
    /// Builds a value from most-significant-first words. Missing words are
    /// zero; bits past `width` are cleared.
    pub fn from_words(mut words: Vec<u64>, width: usize) -> Self {
        assert!(width > 0, "width must be positive");
        words.resize(word_count(width), 0);
        let mut x = BinaryFixed { words, width };
        x.clear_tail();
        x
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; word_count(bits.len())];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1u64 << (63 - i % 64);
            }
        }
        Self::from_words(words, bits.len())
    }

    pub fn zero(width: usize) -> Self {
        Self::from_words(Vec::new(), width)
    }

    /// The value 1/2 at the given width.
    pub fn half(width: usize) -> Self {
        Self::from_words(vec![1u64 << 63], width)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Self {
        let words = (0..word_count(width)).map(|_| rng.gen::<u64>()).collect();
        Self::from_words(words, width)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bit(&self, i: usize) -> bool {
        i < self.width && (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn clear_tail(&mut self) {
        let rem = self.width % 64;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= !0u64 << (64 - rem);
        }
    }

    /// `2^n x mod 1`, exact. The result has width `width - n`.
    ///
    /// Panics if `n >= width`; callers budget precision beforehand.
    pub fn shl(&self, n: usize) -> Self {
        assert!(n < self.width, "shift {n} consumes the whole width {}", self.width);
        let new_width = self.width - n;
        let (ws, bs) = (n / 64, n % 64);
        let len = word_count(new_width);
        let get = |i: usize| self.words.get(i).copied().unwrap_or(0);
        let words = (0..len)
            .map(|i| {
                if bs == 0 {
                    get(i + ws)
                } else {
                    (get(i + ws) << bs) | (get(i + ws + 1) >> (64 - bs))
                }
            })
            .collect();
        Self::from_words(words, new_width)
    }

    fn widened(&self, width: usize) -> Vec<u64> {
        let mut w = self.words.clone();
        w.resize(word_count(width), 0);
        w
    }

    /// `self - other mod 1` at the larger of the two widths.
    pub fn sub_mod1(&self, other: &Self) -> Self {
        let width = self.width.max(other.width);
        let a = self.widened(width);
        let b = other.widened(width);
        let mut out = vec![0u64; a.len()];
        let mut borrow = false;
        for i in (0..a.len()).rev() {
            let (d, b1) = a[i].overflowing_sub(b[i]);
            let (d, b2) = d.overflowing_sub(borrow as u64);
            out[i] = d;
            borrow = b1 || b2;
        }
        Self::from_words(out, width)
    }

    /// `-self mod 1`.
    pub fn neg_mod1(&self) -> Self {
        Self::zero(self.width).sub_mod1(self)
    }

    /// Circle distance `min(|x - y|, 1 - |x - y|)`, exact.
    pub fn distance(&self, other: &Self) -> Self {
        let d = self.sub_mod1(other);
        if d.bit(0) {
            d.neg_mod1()
        } else {
            d
        }
    }

    /// Position of the leading one bit and the 64 bits starting there.
    fn leading(&self) -> Option<(usize, u64)> {
        let i = self.words.iter().position(|&w| w != 0)?;
        let lz = self.words[i].leading_zeros() as usize;
        let next = self.words.get(i + 1).copied().unwrap_or(0);
        let mantissa = if lz == 0 {
            self.words[i]
        } else {
            (self.words[i] << lz) | (next >> (64 - lz))
        };
        Some((64 * (i + 1) + lz, mantissa))
    }

    /// Natural logarithm of the value; `-inf` for zero. Never underflows.
    pub fn ln(&self) -> f64 {
        match self.leading() {
            None => f64::NEG_INFINITY,
            Some((shift, m)) => (m as f64).ln() - shift as f64 * LN_2,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.leading() {
            None => 0.0,
            Some((shift, m)) => {
                let scale = -(shift as i32);
                if scale < -1100 {
                    0.0
                } else {
                    (m as f64) * 2f64.powi(scale)
                }
            }
        }
    }

    /// Leading 128 bits as a `Q0.128` fraction (truncated).
    pub fn to_q128(&self) -> u128 {
        let hi = self.words.first().copied().unwrap_or(0) as u128;
        let lo = self.words.get(1).copied().unwrap_or(0) as u128;
        (hi << 64) | lo
    }

    /// The exact value as a reduced rational `k / 2^width`.
    pub fn to_ratio(&self) -> BigRational {
        let mut num = BigInt::zero();
        for &w in &self.words {
            num = (num << 64) + BigInt::from(w);
        }
        let den = BigInt::one() << (64 * self.words.len());
        BigRational::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bits_and_value() {
        // 0.101 = 5/8
        let x = BinaryFixed::from_bits(&[true, false, true]);
        assert_eq!(x.to_ratio(), r(5, 8));
        assert!(x.bit(0) && !x.bit(1) && x.bit(2) && !x.bit(3));
    }

    #[test]
    fn shift_crosses_word_boundary() {
        let mut bits = vec![false; 200];
        bits[70] = true;
        bits[199] = true;
        let x = BinaryFixed::from_bits(&bits);
        let y = x.shl(67);
        assert_eq!(y.width(), 133);
        assert!(y.bit(3));
        assert!(y.bit(132));
        assert_eq!(y.words().iter().map(|w| w.count_ones()).sum::<u32>(), 2);
    }

    #[test]
    fn shift_matches_rational_doubling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = BinaryFixed::random(&mut rng, 300);
        let q = x.to_ratio();
        for n in [0usize, 1, 5, 63, 64, 65, 129, 200] {
            let shifted = x.shl(n).to_ratio();
            let doubled = &q * BigRational::from_integer(BigInt::one() << n);
            let frac = &doubled - doubled.floor();
            assert_eq!(shifted, frac, "n = {n}");
        }
    }

    #[test]
    fn distance_is_exact_and_symmetric() {
        let a = BinaryFixed::from_bits(&[false, false, true]); // 1/8
        let b = BinaryFixed::from_bits(&[true, true, true, false]); // 7/8
        assert_eq!(a.distance(&b).to_ratio(), r(1, 4));
        assert_eq!(b.distance(&a).to_ratio(), r(1, 4));
        let h = BinaryFixed::half(10);
        assert_eq!(h.distance(&BinaryFixed::zero(3)).to_ratio(), r(1, 2));
    }

    #[test]
    fn ln_survives_underflow() {
        let mut bits = vec![false; 3000];
        bits[2500] = true;
        let x = BinaryFixed::from_bits(&bits);
        assert_eq!(x.to_f64(), 0.0);
        let expected = -2501.0 * LN_2;
        assert!((x.ln() - expected).abs() < 1e-9);
    }
}
