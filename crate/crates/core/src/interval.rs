//! Rational interval arithmetic.
//!
//! Used for rigorous enclosures of real embeddings and of square-root
//! bounds. Endpoints are exact rationals, so interval operations never
//! round: widths only shrink through explicit refinement.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Closed interval with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl QInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        QInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        QInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(x: i64) -> Self {
        QInterval::point(BigRational::from(BigInt::from(x)))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign if determined: 1, -1, or None if the interval straddles zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn add(&self, other: &QInterval) -> QInterval {
        QInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &QInterval) -> QInterval {
        QInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> QInterval {
        QInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &QInterval) -> QInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        QInterval::new(lo, hi)
    }

    pub fn mul_scalar(&self, s: &BigRational) -> QInterval {
        if s.is_negative() {
            QInterval::new(&self.hi * s, &self.lo * s)
        } else {
            QInterval::new(&self.lo * s, &self.hi * s)
        }
    }

    /// Upper bound on |value|.
    pub fn abs_upper(&self) -> BigRational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// True when the two intervals cannot share a point.
    pub fn disjoint(&self, other: &QInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }
}

/// Horner evaluation of a rational-coefficient polynomial on an interval.
pub fn eval_poly_interval(coeffs: &[BigRational], x: &QInterval) -> QInterval {
    let mut acc = QInterval::point(BigRational::zero());
    for a in coeffs.iter().rev() {
        acc = acc.mul(x).add(&QInterval::point(a.clone()));
    }
    acc
}

/// Rigorous enclosure of sqrt(q) for q >= 0, width about 2^-prec_bits.
pub fn sqrt_interval(q: &BigRational, prec_bits: u32) -> QInterval {
    debug_assert!(!q.is_negative());
    if q.is_zero() {
        return QInterval::point(BigRational::zero());
    }
    // exact squares first
    let a = q.numer();
    let b = q.denom();
    let sa = a.sqrt();
    let sb = b.sqrt();
    if &(&sa * &sa) == a && &(&sb * &sb) == b {
        return QInterval::point(BigRational::new(sa, sb));
    }
    // sqrt(a/b) = sqrt(a b) / b; scale by 4^k for k extra bits
    let scale = BigInt::one() << (2 * prec_bits as usize);
    let n = a * b * &scale;
    let s = n.sqrt();
    let denom = b * (BigInt::one() << prec_bits as usize);
    let lo = BigRational::new(s.clone(), denom.clone());
    let hi = BigRational::new(s + BigInt::one(), denom);
    QInterval::new(lo, hi)
}

/// Outward-rounded enclosure of `c * sqrt(m)` (m >= 0).
pub fn scaled_sqrt_interval(c: &BigRational, m: &BigRational, prec_bits: u32) -> QInterval {
    sqrt_interval(m, prec_bits).mul_scalar(c)
}

/// All integers n with lo <= n <= hi.
pub fn integers_in(lo: &BigRational, hi: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut n = lo.ceil().to_integer();
    let top = hi.floor().to_integer();
    while n <= top {
        out.push(n.clone());
        n += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let s = sqrt_interval(&rat(5, 1), 32);
        assert!(s.lo.clone() * s.lo.clone() <= rat(5, 1));
        assert!(s.hi.clone() * s.hi.clone() >= rat(5, 1));
        assert!(s.width() < rat(1, 1_000_000));
    }

    #[test]
    fn sqrt_of_exact_square() {
        let s = sqrt_interval(&rat(4, 1), 16);
        assert!(s.lo <= rat(2, 1) && rat(2, 1) <= s.hi);
    }

    #[test]
    fn interval_mul_signs() {
        let a = QInterval::new(rat(-2, 1), rat(3, 1));
        let b = QInterval::new(rat(-1, 1), rat(4, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-8, 1));
        assert_eq!(p.hi, rat(12, 1));
    }

    #[test]
    fn integers_in_interval() {
        let v = integers_in(&rat(-447, 100), &rat(447, 100));
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], BigInt::from(-4));
        assert_eq!(v[8], BigInt::from(4));
        assert!(integers_in(&rat(1, 10), &rat(9, 10)).is_empty());
    }
}
