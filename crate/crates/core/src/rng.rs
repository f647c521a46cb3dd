//! Deterministic pseudorandom numbers.
//!
//! All randomized subroutines (Cantor–Zassenhaus splitting, large Miller–Rabin
//! witnesses, algebra decomposition) draw from this generator, seeded from
//! their own inputs, so every run of the library is bit-reproducible.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

/// xorshift64* generator. Never returns the zero state.
#[derive(Clone, Debug)]
pub struct XorShift64 {
    state: u64,
}

impl XorShift64 {
    pub fn new(seed: u64) -> Self {
        XorShift64 {
            state: seed | 1,
        }
    }

    /// Seed from arbitrary bytes (FNV-1a).
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut h: u64 = 0xcbf29ce484222325;
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        XorShift64::new(h)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x.wrapping_mul(0x2545f4914f6cdd1d)
    }

    /// Uniform value in `[0, bound)` for a positive bound, by rejection
    /// sampling on the low `bound.bits()` bits.
    pub fn below(&mut self, bound: &BigUint) -> BigUint {
        use num_traits::One;
        let bits = bound.bits();
        let words = ((bits + 63) / 64) as usize;
        let mask = (BigUint::one() << bits) - BigUint::one();
        loop {
            let mut digits = alloc::vec::Vec::with_capacity(words);
            for _ in 0..words {
                digits.push(self.next_u64());
            }
            let v = BigUint::new(
                digits
                    .iter()
                    .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                    .collect(),
            ) & &mask;
            if &v < bound {
                return v;
            }
        }
    }

    /// Uniform-ish `BigInt` in `[0, bound)`.
    pub fn below_int(&mut self, bound: &BigInt) -> BigInt {
        let (_, mag) = bound.clone().into_parts();
        if mag.is_zero() {
            return BigInt::zero();
        }
        BigInt::from_biguint(Sign::Plus, self.below(&mag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_sequence() {
        let mut a = XorShift64::new(42);
        let mut b = XorShift64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn below_respects_bound() {
        let mut r = XorShift64::new(7);
        let bound = BigUint::from(1000u32);
        for _ in 0..200 {
            assert!(r.below(&bound) < bound);
        }
    }
}
