//! Arbitrary-precision integer factorization.
//!
//! Pipeline: trial division up to a configurable floor, Miller–Rabin
//! primality (deterministic witness set below 3.3·10^24, 64 pseudorandom
//! rounds above), then Brent-cycle Pollard rho under an iteration budget.
//! When the budget runs out the caller gets
//! [`Error::FactorizationIncomplete`] with the unfactored part — never a
//! partial factor list.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::rng::XorShift64;
use crate::Result;

/// Budgets controlling how hard factorization tries.
///
/// Budgets are iteration counts, not wall-clock, so results are identical
/// across machines and runs.
#[derive(Clone, Debug)]
pub struct FactorBudget {
    /// Trial-divide by every prime up to this bound.
    pub trial_bound: u64,
    /// Total Pollard-rho iterations across all attempts for one input.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 4_000_000,
        }
    }
}

/// Remainder of `n` by a small positive divisor, without allocating.
fn rem_u64(n: &BigUint, d: u64) -> u64 {
    debug_assert!(d > 0);
    let mut rem: u128 = 0;
    let digits: Vec<u64> = n.to_u64_digits();
    for &digit in digits.iter().rev() {
        rem = ((rem << 64) | digit as u128) % d as u128;
    }
    rem as u64
}

/// Deterministic Miller–Rabin witnesses valid for n < 3.317·10^24.
const MR_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn miller_rabin_round(n: &BigUint, base: &BigUint, d: &BigUint, s: u32) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let mut x = base.modpow(d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test. Deterministic below the Miller–Rabin witness threshold,
/// 64 seeded pseudorandom rounds above it.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() || n.is_zero() || n.is_one() {
        return false;
    }
    let n = n.magnitude().clone();
    if n.is_even() {
        return n == BigUint::from(2u32);
    }
    for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        if rem_u64(&n, p) == 0 {
            return n == BigUint::from(p);
        }
    }
    let one = BigUint::one();
    let n_minus_1 = &n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0) as u32;
    let d = &n_minus_1 >> s;

    // 3,317,044,064,679,887,385,961,981: first composite passing the fixed set.
    let threshold: BigUint = "3317044064679887385961981".parse().unwrap();
    if n < threshold {
        for &w in MR_WITNESSES.iter() {
            let base = BigUint::from(w);
            if !miller_rabin_round(&n, &base, &d, s) {
                return false;
            }
        }
        return true;
    }
    let mut rng = XorShift64::from_bytes(&n.to_bytes_le());
    let two = BigUint::from(2u32);
    let span = &n_minus_1 - &two;
    for _ in 0..64 {
        let base = &two + rng.below(&span);
        if !miller_rabin_round(&n, &base, &d, s) {
            return false;
        }
    }
    true
}

/// Brent-cycle Pollard rho. Returns a nontrivial factor of odd composite `n`,
/// or `None` when the iteration budget is exhausted.
fn pollard_brent(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut rng = XorShift64::from_bytes(&n.to_bytes_le());
    loop {
        if *budget == 0 {
            return None;
        }
        let c = rng.below(&(n - &BigUint::from(3u32))) + BigUint::one();
        let mut y = rng.below(n);
        let m: u64 = 128;
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k: u64 = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = m.min(r - k);
                if *budget < steps {
                    *budget = 0;
                    return None;
                }
                *budget -= steps;
                for _ in 0..steps {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if g == *n {
            // backtrack one step at a time
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
            }
        }
        if g > one && g < *n {
            return Some(g);
        }
        // cycle degenerated; retry with a new constant
    }
}

/// Complete factorization of `|n|` into `(prime, exponent)` pairs, primes
/// ascending. `n = 0` is rejected; the sign is ignored.
pub fn factor(n: &BigInt, budget: &FactorBudget) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut remaining = n.magnitude().clone();
    let one = BigUint::one();
    let mut out: Vec<(BigInt, u32)> = Vec::new();

    let push = |p: BigUint, k: u32, out: &mut Vec<(BigInt, u32)>| {
        out.push((BigInt::from(p), k));
    };

    // trial division: 2, 3, then 6k±1
    for &p in &[2u64, 3] {
        let mut k = 0u32;
        while rem_u64(&remaining, p) == 0 {
            remaining /= p;
            k += 1;
        }
        if k > 0 {
            push(BigUint::from(p), k, &mut out);
        }
    }
    let mut d: u64 = 5;
    while d <= budget.trial_bound && remaining > one {
        if let Some(small) = remaining.to_u64() {
            if d.saturating_mul(d) > small {
                break;
            }
        }
        for cand in [d, d + 2] {
            if cand > budget.trial_bound {
                break;
            }
            let mut k = 0u32;
            while rem_u64(&remaining, cand) == 0 {
                remaining /= cand;
                k += 1;
            }
            if k > 0 {
                push(BigUint::from(cand), k, &mut out);
            }
        }
        d += 6;
    }
    if remaining > one {
        if let Some(small) = remaining.to_u64() {
            // trial division covered sqrt(remaining): the cofactor is prime
            if budget.trial_bound.saturating_mul(budget.trial_bound) > small {
                push(BigUint::from(small), 1, &mut out);
                remaining = one.clone();
            }
        }
    }

    // rho phase on the remaining composite part
    let mut rho_budget = budget.rho_iterations;
    let mut stack: Vec<BigUint> = Vec::new();
    if remaining > one {
        stack.push(remaining);
    }
    let mut found: Vec<BigUint> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == one {
            continue;
        }
        if is_prime(&BigInt::from(m.clone())) {
            found.push(m);
            continue;
        }
        // perfect power shortcut helps rho on squares
        if let Some((root, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        match pollard_brent(&m, &mut rho_budget) {
            Some(g) => {
                stack.push(&m / &g);
                stack.push(g);
            }
            None => {
                return Err(Error::FactorizationIncomplete(BigInt::from(m)));
            }
        }
    }
    for p in found {
        push(p, 1, &mut out);
    }

    // merge duplicates, sort ascending
    out.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(BigInt, u32)> = Vec::new();
    for (p, k) in out {
        match merged.last_mut() {
            Some((q, j)) if *q == p => *j += k,
            _ => merged.push((p, k)),
        }
    }
    Ok(merged)
}

/// Largest `k >= 2` with `n = r^k`, if any.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    for k in (2..=bits.max(2)).rev() {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Convenience: the distinct prime divisors of `|n|`.
pub fn prime_support(n: &BigInt, budget: &FactorBudget) -> Result<Vec<BigInt>> {
    Ok(factor(n, budget)?.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn primality_small() {
        assert!(is_prime(&big("2")));
        assert!(is_prime(&big("3")));
        assert!(!is_prime(&big("1")));
        assert!(!is_prime(&big("561"))); // Carmichael
        assert!(is_prime(&big("104729")));
        assert!(!is_prime(&big("104730")));
    }

    #[test]
    fn primality_large() {
        // 2^89-1 is prime, 2^67-1 is not
        assert!(is_prime(&big("618970019642690137449562111")));
        assert!(!is_prime(&big("147573952589676412927")));
    }

    #[test]
    fn factor_mixed() {
        let b = FactorBudget::default();
        let f = factor(&big("5040"), &b).unwrap();
        assert_eq!(
            f,
            vec![
                (big("2"), 4u32),
                (big("3"), 2),
                (big("5"), 1),
                (big("7"), 1)
            ]
        );
        // includes a factor above the trial bound
        let n = big("1000003") * big("1000033") * big("4");
        let f = factor(&n, &b).unwrap();
        assert_eq!(
            f,
            vec![(big("2"), 2u32), (big("1000003"), 1), (big("1000033"), 1)]
        );
    }

    #[test]
    fn factor_square_of_large_prime() {
        let b = FactorBudget::default();
        let p = big("1000000007");
        let f = factor(&(&p * &p), &b).unwrap();
        assert_eq!(f, vec![(p, 2u32)]);
    }

    #[test]
    fn factor_budget_failure_is_loud() {
        let b = FactorBudget {
            trial_bound: 100,
            rho_iterations: 10,
        };
        let n = big("618970019642690137449562111") * big("2305843009213693951");
        match factor(&n, &b) {
            Err(Error::FactorizationIncomplete(_)) => {}
            other => panic!("expected incomplete factorization, got {other:?}"),
        }
    }

    #[test]
    fn factor_negative_and_zero() {
        let b = FactorBudget::default();
        assert_eq!(factor(&big("-12"), &b).unwrap().len(), 2);
        assert!(factor(&BigInt::zero(), &b).is_err());
    }
}
