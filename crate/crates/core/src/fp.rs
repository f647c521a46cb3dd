//! Polynomial arithmetic and factorization over prime fields GF(p).
//!
//! The modulus is an arbitrary-precision prime, so the same code serves both
//! residue-field arithmetic at small primes and splitting of defining
//! polynomials modulo the large primes that show up in trace-set supports.
//! Equal-degree splitting is randomized (Cantor–Zassenhaus for odd p, trace
//! splitting for p = 2) with an input-seeded generator, so factor lists are
//! deterministic.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rng::XorShift64;

/// Arithmetic context: the prime modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpCtx {
    pub p: BigInt,
}

impl FpCtx {
    pub fn new(p: BigInt) -> Self {
        debug_assert!(p > BigInt::one());
        FpCtx { p }
    }

    pub fn norm(&self, a: &BigInt) -> BigInt {
        let r = a.mod_floor(&self.p);
        r
    }

    pub fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(&(a + b))
    }

    pub fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(&(a - b))
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.norm(&(a * b))
    }

    /// Inverse of a unit mod p.
    pub fn inv(&self, a: &BigInt) -> BigInt {
        let a = self.norm(a);
        let e = a.extended_gcd(&self.p);
        debug_assert!(e.gcd.is_one(), "attempted inverse of non-unit");
        self.norm(&e.x)
    }

    pub fn is_two(&self) -> bool {
        self.p == BigInt::from(2)
    }
}

/// Dense polynomial over GF(p); coefficients normalized to `[0, p)`,
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FpPoly {
    pub c: Vec<BigInt>,
}

impl FpPoly {
    pub fn new(ctx: &FpCtx, coeffs: Vec<BigInt>) -> Self {
        let mut c: Vec<BigInt> = coeffs.iter().map(|x| ctx.norm(x)).collect();
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        FpPoly { c }
    }

    pub fn zero() -> Self {
        FpPoly { c: vec![] }
    }

    pub fn one(ctx: &FpCtx) -> Self {
        FpPoly::new(ctx, vec![BigInt::one()])
    }

    pub fn x(ctx: &FpCtx) -> Self {
        FpPoly::new(ctx, vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(ctx: &FpCtx, a: BigInt) -> Self {
        FpPoly::new(ctx, vec![a])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; zero polynomial reports 0 by convention of callers guarding is_zero.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.c.last().expect("lc of zero polynomial")
    }

    pub fn add(&self, ctx: &FpCtx, other: &FpPoly) -> FpPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.c.get(i).cloned().unwrap_or_else(BigInt::zero);
            c.push(ctx.add(&a, &b));
        }
        FpPoly::new(ctx, c)
    }

    pub fn sub(&self, ctx: &FpCtx, other: &FpPoly) -> FpPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.c.get(i).cloned().unwrap_or_else(BigInt::zero);
            c.push(ctx.sub(&a, &b));
        }
        FpPoly::new(ctx, c)
    }

    pub fn mul(&self, ctx: &FpCtx, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        FpPoly::new(ctx, c)
    }

    pub fn mul_scalar(&self, ctx: &FpCtx, s: &BigInt) -> FpPoly {
        FpPoly::new(ctx, self.c.iter().map(|a| a * s).collect())
    }

    pub fn monic(&self, ctx: &FpCtx) -> FpPoly {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        let inv = ctx.inv(self.lc());
        self.mul_scalar(ctx, &inv)
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, ctx: &FpCtx, div: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        if self.deg() < div.deg() || self.is_zero() {
            return (FpPoly::zero(), self.clone());
        }
        let lcinv = ctx.inv(div.lc());
        let mut rem = self.c.clone();
        let dq = self.deg() - div.deg();
        let mut q = vec![BigInt::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let top = ctx.norm(&rem[k + div.deg()]);
            if top.is_zero() {
                continue;
            }
            let coef = ctx.mul(&top, &lcinv);
            q[k] = coef.clone();
            for (j, dc) in div.c.iter().enumerate() {
                let idx = k + j;
                rem[idx] = ctx.sub(&rem[idx].clone(), &ctx.mul(&coef, dc));
            }
        }
        (FpPoly::new(ctx, q), FpPoly::new(ctx, rem))
    }

    pub fn rem(&self, ctx: &FpCtx, div: &FpPoly) -> FpPoly {
        self.divrem(ctx, div).1
    }

    pub fn gcd(&self, ctx: &FpCtx, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ctx, &b);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn derivative(&self, ctx: &FpCtx) -> FpPoly {
        if self.c.len() <= 1 {
            return FpPoly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| ctx.norm(&(a * BigInt::from(i))))
            .collect();
        FpPoly::new(ctx, c)
    }

    pub fn eval(&self, ctx: &FpCtx, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = ctx.norm(&(acc * x + a));
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, ctx: &FpCtx, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut result = FpPoly::one(ctx);
        let mut base = self.rem(ctx, m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(ctx, &base).rem(ctx, m);
            }
            if i + 1 < bits {
                base = base.mul(ctx, &base).rem(ctx, m);
            }
        }
        result
    }

    /// Inverse modulo `m` for units of the quotient ring.
    pub fn inv_mod(&self, ctx: &FpCtx, m: &FpPoly) -> Option<FpPoly> {
        // extended Euclid
        let (mut r0, mut r1) = (m.clone(), self.rem(ctx, m));
        let (mut t0, mut t1) = (FpPoly::zero(), FpPoly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(ctx, &r1);
            let t = t0.sub(ctx, &q.mul(ctx, &t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.deg() > 0 {
            return None;
        }
        let s = ctx.inv(r0.lc());
        Some(t0.mul_scalar(ctx, &s).rem(ctx, m))
    }
}

/// Squarefree factorization in characteristic p (Yun with p-th root descent).
fn squarefree_decomposition(ctx: &FpCtx, f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    sff_inner(ctx, &f.monic(ctx), 1, &mut out);
    out.sort_by(|a, b| (a.1, a.0.deg(), a.0.c.clone()).cmp(&(b.1, b.0.deg(), b.0.c.clone())));
    out
}

fn sff_inner(ctx: &FpCtx, f: &FpPoly, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if f.deg() == 0 {
        return;
    }
    let deriv = f.derivative(ctx);
    if deriv.is_zero() {
        // f = g(x^p); over the prime field coefficients are their own p-th roots
        let pi = usize::try_from(ctx.p.to_biguint().unwrap().to_u64_digits()[0]).unwrap();
        let mut g = Vec::new();
        let mut i = 0;
        while i < f.c.len() {
            g.push(f.c[i].clone());
            i += pi;
        }
        let g = FpPoly::new(ctx, g);
        sff_inner(ctx, &g, mult * pi as u32, out);
        return;
    }
    let mut c = f.gcd(ctx, &deriv);
    let mut w = f.divrem(ctx, &c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(ctx, &c);
        let fac = w.divrem(ctx, &y).0;
        if fac.deg() > 0 {
            out.push((fac.monic(ctx), mult * i));
        }
        w = y.clone();
        c = c.divrem(ctx, &y).0;
        i += 1;
    }
    if c.deg() > 0 {
        sff_inner(ctx, &c, mult, out);
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// returns (product of irreducibles of degree d, d) pairs.
fn distinct_degree(ctx: &FpCtx, f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = FpPoly::x(ctx); // x^(p^i) mod f, running
    let p = ctx.p.to_biguint().unwrap();
    let mut d = 0usize;
    while rest.deg() >= 1 {
        d += 1;
        if 2 * d > rest.deg() {
            // what's left is irreducible
            out.push((rest.clone(), rest.deg()));
            break;
        }
        h = h.pow_mod(ctx, &p, &rest);
        let diff = h.sub(ctx, &FpPoly::x(ctx));
        let g = diff.gcd(ctx, &rest);
        if g.deg() > 0 {
            out.push((g.clone(), d));
            rest = rest.divrem(ctx, &g).0;
            h = h.rem(ctx, &rest);
        }
    }
    out
}

/// Equal-degree splitting: factor a monic squarefree product of irreducibles
/// all of degree `d`.
fn equal_degree(ctx: &FpCtx, f: &FpPoly, d: usize, rng: &mut XorShift64) -> Vec<FpPoly> {
    if f.deg() == d {
        return vec![f.clone()];
    }
    let n = f.deg();
    loop {
        // random polynomial of degree < n
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            coeffs.push(rng.below_int(&ctx.p));
        }
        let u = FpPoly::new(ctx, coeffs);
        if u.is_zero() {
            continue;
        }
        let g0 = u.gcd(ctx, f);
        if g0.deg() > 0 && g0.deg() < f.deg() {
            let mut left = equal_degree(ctx, &g0, d, rng);
            let right = equal_degree(ctx, &f.divrem(ctx, &g0).0, d, rng);
            left.extend(right);
            return left;
        }
        let split = if ctx.is_two() {
            // trace map over GF(2^d)
            let mut tr = u.clone().rem(ctx, f);
            let mut pw = u.clone().rem(ctx, f);
            for _ in 1..d {
                pw = pw.mul(ctx, &pw).rem(ctx, f);
                tr = tr.add(ctx, &pw);
            }
            tr
        } else {
            let e = (ctx.p.to_biguint().unwrap().pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let t = u.pow_mod(ctx, &e, f);
            t.sub(ctx, &FpPoly::one(ctx))
        };
        let g = split.gcd(ctx, f);
        if g.deg() > 0 && g.deg() < f.deg() {
            let mut left = equal_degree(ctx, &g, d, rng);
            let right = equal_degree(ctx, &f.divrem(ctx, &g).0, d, rng);
            left.extend(right);
            return left;
        }
    }
}

/// Full factorization over GF(p): monic irreducible factors with
/// multiplicities, sorted by (degree, coefficient list). The leading
/// coefficient of `f` is dropped (callers factor monic inputs or track it).
pub fn factor(ctx: &FpCtx, f: &FpPoly) -> Vec<(FpPoly, u32)> {
    assert!(!f.is_zero());
    if f.deg() == 0 {
        return vec![];
    }
    let mut seed = Vec::new();
    for c in &f.c {
        seed.extend_from_slice(&c.to_signed_bytes_le());
    }
    seed.extend_from_slice(&ctx.p.to_signed_bytes_le());
    let mut rng = XorShift64::from_bytes(&seed);

    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    for (sqfree, mult) in squarefree_decomposition(ctx, f) {
        for (prod, d) in distinct_degree(ctx, &sqfree) {
            for irr in equal_degree(ctx, &prod, d, &mut rng) {
                out.push((irr.monic(ctx), mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg(), &a.0.c).cmp(&(b.0.deg(), &b.0.c)));
    out
}

/// Irreducibility test via factorization.
pub fn is_irreducible(ctx: &FpCtx, f: &FpPoly) -> bool {
    if f.deg() == 0 {
        return false;
    }
    let fs = factor(ctx, f);
    fs.len() == 1 && fs[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: i64) -> FpCtx {
        FpCtx::new(BigInt::from(p))
    }

    fn poly(ctx: &FpCtx, cs: &[i64]) -> FpPoly {
        FpPoly::new(ctx, cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let c = ctx(7);
        let f = poly(&c, &[1, 0, 3, 2]);
        let g = poly(&c, &[2, 1]);
        let (q, r) = f.divrem(&c, &g);
        let back = q.mul(&c, &g).add(&c, &r);
        assert_eq!(back, f);
        assert!(r.deg() < g.deg() || r.is_zero());
    }

    #[test]
    fn factor_x2_plus_1_mod_5() {
        let c = ctx(5);
        let f = poly(&c, &[1, 0, 1]);
        let fs = factor(&c, &f);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(g, m)| g.deg() == 1 && *m == 1));
        assert_eq!(fs[0].0.mul(&c, &fs[1].0), f);
    }

    #[test]
    fn factor_x2_plus_1_mod_2() {
        let c = ctx(2);
        let f = poly(&c, &[1, 0, 1]);
        let fs = factor(&c, &f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 2);
        assert_eq!(fs[0].0, poly(&c, &[1, 1]));
    }

    #[test]
    fn factor_inert_quadratic() {
        let c = ctx(7);
        // x^2 + 1 is irreducible mod 7 (-1 is not a QR mod 7)
        let f = poly(&c, &[1, 0, 1]);
        assert!(is_irreducible(&c, &f));
    }

    #[test]
    fn factor_mixed_multiplicity() {
        let c = ctx(3);
        // (x+1)^2 * (x^2+1) mod 3; x^2+1 irreducible mod 3
        let f = poly(&c, &[1, 1]).mul(&c, &poly(&c, &[1, 1])).mul(&c, &poly(&c, &[1, 0, 1]));
        let fs = factor(&c, &f);
        assert_eq!(fs.len(), 2);
        let total: usize = fs.iter().map(|(g, m)| g.deg() * *m as usize).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn factor_large_prime_modulus() {
        let c = FpCtx::new("1000003".parse().unwrap());
        let f = poly(&c, &[-5, 0, 1]);
        let fs = factor(&c, &f);
        // 5 is a QR mod 1000003 iff the factorization splits
        let degs: Vec<usize> = fs.iter().map(|(g, _)| g.deg()).collect();
        assert!(degs == vec![1, 1] || degs == vec![2]);
        if fs.len() == 2 {
            let prod = fs[0].0.mul(&c, &fs[1].0);
            assert_eq!(prod, f.monic(&c));
        }
    }

    #[test]
    fn equal_degree_split_quartic() {
        let c = ctx(2);
        // x^4 + x^3 + x^2 + x + 1 is irreducible over GF(2) (order of 2 mod 5 is 4)
        let f = poly(&c, &[1, 1, 1, 1, 1]);
        assert!(is_irreducible(&c, &f));
        // (x^2+x+1)(x^2+x+1) has one irreducible with multiplicity 2
        let g = poly(&c, &[1, 1, 1]);
        let gg = g.mul(&c, &g);
        let fs = factor(&c, &gg);
        assert_eq!(fs, vec![(poly(&c, &[1, 1, 1]), 2)]);
    }
}
