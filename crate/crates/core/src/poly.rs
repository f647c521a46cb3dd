//! Dense univariate polynomials over Z and Q: exact arithmetic, resultants,
//! cyclotomic polynomials, Sturm sequences and real root isolation, and a
//! Zassenhaus irreducibility test (factor mod p, Hensel lift, subset
//! recombination).

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fp::{self, FpCtx, FpPoly};
use crate::intfact;
use crate::linalg::{det_bareiss, IMat};

/// Polynomial over Z, coefficients ascending, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZPoly {
    pub c: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut c = coeffs;
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { c: vec![] }
    }

    pub fn one() -> Self {
        ZPoly::new(vec![BigInt::one()])
    }

    pub fn x() -> Self {
        ZPoly::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.c.last().expect("lc of zero")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lc().is_one()
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.c.len().max(other.c.len());
        ZPoly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
                        + other.c.get(i).cloned().unwrap_or_else(BigInt::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.c.len().max(other.c.len());
        ZPoly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
                        - other.c.get(i).cloned().unwrap_or_else(BigInt::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::new(self.c.iter().map(|x| -x.clone()).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
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
        ZPoly::new(c)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> ZPoly {
        ZPoly::new(self.c.iter().map(|x| x * s).collect())
    }

    /// Exact division; panics if not exact (internal use only).
    pub fn div_exact(&self, other: &ZPoly) -> ZPoly {
        let (q, r) = self.to_q().divrem(&other.to_q());
        assert!(r.is_zero(), "inexact polynomial division");
        q.to_z_exact().expect("quotient not integral")
    }

    pub fn derivative(&self) -> ZPoly {
        if self.c.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + BigRational::from(a.clone());
        }
        acc
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|x| BigRational::from(x.clone())).collect())
    }

    pub fn to_fp(&self, ctx: &FpCtx) -> FpPoly {
        FpPoly::new(ctx, self.c.clone())
    }

    /// Content (gcd of coefficients, nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = g.gcd(a);
        }
        g
    }

    /// Max |coefficient|.
    pub fn height(&self) -> BigInt {
        self.c
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Polynomial over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    pub c: Vec<BigRational>,
}

impl QPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut c = coeffs;
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn zero() -> Self {
        QPoly { c: vec![] }
    }

    pub fn one() -> Self {
        QPoly::new(vec![BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &BigRational {
        self.c.last().expect("lc of zero")
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
                        + other.c.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
                        - other.c.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn mul_scalar(&self, s: &BigRational) -> QPoly {
        QPoly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|x| -x.clone()).collect())
    }

    pub fn divrem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.deg() < div.deg() {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.c.clone();
        let dq = self.deg() - div.deg();
        let mut q = vec![BigRational::zero(); dq + 1];
        let lcinv = BigRational::one() / div.lc().clone();
        for k in (0..=dq).rev() {
            let top = rem[k + div.deg()].clone();
            if top.is_zero() {
                continue;
            }
            let coef = &top * &lcinv;
            q[k] = coef.clone();
            for (j, dc) in div.c.iter().enumerate() {
                let s = &coef * dc;
                rem[k + j] -= s;
            }
        }
        (QPoly::new(q), QPoly::new(rem))
    }

    pub fn rem(&self, div: &QPoly) -> QPoly {
        self.divrem(div).1
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = BigRational::one() / a.lc().clone();
        a.mul_scalar(&inv)
    }

    pub fn derivative(&self) -> QPoly {
        if self.c.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Back to Z if every coefficient is integral.
    pub fn to_z_exact(&self) -> Option<ZPoly> {
        let mut c = Vec::with_capacity(self.c.len());
        for a in &self.c {
            if !a.denom().is_one() {
                return None;
            }
            c.push(a.numer().clone());
        }
        Some(ZPoly::new(c))
    }

    /// Clear denominators: returns (integer polynomial, common denominator).
    pub fn clear_denoms(&self) -> (ZPoly, BigInt) {
        let mut den = BigInt::one();
        for a in &self.c {
            den = den.lcm(a.denom());
        }
        let c = self
            .c
            .iter()
            .map(|a| a.numer() * (&den / a.denom()))
            .collect();
        (ZPoly::new(c), den)
    }
}

/// Resultant of two integer polynomials via the Sylvester determinant.
pub fn resultant(f: &ZPoly, g: &ZPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let n = f.deg();
    let m = g.deg();
    if n == 0 {
        return f.c[0].clone().pow(m as u32);
    }
    if m == 0 {
        return g.c[0].clone().pow(n as u32);
    }
    let size = n + m;
    let mut s = IMat::zero(size, size);
    for i in 0..m {
        for (j, a) in f.c.iter().rev().enumerate() {
            *s.at_mut(i, i + j) = a.clone();
        }
    }
    for i in 0..n {
        for (j, b) in g.c.iter().rev().enumerate() {
            *s.at_mut(m + i, i + j) = b.clone();
        }
    }
    det_bareiss(&s)
}

/// Discriminant of a monic integer polynomial.
pub fn discriminant(f: &ZPoly) -> BigInt {
    assert!(f.is_monic() && f.deg() >= 1);
    let n = f.deg();
    if n == 1 {
        return BigInt::one();
    }
    let r = resultant(f, &f.derivative());
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    r * BigInt::from(sign)
}

/// Euler phi for machine-sized m.
pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            phi = phi / p * (p - 1);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi = phi / n * (n - 1);
    }
    phi
}

/// m-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> ZPoly {
    assert!(m >= 1);
    // Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)} computed by exact division
    let mut num = ZPoly::one();
    let mut den = ZPoly::one();
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        let mu = moebius(m / d);
        if mu == 0 {
            continue;
        }
        let mut xd = vec![BigInt::zero(); d as usize + 1];
        xd[0] = BigInt::from(-1);
        xd[d as usize] = BigInt::one();
        let xd = ZPoly::new(xd);
        if mu == 1 {
            num = num.mul(&xd);
        } else {
            den = den.mul(&xd);
        }
    }
    num.div_exact(&den)
}

fn moebius(mut n: u64) -> i32 {
    let mut mu = 1i32;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Minimal polynomial of 2 cos(2 pi / m) over Q (monic, integer).
pub fn real_cyclotomic(m: u64) -> ZPoly {
    match m {
        1 => ZPoly::from_i64(&[-2, 1]),
        2 => ZPoly::from_i64(&[2, 1]),
        _ => {
            let phi = cyclotomic(m);
            let half = phi.deg() / 2;
            // Phi_m is palindromic for m > 2; expand in the basis
            // V_k(y) = x^k + x^-k with V_0 = 2, V_1 = y, V_k = y V_{k-1} - V_{k-2}
            let mut v_prev = ZPoly::from_i64(&[2]); // V_0
            let mut v_cur = ZPoly::x(); // V_1
            let mut acc = ZPoly::new(vec![phi.c[half].clone()]);
            for k in 1..=half {
                let vk = if k == 1 {
                    v_cur.clone()
                } else {
                    let next = ZPoly::x().mul(&v_cur).sub(&v_prev);
                    v_prev = v_cur;
                    v_cur = next.clone();
                    next
                };
                acc = acc.add(&vk.mul_scalar(&phi.c[half + k]));
            }
            acc
        }
    }
}

/// Sign of a rational (-1, 0, 1).
fn sgn(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a squarefree integer polynomial, over Q.
pub fn sturm_chain(f: &ZPoly) -> Vec<QPoly> {
    let mut chain = vec![f.to_q(), f.derivative().to_q()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut vars = 0usize;
    let mut last = 0i32;
    for p in chain {
        let s = sgn(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                vars += 1;
            }
            last = s;
        }
    }
    vars
}

/// Number of real roots of the (squarefree) polynomial in the interval (a, b].
pub fn count_roots_between(chain: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// Cauchy root bound: all real roots lie in (-M, M).
pub fn root_bound(f: &ZPoly) -> BigRational {
    let lc = BigRational::from(f.lc().clone());
    let mut m = BigRational::zero();
    for a in &f.c {
        let v = BigRational::from(a.abs());
        if v > m {
            m = v;
        }
    }
    BigRational::one() + m / lc.abs()
}

/// Isolating intervals (lo, hi) for every real root of an irreducible
/// integer polynomial of degree >= 2: one root per interval, endpoints are
/// non-roots, intervals sorted ascending and pairwise disjoint.
pub fn isolate_real_roots(f: &ZPoly) -> Vec<(BigRational, BigRational)> {
    assert!(f.deg() >= 2, "degree-1 roots are exact rationals");
    let chain = sturm_chain(f);
    let bound = root_bound(f);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = count_roots_between(&chain, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / BigRational::from(BigInt::from(2));
        // mid is never a root: f irreducible of degree >= 2 has no rational roots
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Bisect an isolating interval until its width is at most 2^-prec.
pub fn refine_root(
    f: &ZPoly,
    iv: &(BigRational, BigRational),
    prec_bits: u32,
) -> (BigRational, BigRational) {
    let two = BigRational::from(BigInt::from(2));
    let target = BigRational::new(BigInt::one(), BigInt::from(2).pow(prec_bits));
    let (mut lo, mut hi) = iv.clone();
    let s_lo = sgn(&f.eval_rat(&lo));
    if s_lo == 0 {
        // only possible for degree-1 callers; keep the point
        return (lo.clone(), lo);
    }
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let s_mid = sgn(&f.eval_rat(&mid));
        if s_mid == 0 {
            return (mid.clone(), mid);
        }
        if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Landau–Mignotte bound for coefficients of monic divisors of f.
fn mignotte_bound(f: &ZPoly) -> BigInt {
    let norm2_sq: BigInt = f.c.iter().map(|a| a * a).sum();
    let norm2 = norm2_sq.sqrt() + BigInt::one();
    norm2 << f.deg()
}

fn balance(a: &BigInt, modulus: &BigInt) -> BigInt {
    let r = a.mod_floor(modulus);
    if &r * BigInt::from(2) > *modulus {
        r - modulus
    } else {
        r
    }
}

fn fp_to_z_balanced(g: &FpPoly, modulus: &BigInt) -> ZPoly {
    ZPoly::new(g.c.iter().map(|a| balance(a, modulus)).collect())
}

/// One quadratic Hensel step: given f = g h (mod m), s g + t h = 1 (mod m),
/// h monic, returns the lift modulo m^2.
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let reduce = |p: &ZPoly| ZPoly::new(p.c.iter().map(|a| a.mod_floor(&m2)).collect());
    let modmul = |a: &ZPoly, b: &ZPoly| reduce(&a.mul(b));

    let e = reduce(&f.sub(&g.mul(h)));
    // (q, r) = divrem(s e, h) with h monic: exact over Z/m^2
    let (q, r) = monic_divrem_mod(&modmul(s, &e), h, &m2);
    let g_new = reduce(&g.add(&modmul(t, &e)).add(&modmul(&q, g)));
    let h_new = reduce(&h.add(&r));
    let b = reduce(&modmul(s, &g_new).add(&modmul(t, &h_new)).sub(&ZPoly::one()));
    let (c, d) = monic_divrem_mod(&modmul(s, &b), &h_new, &m2);
    let s_new = reduce(&s.sub(&d));
    let t_new = reduce(&t.sub(&modmul(t, &b)).sub(&modmul(&c, &g_new)));
    (g_new, h_new, s_new, t_new)
}

/// Division with remainder by a monic polynomial, coefficients mod m.
fn monic_divrem_mod(a: &ZPoly, div: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(div.is_monic());
    let mut rem: Vec<BigInt> = a.c.iter().map(|x| x.mod_floor(m)).collect();
    while rem.last().map_or(false, |x| x.is_zero()) {
        rem.pop();
    }
    if rem.len() <= div.deg() {
        return (ZPoly::zero(), ZPoly::new(rem));
    }
    let dq = rem.len() - 1 - div.deg();
    let mut q = vec![BigInt::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let top = rem[k + div.deg()].mod_floor(m);
        if top.is_zero() {
            rem[k + div.deg()] = BigInt::zero();
            continue;
        }
        q[k] = top.clone();
        for (j, dc) in div.c.iter().enumerate() {
            let idx = k + j;
            rem[idx] = (&rem[idx] - &top * dc).mod_floor(m);
        }
    }
    (ZPoly::new(q), ZPoly::new(rem))
}

/// Lift the factorization f = prod(factors) (mod p) to modulus p^N >= target,
/// f monic, factors monic and pairwise coprime mod p.
fn hensel_lift_tree(f: &ZPoly, factors: &[FpPoly], ctx: &FpCtx, target: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        // f itself reduced mod target
        return vec![ZPoly::new(f.c.iter().map(|a| a.mod_floor(target)).collect())];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let mut g0 = FpPoly::one(ctx);
    for u in left {
        g0 = g0.mul(ctx, u);
    }
    let mut h0 = FpPoly::one(ctx);
    for u in right {
        h0 = h0.mul(ctx, u);
    }
    // Bezout mod p
    let (s0, t0) = fp_bezout(ctx, &g0, &h0);
    let mut g = fp_to_z_balanced(&g0, &ctx.p);
    let mut h = fp_to_z_balanced(&h0, &ctx.p);
    let mut s = fp_to_z_balanced(&s0, &ctx.p);
    let mut t = fp_to_z_balanced(&t0, &ctx.p);
    let mut m = ctx.p.clone();
    while &m < target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let mut out = hensel_lift_tree(&g, left, ctx, target);
    out.extend(hensel_lift_tree(&h, right, ctx, target));
    out
}

/// Extended Euclid over GF(p): s g + t h = 1 for coprime g, h.
fn fp_bezout(ctx: &FpCtx, g: &FpPoly, h: &FpPoly) -> (FpPoly, FpPoly) {
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (FpPoly::one(ctx), FpPoly::zero());
    let (mut t0, mut t1) = (FpPoly::zero(), FpPoly::one(ctx));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(ctx, &r1);
        let s = s0.sub(ctx, &q.mul(ctx, &s1));
        let t = t0.sub(ctx, &q.mul(ctx, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    debug_assert_eq!(r0.deg(), 0);
    let inv = ctx.inv(r0.lc());
    (s0.mul_scalar(ctx, &inv), t0.mul_scalar(ctx, &inv))
}

/// Monic trial division over Z: Some(quotient) when div | f exactly.
fn z_monic_trial_div(f: &ZPoly, div: &ZPoly) -> Option<ZPoly> {
    if div.deg() == 0 {
        return Some(f.clone());
    }
    if f.deg() < div.deg() {
        return None;
    }
    let mut rem = f.c.clone();
    let dq = f.deg() - div.deg();
    let mut q = vec![BigInt::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let top = rem[k + div.deg()].clone();
        if top.is_zero() {
            continue;
        }
        q[k] = top.clone();
        for (j, dc) in div.c.iter().enumerate() {
            let s = &top * dc;
            rem[k + j] -= s;
        }
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(ZPoly::new(q))
    } else {
        None
    }
}

/// Irreducibility over Q of a monic integer polynomial (Zassenhaus).
pub fn is_irreducible(f: &ZPoly) -> bool {
    assert!(f.is_monic());
    let n = f.deg();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // squarefree check
    let g = f.to_q().gcd(&f.derivative().to_q());
    if g.deg() > 0 {
        return false;
    }
    let disc = discriminant(f);
    // pick an odd prime not dividing the discriminant
    let mut p = BigInt::from(3);
    loop {
        if intfact::is_prime(&p) && !(&disc % &p).is_zero() {
            break;
        }
        p += 1;
    }
    let ctx = FpCtx::new(p.clone());
    let fp = f.to_fp(&ctx);
    let factors: Vec<FpPoly> = fp::factor(&ctx, &fp).into_iter().map(|(g, _)| g).collect();
    let r = factors.len();
    if r == 1 {
        return true;
    }
    // lift to p^N > 2 * Mignotte bound
    let bound = mignotte_bound(f);
    let target = (bound * BigInt::from(2)) + BigInt::one();
    let mut modulus = p.clone();
    while modulus <= target {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift_tree(f, &factors, &ctx, &modulus);
    // subset recombination: any proper subset product dividing f over Z
    // witnesses reducibility
    let total: u32 = 1 << r;
    for mask in 1..total / 2 + 1 {
        let mask = mask as usize;
        if mask.count_ones() as usize > r / 2 + 1 {
            continue;
        }
        if mask == (1 << r) - 1 {
            continue;
        }
        let mut prod = ZPoly::one();
        for (i, fac) in lifted.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod = prod.mul(fac);
                prod = ZPoly::new(prod.c.iter().map(|a| a.mod_floor(&modulus)).collect());
            }
        }
        if prod.deg() == n || prod.deg() == 0 {
            continue;
        }
        let cand = ZPoly::new(prod.c.iter().map(|a| balance(a, &modulus)).collect());
        if z_monic_trial_div(f, &cand).is_some() {
            return false;
        }
    }
    true
}
