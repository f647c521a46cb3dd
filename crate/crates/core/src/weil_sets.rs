//! The finite exceptional sets attached to a prime power ell^f over a
//! totally real field F: the quadratics FR(ell^f) (middle coefficients
//! bounded by 2 sqrt(ell)^f at every infinite place), the trace sets
//! C(ell^f, e) of e-th power sums, the derived sets D(ell^f, e), and the
//! prime sets P(ell^f, e) and Q(ell^f, u).
//!
//! Over a totally real field the discriminant b^2 - 4 ell^f is nonpositive
//! at every embedding, so it is a square in F only when it vanishes; the
//! power-sum recurrence therefore needs no special case at the boundary
//! b^2 = 4 ell^f, where it returns 2 beta^e.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cyclotomic_data::{gating_support, CyclotomicInvariants};
use crate::error::Error;
use crate::intfact::FactorBudget;
use crate::number_field::{
    sort_primes, FieldElement, NumberField, PrimeIdealData, RealBound,
};
use crate::Result;

/// x^2 + b x + ell^f with every |sigma(b)| <= 2 sqrt(ell)^f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilQuadratic {
    pub b: FieldElement,
    pub ell: BigInt,
    pub f: u32,
}

impl WeilQuadratic {
    pub fn ell_pow_f(&self) -> BigInt {
        self.ell.clone().pow(self.f)
    }
}

/// Size and factorization limits for the prime-set computations.
#[derive(Clone, Debug)]
pub struct WeilConfig {
    /// Reject |N(x)| with more than this many decimal digits.
    pub max_norm_digits: u32,
    pub factor_budget: FactorBudget,
}

impl Default for WeilConfig {
    fn default() -> Self {
        WeilConfig {
            max_norm_digits: 60,
            factor_budget: FactorBudget::default(),
        }
    }
}

/// All quadratics x^2 + b x + ell^f with b integral and
/// |sigma(b)| <= 2 sqrt(ell^f) at every infinite place. Boundary values
/// (b^2 = 4 ell^f) are included; they exist exactly when f is even and
/// 2 ell^(f/2) is representable.
pub fn enumerate_fr(field: &NumberField, ell: &BigInt, f: u32) -> Result<Vec<WeilQuadratic>> {
    let ell_f = BigRational::from(ell.clone().pow(f));
    let two = BigRational::from(BigInt::from(2));
    let bound_hi = RealBound::sqrt_scaled(two.clone(), ell_f.clone());
    let bound_lo = RealBound::sqrt_scaled(-two, ell_f);
    let bounds: Vec<(RealBound, RealBound)> = (0..field.degree)
        .map(|_| (bound_lo.clone(), bound_hi.clone()))
        .collect();
    let bs = field.enumerate_bounded_integers(&bounds)?;
    Ok(bs
        .into_iter()
        .map(|b| WeilQuadratic {
            b,
            ell: ell.clone(),
            f,
        })
        .collect())
}

/// beta^e + conj(beta)^e via the power-sum recurrence
/// s_0 = 2, s_1 = -b, s_e = -b s_(e-1) - ell^f s_(e-2).
pub fn trace_power(field: &NumberField, w: &WeilQuadratic, e: u64) -> FieldElement {
    debug_assert!(e >= 1);
    let ell_f = field.from_int(&w.ell_pow_f());
    let minus_b = field.neg(&w.b);
    let mut prev = field.from_int(&BigInt::from(2));
    let mut cur = minus_b.clone();
    if e == 0 {
        return prev;
    }
    for _ in 1..e {
        let next = field.sub(&field.mul(&minus_b, &cur), &field.mul(&ell_f, &prev));
        prev = cur;
        cur = next;
    }
    cur
}

/// C(ell^f, e): deduplicated power-sum values over FR(ell^f), canonically
/// sorted.
pub fn compute_c(
    field: &NumberField,
    ell: &BigInt,
    f: u32,
    e: u64,
) -> Result<Vec<FieldElement>> {
    let fr = enumerate_fr(field, ell, f)?;
    let mut out: Vec<FieldElement> = fr.iter().map(|w| trace_power(field, w, e)).collect();
    field.sort_elements(&mut out);
    Ok(out)
}

/// D(ell^f, e) = {a^2, a^2 - ell^(ef), a^2 - 3 ell^(ef), a^2 - 4 ell^(ef)}.
pub fn compute_d(
    field: &NumberField,
    traces: &[FieldElement],
    ell: &BigInt,
    f: u32,
    e: u64,
) -> Vec<FieldElement> {
    let exponent = u32::try_from(e.checked_mul(f as u64).expect("exponent fits")).expect("exponent fits u32");
    let ell_ef = field.from_int(&ell.clone().pow(exponent));
    let mut out = Vec::new();
    for a in traces {
        let a2 = field.mul(a, a);
        for c in [0i64, 1, 3, 4] {
            let shift = field.mul_scalar(&ell_ef, &BigRational::from(BigInt::from(c)));
            out.push(field.sub(&a2, &shift));
        }
    }
    field.sort_elements(&mut out);
    out
}

/// P(ell^f, e): primes dividing some nonzero element of D(ell^f, e) or
/// dividing n_lcm * n_F. Fails loudly when a norm exceeds the digit budget
/// or does not factor within budget.
pub fn compute_p(
    field: &NumberField,
    invariants: &CyclotomicInvariants,
    ell: &BigInt,
    f: u32,
    e: u64,
    cfg: &WeilConfig,
) -> Result<Vec<PrimeIdealData>> {
    let traces = compute_c(field, ell, f, e)?;
    let d_set = compute_d(field, &traces, ell, f, e);
    let digit_cap = BigInt::from(10).pow(cfg.max_norm_digits);
    let mut out = gating_support(field, invariants, &cfg.factor_budget)?;
    for x in &d_set {
        if x.is_zero() {
            continue;
        }
        let n = field.norm_int(x).abs();
        if n > digit_cap {
            return Err(Error::BudgetExceeded(format!(
                "norm of trace-set element exceeds 10^{} (ell={ell}, f={f}, e={e})",
                cfg.max_norm_digits
            )));
        }
        let support = field.element_support(x, &cfg.factor_budget)?;
        out.extend(support);
    }
    sort_primes(&mut out);
    Ok(out)
}

/// Q(ell^f, u) = union over i = 1..d of P(ell^f, u (n_lcm/6) h'_k i).
pub fn compute_q(
    field: &NumberField,
    invariants: &CyclotomicInvariants,
    h_exp_k: &BigInt,
    ell: &BigInt,
    f: u32,
    u: u8,
    cfg: &WeilConfig,
) -> Result<Vec<PrimeIdealData>> {
    let n_lcm = &invariants.nlcm.n_lcm;
    let six = BigInt::from(6);
    debug_assert!((n_lcm % &six).is_zero());
    let base = BigInt::from(u as u32) * (n_lcm / six) * h_exp_k;
    let mut out = Vec::new();
    for i in 1..=field.degree as u64 {
        let e_big = &base * BigInt::from(i);
        let e = u64::try_from(e_big.clone()).map_err(|_| {
            Error::BudgetExceeded(format!("exponent {e_big} too large (term i={i})"))
        })?;
        let term = compute_p(field, invariants, ell, f, e, cfg).map_err(|err| match err {
            Error::BudgetExceeded(m) => Error::BudgetExceeded(format!("{m} (term i={i})")),
            other => other,
        })?;
        out.extend(term);
    }
    sort_primes(&mut out);
    Ok(out)
}

/// Outcome of the exceptional-case audit over FR(ell^f).
#[derive(Clone, Debug)]
pub struct DichotomyReport {
    pub checked: usize,
    /// Quadratics whose power sum squared equals c * ell^(ef), c in {0,1,3,4},
    /// together with the witnessing c.
    pub boundary_hits: Vec<(WeilQuadratic, u8)>,
    /// Hits where (b^2 - 4 ell^f)(-ell) failed the exact square test; any
    /// entry is an implementation bug witness.
    pub violations: Vec<WeilQuadratic>,
}

/// For every quadratic in FR(ell^f) whose e-th power sum a satisfies
/// a^2 = c ell^(ef) with c in {0, 1, 3, 4}, verify that F(beta) equals
/// F(sqrt(-ell)), i.e. that (b^2 - 4 ell^f)(-ell) is an exact square in F.
/// Requires ell odd, coprime to the field discriminant, and f odd.
pub fn check_lemma_dichotomy(
    field: &NumberField,
    ell: &BigInt,
    f: u32,
    e: u64,
) -> Result<DichotomyReport> {
    if f % 2 == 0 {
        return Err(Error::InvalidInput("f must be odd".to_string()));
    }
    let two_disc = BigInt::from(2) * &field.field_discriminant;
    if (&two_disc % ell).is_zero() {
        return Err(Error::InvalidInput(
            "ell must not divide 2 d_{F/Q}".to_string(),
        ));
    }
    let fr = enumerate_fr(field, ell, f)?;
    let exponent = u32::try_from(e * f as u64).expect("exponent fits");
    let ell_ef = field.from_int(&ell.clone().pow(exponent));
    let ell_f = field.from_int(&ell.clone().pow(f));
    let four = BigRational::from(BigInt::from(4));
    let mut report = DichotomyReport {
        checked: 0,
        boundary_hits: Vec::new(),
        violations: Vec::new(),
    };
    for w in fr {
        report.checked += 1;
        let a = trace_power(field, &w, e);
        let a2 = field.mul(&a, &a);
        let mut hit: Option<u8> = None;
        for c in [0u8, 1, 3, 4] {
            let target = field.mul_scalar(&ell_ef, &BigRational::from(BigInt::from(c as i64)));
            if a2 == target {
                hit = Some(c);
                break;
            }
        }
        let Some(c) = hit else { continue };
        report.boundary_hits.push((w.clone(), c));
        // x = (b^2 - 4 ell^f)(-ell) must be a square in F
        let b2 = field.mul(&w.b, &w.b);
        let disc = field.sub(&b2, &field.mul_scalar(&ell_f, &four));
        let x = field.mul(&disc, &field.from_int(&-ell.clone()));
        if !has_exact_square_root(field, &x)? {
            report.violations.push(w);
        }
    }
    Ok(report)
}

/// Whether a totally nonnegative integral element is a square in O_F,
/// decided by bounded enumeration plus exact comparison.
fn has_exact_square_root(field: &NumberField, x: &FieldElement) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    // rational upper bound R >= sqrt(sigma_j(x)) for every j
    let prec = 64;
    let mut r_up = BigRational::zero();
    for j in 0..field.signature.0 {
        let iv = field.embed_interval(x, j, prec);
        if iv.hi.is_negative() {
            return Ok(false);
        }
        let s = crate::interval::sqrt_interval(&iv.hi.max(BigRational::zero()), prec).hi;
        if s > r_up {
            r_up = s;
        }
    }
    let bounds: Vec<(RealBound, RealBound)> = (0..field.degree)
        .map(|_| {
            (
                RealBound::rational(-r_up.clone()),
                RealBound::rational(r_up.clone()),
            )
        })
        .collect();
    for y in field.enumerate_bounded_integers(&bounds)? {
        if &field.mul(&y, &y) == x {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::number_field::construct_field;
    use crate::poly::ZPoly;

    fn rationals() -> NumberField {
        construct_field(&ZPoly::from_i64(&[0, 1]), None).unwrap()
    }

    fn int_value(x: &FieldElement) -> BigInt {
        x.coords[0].numer().clone()
    }

    #[test]
    fn fr_over_q() {
        let q = rationals();
        // 2 sqrt(5) = 4.47...: b in {-4..4}
        let fr = enumerate_fr(&q, &BigInt::from(5), 1).unwrap();
        assert_eq!(fr.len(), 9);
        // 2 sqrt(4) = 4 exactly: boundary included
        let fr = enumerate_fr(&q, &BigInt::from(2), 2).unwrap();
        let bs: Vec<BigInt> = fr.iter().map(|w| int_value(&w.b)).collect();
        assert_eq!(fr.len(), 9);
        assert!(bs.contains(&BigInt::from(4)) && bs.contains(&BigInt::from(-4)));
        // 2 sqrt(3) = 3.46...
        let fr = enumerate_fr(&q, &BigInt::from(3), 1).unwrap();
        assert_eq!(fr.len(), 7);
    }

    #[test]
    fn trace_power_examples() {
        let q = rationals();
        // b = 0, ell^f = 5: beta = sqrt(-5), s_2 = -10
        let w = WeilQuadratic {
            b: q.zero(),
            ell: BigInt::from(5),
            f: 1,
        };
        assert_eq!(int_value(&trace_power(&q, &w, 2)), BigInt::from(-10));
        // b = -1: s_2 = b^2 - 2*5 = -9
        let w = WeilQuadratic {
            b: q.from_int(&BigInt::from(-1)),
            ell: BigInt::from(5),
            f: 1,
        };
        assert_eq!(int_value(&trace_power(&q, &w, 2)), BigInt::from(-9));
        // boundary b = -4, ell^f = 4: beta = 2 double root, s_3 = 2 * 8 = 16
        let w = WeilQuadratic {
            b: q.from_int(&BigInt::from(-4)),
            ell: BigInt::from(2),
            f: 2,
        };
        assert_eq!(int_value(&trace_power(&q, &w, 3)), BigInt::from(16));
    }

    #[test]
    fn c_sets_over_q() {
        let q = rationals();
        let c1: Vec<BigInt> = compute_c(&q, &BigInt::from(5), 1, 1)
            .unwrap()
            .iter()
            .map(int_value)
            .collect();
        let mut expect: Vec<BigInt> = (-4..=4).map(BigInt::from).collect();
        // canonical order: |norm| then coords
        expect.sort_by_key(|x| (x.abs(), x.clone()));
        assert_eq!(c1, expect);
        let c2: Vec<BigInt> = compute_c(&q, &BigInt::from(5), 1, 2)
            .unwrap()
            .iter()
            .map(int_value)
            .collect();
        let mut expect: Vec<BigInt> = [-10i64, -9, -6, -1, 6].iter().map(|&x| BigInt::from(x)).collect();
        expect.sort_by_key(|x| (x.abs(), x.clone()));
        assert_eq!(c2, expect);
        let c3: Vec<BigInt> = compute_c(&q, &BigInt::from(2), 1, 1)
            .unwrap()
            .iter()
            .map(int_value)
            .collect();
        assert_eq!(c3.len(), 5);
    }

    #[test]
    fn c_at_exponent_one_is_negated_fr() {
        let q = rationals();
        for ell in [2i64, 5, 7] {
            let fr = enumerate_fr(&q, &BigInt::from(ell), 1).unwrap();
            let mut negated: Vec<FieldElement> = fr.iter().map(|w| q.neg(&w.b)).collect();
            q.sort_elements(&mut negated);
            let c = compute_c(&q, &BigInt::from(ell), 1, 1).unwrap();
            assert_eq!(c, negated);
        }
    }

    #[test]
    fn traces_negation_closed_for_odd_e() {
        let q = rationals();
        for e in [1u64, 3, 5] {
            let c = compute_c(&q, &BigInt::from(3), 1, e).unwrap();
            for a in &c {
                let neg = q.neg(a);
                assert!(c.contains(&neg), "e = {e}");
            }
        }
    }

    #[test]
    fn lucas_matches_quadratic_ring_oracle() {
        // direct exponentiation in O_F[x]/(x^2 + b x + ell^f)
        let q = rationals();
        for ell in [2i64, 3, 5] {
            for f in [1u32, 2] {
                let fr = enumerate_fr(&q, &BigInt::from(ell), f).unwrap();
                for w in &fr {
                    for e in 1u64..=8 {
                        let got = trace_power(&q, w, e);
                        let expect = oracle_trace(&q, w, e);
                        assert_eq!(got, expect, "ell={ell} f={f} e={e}");
                    }
                }
            }
        }
    }

    fn oracle_trace(field: &NumberField, w: &WeilQuadratic, e: u64) -> FieldElement {
        // beta^e = u + v beta; beta^2 = -b beta - ell^f
        let ell_f = field.from_int(&w.ell_pow_f());
        let b = &w.b;
        let mut u = field.one();
        let mut v = field.zero();
        for _ in 0..e {
            // (u + v beta) * beta = -ell^f v + (u - b v) beta
            let nu = field.neg(&field.mul(&ell_f, &v));
            let nv = field.sub(&u, &field.mul(b, &v));
            u = nu;
            v = nv;
        }
        // s_e = 2u + v(beta + conj) = 2u - v b
        field.sub(
            &field.mul_scalar(&u, &BigRational::from(BigInt::from(2))),
            &field.mul(&v, b),
        )
    }

    #[test]
    fn p_set_example() {
        let q = rationals();
        let inv = crate::cyclotomic_data::compute_n_f(&q, &FactorBudget::default()).unwrap();
        let p = compute_p(&q, &inv, &BigInt::from(5), 1, 1, &WeilConfig::default()).unwrap();
        let under: Vec<BigInt> = p.iter().map(|x| x.under.clone()).collect();
        let expect: Vec<BigInt> = [2i64, 3, 5, 7, 11, 19]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        assert_eq!(under, expect);
    }

    #[test]
    fn q_set_single_term_over_q() {
        let q = rationals();
        let inv = crate::cyclotomic_data::compute_n_f(&q, &FactorBudget::default()).unwrap();
        // k = Q(i): h' = 1, u = 2: Q(5, 2) = P(5, 2*2*1*1) = P(5, 4)
        let qset = compute_q(
            &q,
            &inv,
            &BigInt::one(),
            &BigInt::from(5),
            1,
            2,
            &WeilConfig::default(),
        )
        .unwrap();
        let pset = compute_p(&q, &inv, &BigInt::from(5), 1, 4, &WeilConfig::default()).unwrap();
        assert_eq!(
            qset.iter().map(|x| x.under.clone()).collect::<Vec<_>>(),
            pset.iter().map(|x| x.under.clone()).collect::<Vec<_>>()
        );
        // gating support always included
        assert!(qset.iter().any(|p| p.under == BigInt::from(2)));
        assert!(qset.iter().any(|p| p.under == BigInt::from(3)));
    }

    #[test]
    fn p_set_over_quadratic_field_matches_bruteforce() {
        // Q(sqrt5) with the monogenic model; small parameters so the
        // brute-force support check stays cheap
        let f = construct_field(&ZPoly::from_i64(&[-1, -1, 1]), None).unwrap();
        let inv = crate::cyclotomic_data::compute_n_f(&f, &FactorBudget::default()).unwrap();
        let got = compute_p(&f, &inv, &BigInt::from(11), 1, 1, &WeilConfig::default()).unwrap();
        // independent recomputation: trial-divide every nonzero D-element
        // norm and collect primes by membership
        let traces = compute_c(&f, &BigInt::from(11), 1, 1).unwrap();
        let d_set = compute_d(&f, &traces, &BigInt::from(11), 1, 1);
        let mut expected: Vec<(BigInt, usize)> = inv
            .n_f_support
            .iter()
            .map(|p| (p.under.clone(), p.index))
            .collect();
        // n_lcm = 60 adds the primes above 2, 3, 5 (already in the support)
        for x in &d_set {
            if x.is_zero() {
                continue;
            }
            let mut n = f.norm_int(x).abs();
            let mut q = BigInt::from(2);
            while &q * &q <= n {
                if (&n % &q).is_zero() {
                    while (&n % &q).is_zero() {
                        n = &n / &q;
                    }
                    for pr in f.factor_rational_prime(&q).unwrap() {
                        if f.ideal_contains(&pr.ideal, x)
                            && !expected.contains(&(pr.under.clone(), pr.index))
                        {
                            expected.push((pr.under.clone(), pr.index));
                        }
                    }
                }
                q += 1;
            }
            if n > BigInt::from(1) {
                for pr in f.factor_rational_prime(&n).unwrap() {
                    if f.ideal_contains(&pr.ideal, x)
                        && !expected.contains(&(pr.under.clone(), pr.index))
                    {
                        expected.push((pr.under.clone(), pr.index));
                    }
                }
            }
        }
        let got_pairs: Vec<(BigInt, usize)> =
            got.iter().map(|p| (p.under.clone(), p.index)).collect();
        let mut expected_sorted = expected;
        expected_sorted.sort();
        let mut got_sorted = got_pairs.clone();
        got_sorted.sort();
        assert_eq!(got_sorted, expected_sorted);
        // a split prime must appear with both indices somewhere or the set
        // distinguishes conjugates: 11 splits and divides ell^(ef) elements
        assert!(got_pairs.iter().any(|(p, _)| *p == BigInt::from(11)));
    }

    #[test]
    fn digit_budget_is_loud() {
        let q = rationals();
        let inv = crate::cyclotomic_data::compute_n_f(&q, &FactorBudget::default()).unwrap();
        let tight = WeilConfig {
            max_norm_digits: 1,
            factor_budget: FactorBudget::default(),
        };
        match compute_p(&q, &inv, &BigInt::from(5), 1, 2, &tight) {
            Err(Error::BudgetExceeded(_)) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn dichotomy_over_q() {
        let q = rationals();
        // (Q, 5, 1, 2): b = 0 gives s_2 = -10, a^2 = 100 = 4 * 25
        let rep = check_lemma_dichotomy(&q, &BigInt::from(5), 1, 2).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep
            .boundary_hits
            .iter()
            .any(|(w, c)| w.b.is_zero() && *c == 4));
        // (Q, 7, 1, 1): b = 0 gives s_1 = 0, c = 0 case
        let rep = check_lemma_dichotomy(&q, &BigInt::from(7), 1, 1).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep
            .boundary_hits
            .iter()
            .any(|(w, c)| w.b.is_zero() && *c == 0));
        // (Q, 13, 1, 3): exhaustive scan, zero violations
        let rep = check_lemma_dichotomy(&q, &BigInt::from(13), 1, 3).unwrap();
        assert!(rep.violations.is_empty());
        // preconditions enforced
        assert!(check_lemma_dichotomy(&q, &BigInt::from(5), 2, 1).is_err());
        assert!(check_lemma_dichotomy(&q, &BigInt::from(2), 1, 1).is_err());
    }
}
