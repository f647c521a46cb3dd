//! Ideal class groups at desk scale.
//!
//! The class group is computed from the factor base of primes below the
//! Minkowski bound and relations harvested by factoring principal ideals of
//! enumerated small elements; the structure comes from the Smith normal form
//! of the relation lattice. Every run verifies that P^(exponent) is
//! principal for each factor-base prime. An independent oracle counts and
//! composes reduced binary quadratic forms for imaginary quadratic fields.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::intfact::{self, FactorBudget};
use crate::interval::sqrt_interval;
use crate::linalg::{hnf_rows, smith_normal_form, solve_integer, IMat};
use crate::number_field::{FieldElement, IdealData, NumberField, PrimeIdealData};
use crate::Result;

/// Search limits for the relation harvest.
#[derive(Clone, Debug)]
pub struct ClassGroupConfig {
    pub max_degree: usize,
    pub max_disc_abs: BigInt,
    /// Largest coordinate shell scanned for relation elements.
    pub max_shell: i64,
    /// Complete shells after full rank with no lattice change before stopping.
    pub stability_shells: i64,
    /// Extra relations verified against the final lattice.
    pub verify_relations: usize,
    pub factor_budget: FactorBudget,
}

impl Default for ClassGroupConfig {
    fn default() -> Self {
        ClassGroupConfig {
            max_degree: 4,
            max_disc_abs: BigInt::from(100_000_000u64),
            max_shell: 24,
            stability_shells: 3,
            verify_relations: 10,
            factor_budget: FactorBudget {
                trial_bound: 50_000,
                rho_iterations: 200_000,
            },
        }
    }
}

/// Computed class group with the data needed for discrete logarithms.
#[derive(Clone, Debug)]
pub struct ClassGroupData {
    /// Nontrivial elementary divisors d1 | d2 | ...
    pub elementary_divisors: Vec<BigInt>,
    pub h: BigInt,
    pub h_exp: BigInt,
    pub factor_base: Vec<PrimeIdealData>,
    pub relation_matrix: IMat,
    pub relation_elements: Vec<FieldElement>,
    snf_diag: Vec<BigInt>,
    snf_right: IMat,
}

impl ClassGroupData {
    /// Class of a factor-base exponent vector in SNF coordinates; empty
    /// vector means the class is trivial.
    pub fn class_residues(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.factor_base.len();
        debug_assert_eq!(v.len(), n);
        if n == 0 {
            return vec![];
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = BigInt::zero();
            for (j, vj) in v.iter().enumerate() {
                s += vj * self.snf_right.at(j, i);
            }
            out.push(s.mod_floor(&self.snf_diag[i]));
        }
        out
    }

    pub fn is_trivial_class(&self, v: &[BigInt]) -> bool {
        self.class_residues(v).iter().all(|r| r.is_zero())
    }
}

/// Rational upper bound for the Minkowski constant
/// (4/pi)^r2 (d!/d^d) sqrt(|disc|).
pub fn minkowski_bound(k: &NumberField) -> BigRational {
    let d = k.degree as u32;
    let r2 = k.signature.1 as u32;
    // lower bound of pi, so the quotient is an upper bound
    let pi_lo = BigRational::new(BigInt::from(314159265358979i64), BigInt::from(10i64).pow(14));
    let four_over_pi = BigRational::from(BigInt::from(4)) / pi_lo;
    let mut fact = BigInt::one();
    for i in 2..=d {
        fact *= BigInt::from(i);
    }
    let ratio = BigRational::new(fact, BigInt::from(k.degree as u64).pow(d));
    let sqrt_up = sqrt_interval(
        &BigRational::from(k.field_discriminant.abs()),
        64,
    )
    .hi;
    let mut out = ratio * sqrt_up;
    for _ in 0..r2 {
        out = out * four_over_pi.clone();
    }
    out
}

/// Factor base: all primes of norm at most the Minkowski bound.
pub fn factor_base(k: &NumberField) -> Result<Vec<PrimeIdealData>> {
    let bound = minkowski_bound(k);
    let bound_floor = bound.floor().to_integer();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while p <= bound_floor {
        if intfact::is_prime(&p) {
            for pr in k.factor_rational_prime(&p)? {
                if BigRational::from(pr.norm()) <= bound {
                    out.push(pr);
                }
            }
        }
        p += 1;
    }
    Ok(out)
}

/// Exponent vector of the integral element x over the factor base, or None
/// when (x) has support outside the base.
fn smooth_vector(
    k: &NumberField,
    fb: &[PrimeIdealData],
    x: &FieldElement,
    budget: &FactorBudget,
) -> Option<Vec<BigInt>> {
    let n = k.norm_int(x).abs();
    if n.is_one() {
        return Some(vec![BigInt::zero(); fb.len()]);
    }
    let rational_primes = intfact::prime_support(&n, budget).ok()?;
    let max_fb_p = fb.iter().map(|p| p.under.clone()).max()?;
    if rational_primes.iter().any(|p| p > &max_fb_p) {
        return None;
    }
    let mut v = vec![BigInt::zero(); fb.len()];
    let mut check = BigInt::one();
    for (i, pr) in fb.iter().enumerate() {
        if rational_primes.contains(&pr.under) {
            let val = k.element_valuation(x, pr);
            if val > 0 {
                v[i] = BigInt::from(val);
                check *= pr.norm().pow(val);
            }
        }
    }
    if check == n {
        Some(v)
    } else {
        None
    }
}

/// Compute the class group. Relations are harvested deterministically over
/// expanding coordinate shells, sorted before the Smith normal form, and the
/// result is verified by exhibiting a generator of P^h_exp for every
/// factor-base prime.
pub fn class_group(k: &NumberField) -> Result<ClassGroupData> {
    class_group_with(k, &ClassGroupConfig::default())
}

pub fn class_group_with(k: &NumberField, cfg: &ClassGroupConfig) -> Result<ClassGroupData> {
    if k.degree > cfg.max_degree {
        return Err(Error::BudgetExceeded(
            "field degree above class group desk-scale limit".to_string(),
        ));
    }
    if k.field_discriminant.abs() > cfg.max_disc_abs {
        return Err(Error::BudgetExceeded(
            "discriminant above class group desk-scale limit".to_string(),
        ));
    }
    let fb = factor_base(k)?;
    let n = fb.len();
    if n == 0 {
        return Ok(ClassGroupData {
            elementary_divisors: vec![],
            h: BigInt::one(),
            h_exp: BigInt::one(),
            factor_base: fb,
            relation_matrix: IMat::zero(0, 0),
            relation_elements: vec![],
            snf_diag: vec![],
            snf_right: IMat::zero(0, 0),
        });
    }

    let d = k.degree;
    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    let mut elements: Vec<FieldElement> = Vec::new();
    let mut clean_shells = 0i64;
    let mut last_hnf: Option<IMat> = None;

    'shells: for radius in 1..=cfg.max_shell {
        let mut shell_changed = false;
        let mut counter = vec![-radius; d];
        'odo: loop {
            // canonical representative: first nonzero coordinate positive
            let first_nz = counter.iter().find(|&&c| c != 0).copied();
            let on_shell = counter.iter().any(|&c| c.abs() == radius);
            if on_shell && first_nz.map_or(false, |c| c > 0) {
                let coords: Vec<BigInt> = counter.iter().map(|&c| BigInt::from(c)).collect();
                let x = k.element_from_int_coords(&coords);
                if let Some(v) = smooth_vector(k, &fb, &x, &cfg.factor_budget) {
                    relations.push(v);
                    elements.push(x);
                    let mut sorted = relations.clone();
                    sorted.sort();
                    let h = hnf_rows(&IMat::from_rows(sorted));
                    if last_hnf.as_ref() != Some(&h) {
                        shell_changed = true;
                        last_hnf = Some(h);
                    }
                }
            }
            for i in 0..d {
                counter[i] += 1;
                if counter[i] <= radius {
                    continue 'odo;
                }
                counter[i] = -radius;
            }
            break;
        }
        let full_rank = last_hnf.as_ref().map_or(false, |h| h.rows == n);
        if full_rank && !shell_changed {
            clean_shells += 1;
            if clean_shells >= cfg.stability_shells {
                break 'shells;
            }
        } else {
            clean_shells = 0;
        }
    }

    let Some(hnf) = last_hnf else {
        return Err(Error::RelationSearchBudgetExceeded);
    };
    if hnf.rows < n || clean_shells < cfg.stability_shells {
        return Err(Error::RelationSearchBudgetExceeded);
    }

    // extra relations from products of harvested elements must already lie
    // in the lattice
    {
        let mut rng = crate::rng::XorShift64::new(0x9e3779b97f4a7c15);
        let mut checked = 0usize;
        let mut tries = 0usize;
        while checked < cfg.verify_relations && tries < 8 * cfg.verify_relations {
            tries += 1;
            if elements.is_empty() {
                break;
            }
            let i = (rng.next_u64() as usize) % elements.len();
            let j = (rng.next_u64() as usize) % elements.len();
            let prod = k.mul(&elements[i], &elements[j]);
            let Some(v) = smooth_vector(k, &fb, &prod, &cfg.factor_budget) else {
                continue;
            };
            let mut with_extra = relations.clone();
            with_extra.push(v);
            with_extra.sort();
            let h2 = hnf_rows(&IMat::from_rows(with_extra));
            if h2 != hnf {
                return Err(Error::RelationSearchBudgetExceeded);
            }
            checked += 1;
        }
    }

    let snf = smith_normal_form(&hnf);
    let h: BigInt = snf.diag.iter().product();
    debug_assert!(!h.is_zero());
    let mut divisors: Vec<BigInt> = snf
        .diag
        .iter()
        .filter(|v| !v.is_one())
        .cloned()
        .collect();
    divisors.sort();
    let h_exp = divisors.last().cloned().unwrap_or_else(BigInt::one);

    let mut sorted_rel = relations.clone();
    sorted_rel.sort();
    let cg = ClassGroupData {
        elementary_divisors: divisors,
        h,
        h_exp,
        factor_base: fb,
        relation_matrix: IMat::from_rows(relations),
        relation_elements: elements,
        snf_diag: snf.diag,
        snf_right: snf.right,
    };

    // verification: every factor-base class killed by the exponent
    let exp = cg
        .h_exp
        .to_u32_digits()
        .1
        .first()
        .copied()
        .unwrap_or(1)
        .min(u32::MAX);
    for pr in &cg.factor_base {
        let pe = k.ideal_pow(&pr.ideal, exp);
        if is_principal_with(k, &cg, &pe)?.is_none() {
            return Err(Error::RelationSearchBudgetExceeded);
        }
    }
    Ok(cg)
}

/// Decide principality and produce a generator, using a precomputed class
/// group for the discrete-logarithm step.
pub fn is_principal_with(
    k: &NumberField,
    cg: &ClassGroupData,
    ideal: &IdealData,
) -> Result<Option<FieldElement>> {
    let d = k.degree;
    let n0 = ideal.norm.clone();
    let budget = FactorBudget::default();
    // enumerate beta in the ideal over expanding shells
    for radius in 1..=32i64 {
        let mut counter = vec![-radius; d];
        'odo: loop {
            let on_shell = counter.iter().any(|&c| c.abs() == radius);
            let first_nz = counter.iter().find(|&&c| c != 0).copied();
            if on_shell && first_nz.map_or(false, |c| c > 0) {
                // beta = sum counter_i * (HNF row i)
                let mut beta = k.zero();
                for (i, &c) in counter.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let row = k.ideal_row_element(ideal, i);
                    beta = k.add(&beta, &k.mul_scalar(&row, &BigRational::from(BigInt::from(c))));
                }
                if !beta.is_zero() {
                    let nb = k.norm_int(&beta).abs();
                    // N(I) divides the norm of any element of I
                    let (q, r) = nb.div_rem(&n0);
                    assert!(r.is_zero());
                    if let Some(result) = try_beta(k, cg, ideal, &beta, &q, &budget)? {
                        return Ok(result);
                    }
                }
            }
            for i in 0..d {
                counter[i] += 1;
                if counter[i] <= radius {
                    continue 'odo;
                }
                counter[i] = -radius;
            }
            break;
        }
    }
    Err(Error::RelationSearchBudgetExceeded)
}

/// Standalone principality test; computes the class group internally.
pub fn is_principal(k: &NumberField, ideal: &IdealData) -> Result<Option<FieldElement>> {
    let cg = class_group(k)?;
    is_principal_with(k, &cg, ideal)
}

/// Attempt the discrete-log route through one candidate beta in I:
/// (beta) = I * J with N(J) = cofactor. Returns Ok(Some(answer)) when this
/// beta decides the question.
fn try_beta(
    k: &NumberField,
    cg: &ClassGroupData,
    ideal: &IdealData,
    beta: &FieldElement,
    cofactor: &BigInt,
    budget: &FactorBudget,
) -> Result<Option<Option<FieldElement>>> {
    let fb = &cg.factor_base;
    // J-vector over the factor base
    let mut w = vec![BigInt::zero(); fb.len()];
    let mut check = BigInt::one();
    if !cofactor.is_one() {
        let Ok(support) = intfact::prime_support(cofactor, budget) else {
            return Ok(None);
        };
        let max_fb_p = fb.iter().map(|p| p.under.clone()).max();
        match max_fb_p {
            None => return Ok(None), // nontrivial cofactor but empty base
            Some(maxp) => {
                if support.iter().any(|p| p > &maxp) {
                    return Ok(None);
                }
            }
        }
        for (i, pr) in fb.iter().enumerate() {
            if support.contains(&pr.under) {
                let vb = k.element_valuation(beta, pr);
                let vi = k.ideal_valuation(ideal, pr);
                if vb < vi {
                    return Ok(None);
                }
                let diff = vb - vi;
                if diff > 0 {
                    w[i] = BigInt::from(diff);
                    check *= pr.norm().pow(diff);
                }
            }
        }
        if &check != cofactor {
            return Ok(None);
        }
    }
    // class of I = -class of J
    if !cg.is_trivial_class(&w) {
        return Ok(Some(None));
    }
    // construct gamma with (gamma) = J
    let gamma = if cg.relation_elements.is_empty() || w.iter().all(|x| x.is_zero()) {
        if w.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        k.one()
    } else {
        let rt = cg.relation_matrix.transpose();
        let Some(coeffs) = solve_integer(&rt, &w) else {
            return Ok(None);
        };
        let mut num = k.one();
        let mut den = k.one();
        for (r, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = c.abs().to_u32_digits().1.first().copied().unwrap_or(0) as u64;
            let pw = k.pow(&cg.relation_elements[r], e);
            if c.is_positive() {
                num = k.mul(&num, &pw);
            } else {
                den = k.mul(&den, &pw);
            }
        }
        k.div(&num, &den)?
    };
    // generator candidate: beta / gamma
    let g = k.div(beta, &gamma)?;
    if !g.is_integral() {
        return Ok(None);
    }
    let gi = k.principal_ideal(&g)?;
    if k.ideal_eq(&gi, ideal) {
        Ok(Some(Some(g)))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// binary quadratic form oracle
// ---------------------------------------------------------------------------

/// A primitive positive-definite binary quadratic form (a, b, c).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bqf {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Bqf {
    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }
}

/// Reduce a positive definite form.
pub fn reduce_form(f: &Bqf) -> Bqf {
    let mut a = f.a.clone();
    let mut b = f.b.clone();
    let mut c = f.c.clone();
    let d = f.disc();
    loop {
        // normalize: -a < b <= a
        if b > a || b <= -a.clone() {
            let two_a = BigInt::from(2) * &a;
            let mut bn = b.mod_floor(&two_a);
            if bn > a {
                bn -= &two_a;
            }
            b = bn;
            c = (&b * &b - &d) / (BigInt::from(4) * &a);
        }
        if a > c {
            let t = a;
            a = c;
            b = -b;
            c = t;
            continue;
        }
        break;
    }
    if (a == c || b.abs() == a) && b.is_negative() {
        b = -b;
    }
    Bqf { a, b, c }
}

/// All reduced primitive forms of the given negative fundamental
/// discriminant, sorted.
pub fn reduced_forms(disc: &BigInt) -> Vec<Bqf> {
    debug_assert!(disc.is_negative());
    let mut out = Vec::new();
    let abs_d = disc.abs();
    let a_bound = (abs_d.clone() / BigInt::from(3)).sqrt() + BigInt::one();
    let mut a = BigInt::one();
    while a <= a_bound {
        let mut b = -a.clone() + 1;
        while b <= a {
            let num: BigInt = &b * &b - disc;
            let den: BigInt = BigInt::from(4) * &a;
            if (num.clone() % den.clone()).is_zero() {
                let c = num / den;
                if c >= a {
                    let g = a.gcd(&b).gcd(&c);
                    let skip = (b.is_negative() && (b.abs() == a || a == c)) || !g.is_one();
                    if !skip {
                        out.push(Bqf {
                            a: a.clone(),
                            b: b.clone(),
                            c,
                        });
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    out
}

fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<BigInt> {
    let g = m1.gcd(m2);
    if !((r2 - r1).mod_floor(&g)).is_zero() {
        return None;
    }
    let lcm = m1 / &g * m2;
    let e = (m1 / &g).extended_gcd(&(m2 / &g));
    // x = r1 + m1 * t where t = ((r2 - r1)/g) * inv(m1/g) mod (m2/g)
    let t = ((r2 - r1) / &g * &e.x).mod_floor(&(m2 / &g));
    Some((r1 + m1 * t).mod_floor(&lcm))
}

/// Dirichlet composition of two forms of the same discriminant.
pub fn compose_forms(f1: &Bqf, f2: &Bqf) -> Bqf {
    let d = f1.disc();
    debug_assert_eq!(d, f2.disc());
    // arrange gcd(a1, a2) = 1 by replacing f2 with an equivalent form
    let f2 = if f1.a.gcd(&f2.a).is_one() {
        f2.clone()
    } else {
        equivalent_with_coprime_lead(f2, &f1.a)
    };
    let (a1, b1) = (&f1.a, &f1.b);
    let (a2, b2) = (&f2.a, &f2.b);
    let two_a1 = BigInt::from(2) * a1;
    let two_a2 = BigInt::from(2) * a2;
    let b = crt(b1, &two_a1, b2, &two_a2).expect("forms of equal discriminant are concordant");
    let a3 = a1 * a2;
    let c3 = (&b * &b - &d) / (BigInt::from(4) * &a3);
    reduce_form(&Bqf { a: a3, b, c: c3 })
}

/// Equivalent form whose leading coefficient is coprime to m.
fn equivalent_with_coprime_lead(f: &Bqf, m: &BigInt) -> Bqf {
    let bound = 24i64;
    for x in -bound..=bound {
        for y in -bound..=bound {
            let xg = BigInt::from(x);
            let yg = BigInt::from(y);
            if xg.gcd(&yg) != BigInt::one() {
                continue;
            }
            let val = f.eval(&xg, &yg);
            if val.is_positive() && val.gcd(m).is_one() {
                // complete (x, y) to a unimodular matrix [[x, beta],[y, delta]]
                let e = xg.extended_gcd(&yg);
                // e.x * x + e.y * y = 1 -> delta = e.x, beta = -e.y
                let delta = e.x.clone();
                let beta = -e.y.clone();
                debug_assert_eq!(&xg * &delta - &beta * &yg, BigInt::one());
                let two = BigInt::from(2);
                let a2 = val;
                let b2 = &two * &f.a * &xg * &beta
                    + &f.b * (&xg * &delta + &beta * &yg)
                    + &two * &f.c * &yg * &delta;
                let c2 = f.eval(&beta, &delta);
                return Bqf {
                    a: a2,
                    b: b2,
                    c: c2,
                };
            }
        }
    }
    unreachable!("primitive forms represent values coprime to any integer");
}

/// Structure (nontrivial elementary divisors, ascending) of the form class
/// group of a negative fundamental discriminant.
pub fn form_class_group_oracle(disc: &BigInt) -> Result<Vec<BigInt>> {
    if !disc.is_negative() {
        return Err(Error::InvalidInput("discriminant must be negative".to_string()));
    }
    let m = disc.mod_floor(&BigInt::from(4));
    if !(m.is_zero() || m.is_one()) {
        return Err(Error::InvalidInput("not a discriminant".to_string()));
    }
    let forms = reduced_forms(disc);
    let h = forms.len();
    if h == 1 {
        return Ok(vec![]);
    }
    let identity = {
        let b0 = disc.mod_floor(&BigInt::from(2));
        reduce_form(&Bqf {
            a: BigInt::one(),
            b: b0.clone(),
            c: (&b0 * &b0 - disc) / BigInt::from(4),
        })
    };
    let pow_form = |f: &Bqf, e: &BigInt| -> Bqf {
        let mut result = identity.clone();
        let mut base = f.clone();
        let mut n = e.clone();
        while n.is_positive() {
            if n.is_odd() {
                result = compose_forms(&result, &base);
            }
            base = compose_forms(&base, &base);
            n >>= 1;
        }
        result
    };
    // group order factorization; group is small so default budget suffices
    let h_big = BigInt::from(h as u64);
    let h_factors = intfact::factor(&h_big, &FactorBudget::default())
        .map_err(|_| Error::BudgetExceeded("group order factorization".to_string()))?;
    // per-prime partitions by counting solutions of g^(p^j) = 1
    let mut partitions: Vec<(BigInt, Vec<u32>)> = Vec::new();
    for (p, emax) in &h_factors {
        let mut log_counts = vec![0u32];
        for j in 1..=*emax {
            let pj = p.pow(j);
            let count = forms
                .iter()
                .filter(|f| pow_form(f, &pj) == identity)
                .count();
            // count = p^(sum min(lambda_i, j))
            let mut c = BigInt::from(count as u64);
            let mut logc = 0u32;
            while (&c % p).is_zero() {
                c /= p;
                logc += 1;
            }
            debug_assert!(c.is_one());
            log_counts.push(logc);
            if BigInt::from(count as u64) == p.pow(*emax) {
                break;
            }
        }
        // m_j = logN_j - logN_{j-1} = #{i : lambda_i >= j}; recover lambda
        let mut lambda: Vec<u32> = Vec::new();
        for j in 1..log_counts.len() {
            let mj = log_counts[j] - log_counts[j - 1];
            while lambda.len() < mj as usize {
                lambda.push(0);
            }
            for item in lambda.iter_mut().take(mj as usize) {
                *item += 1;
            }
        }
        // pad until the partition sums to emax
        let mut total: u32 = lambda.iter().sum();
        while total < *emax {
            // remaining counts concentrate in the largest part
            lambda[0] += *emax - total;
            total = lambda.iter().sum();
        }
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        partitions.push((p.clone(), lambda));
    }
    // combine into invariant factors (largest parts aligned)
    let max_len = partitions.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    let mut divisors_desc: Vec<BigInt> = Vec::new();
    for t in 0..max_len {
        let mut dt = BigInt::one();
        for (p, l) in &partitions {
            if let Some(e) = l.get(t) {
                dt *= p.pow(*e);
            }
        }
        if !dt.is_one() {
            divisors_desc.push(dt);
        }
    }
    divisors_desc.reverse();
    Ok(divisors_desc)
}
