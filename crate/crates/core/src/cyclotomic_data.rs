//! Cyclotomic field invariants gating the hypothesis checks: the least
//! common multiple n_lcm of all m with [F(zeta_m) : F] <= 2, and the ideal
//! n_F built from the different and the norms N(zeta - 1) over admissible
//! roots of unity.
//!
//! Everything is decided inside F: [F(zeta_m) : F] <= 2 holds exactly when
//! zeta_m + zeta_m^{-1} lies in O_F, and for a conjugate pair {zeta, zbar}
//! of order m > 2 the norm N_{F(zeta)/F}(zeta - 1) equals 2 - (zeta + zbar).

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::intfact::FactorBudget;
use crate::number_field::{FieldElement, IdealData, NumberField, PrimeIdealData, RealBound};
use crate::poly::{euler_phi, real_cyclotomic};
use crate::Result;

/// Admissible orders and the witnessing cosine elements.
#[derive(Clone, Debug)]
pub struct NLcmData {
    pub n_lcm: BigInt,
    pub admissible_m: Vec<u64>,
    /// For each admissible m, the elements 2cos(2 pi j/m) found in O_F.
    pub cos_elements: Vec<(u64, Vec<FieldElement>)>,
}

/// Complete cyclotomic invariants including the ideal n_F.
#[derive(Clone, Debug)]
pub struct CyclotomicInvariants {
    pub nlcm: NLcmData,
    pub n_f_ideal: IdealData,
    pub n_f_support: Vec<PrimeIdealData>,
}

/// All m with [F(zeta_m) : F] <= 2, their cosine witnesses, and the lcm.
pub fn compute_n_lcm(f: &NumberField) -> Result<NLcmData> {
    let d = f.degree as u64;
    // phi(m) <= 2d and phi(m) >= sqrt(m/2) bound the search range
    let m_max = 8 * d * d + 2;
    let two = BigRational::from(BigInt::from(2));
    let box_bounds: Vec<(RealBound, RealBound)> = (0..f.degree)
        .map(|_| {
            (
                RealBound::rational(-two.clone()),
                RealBound::rational(two.clone()),
            )
        })
        .collect();
    let candidates = f.enumerate_bounded_integers(&box_bounds)?;
    let mut admissible = Vec::new();
    let mut cos_elements = Vec::new();
    let mut n_lcm = BigInt::one();
    for m in 1..=m_max {
        if euler_phi(m) > 2 * d {
            continue;
        }
        let psi = real_cyclotomic(m).to_q();
        let mut roots = Vec::new();
        for c in &candidates {
            // evaluate psi at the field element
            let mut acc = f.zero();
            for coeff in psi.c.iter().rev() {
                acc = f.mul(&acc, c);
                acc = f.add(&acc, &f.from_rational(coeff));
            }
            if acc.is_zero() {
                roots.push(c.clone());
            }
        }
        if !roots.is_empty() {
            admissible.push(m);
            n_lcm = n_lcm.lcm(&BigInt::from(m));
            cos_elements.push((m, roots));
        }
    }
    Ok(NLcmData {
        n_lcm,
        admissible_m: admissible,
        cos_elements,
    })
}

/// The ideal n_F: product of the different with N(zeta - 1) O_F over all
/// nontrivial roots of unity zeta with [F(zeta) : F] <= 2, taken per root
/// (conjugate pairs contribute their norm twice). Only the prime support is
/// consumed downstream, and that is independent of the pairing convention.
pub fn compute_n_f(f: &NumberField, budget: &FactorBudget) -> Result<CyclotomicInvariants> {
    let nlcm = compute_n_lcm(f)?;
    let mut ideal = f.different();
    // zeta = -1 contributes N(( -1 ) - 1) = (2)
    ideal = f.ideal_mul(&ideal, &f.ideal_from_int(&BigInt::from(2))?);
    let two = f.from_int(&BigInt::from(2));
    for (m, roots) in &nlcm.cos_elements {
        if *m <= 2 {
            continue;
        }
        for c in roots {
            // each cosine corresponds to the pair {zeta, conj}: (2 - c)^2
            let g = f.sub(&two, c);
            let gi = f.principal_ideal(&g)?;
            ideal = f.ideal_mul(&ideal, &f.ideal_mul(&gi, &gi));
        }
    }
    // support: rational primes dividing the norm, then membership
    let mut support = Vec::new();
    let primes = crate::intfact::prime_support(&ideal.norm, budget)?;
    for p in primes {
        for pr in f.factor_rational_prime(&p)? {
            if f.ideal_subset(&ideal, &pr.ideal) {
                support.push(pr);
            }
        }
    }
    crate::number_field::sort_primes(&mut support);
    Ok(CyclotomicInvariants {
        nlcm,
        n_f_ideal: ideal,
        n_f_support: support,
    })
}

/// Prime support of n_lcm * n_F: the union of the primes above divisors of
/// n_lcm with the support of n_F.
pub fn gating_support(
    f: &NumberField,
    inv: &CyclotomicInvariants,
    budget: &FactorBudget,
) -> Result<Vec<PrimeIdealData>> {
    let mut out = inv.n_f_support.clone();
    for p in crate::intfact::prime_support(&inv.nlcm.n_lcm, budget)? {
        out.extend(f.factor_rational_prime(&p)?);
    }
    crate::number_field::sort_primes(&mut out);
    Ok(out)
}
