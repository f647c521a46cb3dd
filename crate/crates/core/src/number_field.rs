//! Number fields with verified maximal orders: exact element arithmetic,
//! ideals in Hermite normal form, prime decomposition, residue fields,
//! archimedean embeddings, and enumeration of algebraic integers inside
//! archimedean boxes.
//!
//! Maximal-order policy: the power basis is accepted only when Dedekind's
//! criterion proves p-maximality at every prime whose square divides the
//! polynomial discriminant; otherwise the caller must supply a basis, which
//! is verified (contains Z[theta], closed under multiplication, and its
//! discriminant admits no unproven square divisor).

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::fp::{self, FpCtx, FpPoly};
use crate::intfact::{self, FactorBudget};
use crate::interval::{eval_poly_interval, scaled_sqrt_interval, QInterval};
use crate::linalg::{
    det_bareiss, det_rational, hnf_rows, invert_mod_p, invert_rational, kernel_mod_p,
    smith_normal_form, solve_integer, solve_rational_q, IMat,
};
use crate::poly::{self, ZPoly};
use crate::poly::QPoly;
use crate::Result;

/// Interval refinement policy for archimedean comparisons.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: 128,
            cap_bits: 4096,
        }
    }
}

/// Element of a number field: exact rational coordinates with respect to the
/// integral basis. Integral elements have integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }

    /// Integer coordinate vector; caller must know the element is integral.
    pub fn int_coords(&self) -> Vec<BigInt> {
        debug_assert!(self.is_integral());
        self.coords.iter().map(|c| c.numer().clone()).collect()
    }
}

/// Integral ideal as a row-HNF Z-basis with cached norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealData {
    pub hnf: IMat,
    pub norm: BigInt,
}

impl IdealData {
    /// Lexicographic key over the HNF entries, for canonical ordering.
    pub fn lex_key(&self) -> Vec<BigInt> {
        self.hnf.data.clone()
    }
}

/// Fractional ideal `(1/den) * lattice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracIdeal {
    pub num: IMat,
    pub den: BigInt,
}

/// Residue field GF(p^f) of a prime, realised as F_p[t]/(modulus), together
/// with the linear reduction map from integral-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub p: BigInt,
    pub modulus: FpPoly,
    /// f x d integer matrix: residue coordinates = reduction * coords mod p.
    pub reduction: IMat,
}

impl ResidueField {
    pub fn ctx(&self) -> FpCtx {
        FpCtx::new(self.p.clone())
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// Size of the residue field, p^f.
    pub fn order(&self) -> BigInt {
        self.p.clone().pow(self.degree() as u32)
    }

    /// Image of an integral element.
    pub fn reduce(&self, x: &FieldElement) -> FpPoly {
        debug_assert!(x.is_integral());
        let ctx = self.ctx();
        let v = self.reduction.mul_vec(&x.int_coords());
        FpPoly::new(&ctx, v)
    }

    pub fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let ctx = self.ctx();
        a.mul(&ctx, b).rem(&ctx, &self.modulus)
    }

    pub fn pow(&self, a: &FpPoly, e: &BigInt) -> FpPoly {
        debug_assert!(!e.is_negative());
        let ctx = self.ctx();
        a.pow_mod(&ctx, &e.to_biguint().unwrap(), &self.modulus)
    }
}

/// A prime ideal over a rational prime, with ramification/inertia data and
/// residue-field arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdealData {
    pub under: BigInt,
    pub e: u32,
    pub f: u32,
    pub ideal: IdealData,
    pub residue: ResidueField,
    /// Position among the primes above `under`, in HNF-lexicographic order.
    pub index: usize,
}

impl PrimeIdealData {
    /// N(P) = p^f.
    pub fn norm(&self) -> BigInt {
        self.ideal.norm.clone()
    }
}

/// An exact archimedean bound of the form `coeff * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBound {
    pub coeff: BigRational,
    pub radicand: BigRational,
}

impl RealBound {
    pub fn rational(q: BigRational) -> Self {
        RealBound {
            coeff: q,
            radicand: BigRational::one(),
        }
    }

    pub fn sqrt_scaled(coeff: BigRational, radicand: BigRational) -> Self {
        debug_assert!(!radicand.is_negative());
        RealBound { coeff, radicand }
    }

    pub fn neg(&self) -> RealBound {
        RealBound {
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.radicand.is_zero()
    }

    /// (coeff^2 * radicand, sign of coeff): the square of the value with sign.
    fn square_and_sign(&self) -> (BigRational, i32) {
        let sq = &self.coeff * &self.coeff * &self.radicand;
        let s = if self.is_zero() {
            0
        } else if self.coeff.is_positive() {
            1
        } else {
            -1
        };
        (sq, s)
    }

    pub fn enclosure(&self, prec_bits: u32) -> QInterval {
        scaled_sqrt_interval(&self.coeff, &self.radicand, prec_bits)
    }

    /// A rational number >= |value|.
    pub fn abs_upper(&self, prec_bits: u32) -> BigRational {
        self.enclosure(prec_bits).abs_upper()
    }
}

/// A number field Q[x]/(f) with a verified maximal order.
#[derive(Clone, Debug)]
pub struct NumberField {
    pub defining_poly: ZPoly,
    pub degree: usize,
    /// Rows: integral-basis elements in power-basis coordinates.
    pub basis_matrix: Vec<Vec<BigRational>>,
    basis_inv: Vec<Vec<BigRational>>,
    /// mult_table[i][j] = integer coordinates of basis_i * basis_j.
    mult_table: Vec<Vec<Vec<BigInt>>>,
    pub signature: (usize, usize),
    pub field_discriminant: BigInt,
    pub poly_discriminant: BigInt,
    /// [O_K : Z[theta]] for the verified order.
    pub index: BigInt,
    pub disc_factors: Vec<(BigInt, u32)>,
    /// Isolating intervals of the real roots of the defining polynomial,
    /// ascending. Complex places carry no interval data; nothing consumes it.
    real_roots: Vec<(BigRational, BigRational)>,
    one_coords: Vec<BigRational>,
    pub precision: Precision,
}

impl NumberField {
    pub fn is_totally_real(&self) -> bool {
        self.signature.1 == 0
    }

    pub fn is_totally_imaginary(&self) -> bool {
        self.signature.0 == 0
    }
}

/// Dedekind's criterion at p for the monic polynomial f: true when Z[theta]
/// is p-maximal.
pub fn dedekind_criterion(f: &ZPoly, p: &BigInt) -> bool {
    let ctx = FpCtx::new(p.clone());
    let fbar = f.to_fp(&ctx);
    let factors = fp::factor(&ctx, &fbar);
    let mut gbar = FpPoly::one(&ctx);
    let mut hbar = FpPoly::one(&ctx);
    for (fac, mult) in &factors {
        gbar = gbar.mul(&ctx, fac);
        for _ in 1..*mult {
            hbar = hbar.mul(&ctx, fac);
        }
    }
    // lift g, h with coefficients in [0, p)
    let g = ZPoly::new(gbar.c.clone());
    let h = ZPoly::new(hbar.c.clone());
    let gh = g.mul(&h);
    let diff = gh.sub(f);
    // T = (g h - f)/p
    let t = ZPoly::new(diff.c.iter().map(|c| c / p).collect());
    debug_assert!(diff.c.iter().all(|c| (c % p).is_zero()));
    let tbar = t.to_fp(&ctx);
    let g1 = tbar.gcd(&ctx, &gbar);
    let g2 = g1.gcd(&ctx, &hbar);
    g2.deg() == 0
}

/// Build a number field from a monic integer polynomial, optionally with a
/// user-supplied integral basis (rows = power-basis coordinates).
pub fn construct_field(
    f: &ZPoly,
    basis: Option<Vec<Vec<BigRational>>>,
) -> Result<NumberField> {
    construct_field_with_precision(f, basis, Precision::default())
}

pub fn construct_field_with_precision(
    f: &ZPoly,
    basis: Option<Vec<Vec<BigRational>>>,
    precision: Precision,
) -> Result<NumberField> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::InvalidInput("defining polynomial must be monic".to_string()));
    }
    let d = f.deg();
    if d == 0 {
        return Err(Error::InvalidInput("constant polynomial".to_string()));
    }
    if !poly::is_irreducible(f) {
        return Err(Error::NotIrreducible);
    }
    let poly_disc = poly::discriminant(f);

    // basis matrix rows
    let b: Vec<Vec<BigRational>> = match &basis {
        None => (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect(),
        Some(rows) => {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::BasisInconsistent(
                    "basis must be a d x d matrix".to_string(),
                ));
            }
            rows.clone()
        }
    };
    let det_b = det_rational(&b);
    if det_b.is_zero() {
        return Err(Error::BasisInconsistent("basis is singular".to_string()));
    }
    // index = 1/|det B| must be a positive integer (Z[theta] inside the order)
    let inv_det = (BigRational::one() / det_b).abs();
    if !inv_det.denom().is_one() {
        return Err(Error::BasisInconsistent(
            "basis does not contain Z[theta] with integral index".to_string(),
        ));
    }
    let index = inv_det.numer().clone();
    let b_inv = invert_rational(&b).ok_or_else(|| {
        Error::BasisInconsistent("basis is singular".to_string())
    })?;

    // every power of theta must have integer coordinates
    for j in 0..d {
        for i in 0..d {
            // coords of theta^j: row vector e_j * B^{-1} -> entry i is B^{-1}[j][i]
            if !b_inv[j][i].denom().is_one() {
                return Err(Error::BasisInconsistent(
                    "Z[theta] is not contained in the spanned order".to_string(),
                ));
            }
        }
    }

    // multiplication table; closure under multiplication requires integer coords
    let fq = f.to_q();
    let to_power = |coords: &[BigRational]| -> QPoly {
        let mut p = vec![BigRational::zero(); d];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                p[j] += c * &b[i][j];
            }
        }
        QPoly::new(p)
    };
    let from_power = |g: &QPoly| -> Vec<BigRational> {
        let r = g.rem(&fq);
        let mut pw = vec![BigRational::zero(); d];
        for (j, c) in r.c.iter().enumerate() {
            pw[j] = c.clone();
        }
        let mut coords = vec![BigRational::zero(); d];
        for j in 0..d {
            if pw[j].is_zero() {
                continue;
            }
            for i in 0..d {
                coords[i] += &pw[j] * &b_inv[j][i];
            }
        }
        coords
    };

    let mut mult_table: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(d);
    for i in 0..d {
        let pi = to_power(
            &(0..d)
                .map(|k| {
                    if k == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect::<Vec<_>>(),
        );
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let pj = to_power(
                &(0..d)
                    .map(|k| {
                        if k == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect::<Vec<_>>(),
            );
            let prod = from_power(&pi.mul(&pj));
            let mut iv = Vec::with_capacity(d);
            for c in prod {
                if !c.denom().is_one() {
                    return Err(Error::BasisInconsistent(
                        "order is not closed under multiplication".to_string(),
                    ));
                }
                iv.push(c.numer().clone());
            }
            row.push(iv);
        }
        mult_table.push(row);
    }

    // discriminant of the order and maximality proof
    let index_sq = &index * &index;
    debug_assert!((&poly_disc % &index_sq).is_zero());
    let field_disc = &poly_disc / &index_sq;
    let budget = FactorBudget::default();
    let disc_factors = intfact::factor(&field_disc, &budget)
        .map_err(|_| Error::BudgetExceeded("discriminant factorization".to_string()))?;
    for (p, k) in &disc_factors {
        if *k >= 2 && !dedekind_criterion(f, p) {
            return Err(Error::BasisNotMaximal(p.clone()));
        }
    }

    // signature and real embeddings
    let (real_roots, r1) = if d == 1 {
        let root = BigRational::from(-f.c[0].clone());
        (vec![(root.clone(), root)], 1usize)
    } else {
        let iso = poly::isolate_real_roots(f);
        let n = iso.len();
        (iso, n)
    };
    let r2 = (d - r1) / 2;
    debug_assert_eq!(r1 + 2 * r2, d);

    let one_coords = from_power(&QPoly::one());

    Ok(NumberField {
        defining_poly: f.clone(),
        degree: d,
        basis_matrix: b,
        basis_inv: b_inv,
        mult_table,
        signature: (r1, r2),
        field_discriminant: field_disc,
        poly_discriminant: poly_disc,
        index,
        disc_factors,
        real_roots,
        one_coords,
        precision,
    })
}

impl NumberField {
    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![BigRational::zero(); self.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            coords: self.one_coords.clone(),
        }
    }

    pub fn from_int(&self, n: &BigInt) -> FieldElement {
        let q = BigRational::from(n.clone());
        FieldElement {
            coords: self.one_coords.iter().map(|c| c * &q).collect(),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElement {
        FieldElement {
            coords: self.one_coords.iter().map(|c| c * q).collect(),
        }
    }

    /// theta, the class of x.
    pub fn generator(&self) -> FieldElement {
        self.from_power_poly(&QPoly::new(vec![BigRational::zero(), BigRational::one()]))
    }

    pub fn element_from_int_coords(&self, v: &[BigInt]) -> FieldElement {
        debug_assert_eq!(v.len(), self.degree);
        FieldElement {
            coords: v.iter().map(|x| BigRational::from(x.clone())).collect(),
        }
    }

    pub fn to_power_poly(&self, x: &FieldElement) -> QPoly {
        let d = self.degree;
        let mut p = vec![BigRational::zero(); d];
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                p[j] += c * &self.basis_matrix[i][j];
            }
        }
        QPoly::new(p)
    }

    pub fn from_power_poly(&self, g: &QPoly) -> FieldElement {
        let d = self.degree;
        let r = g.rem(&self.defining_poly.to_q());
        let mut pw = vec![BigRational::zero(); d];
        for (j, c) in r.c.iter().enumerate() {
            pw[j] = c.clone();
        }
        let mut coords = vec![BigRational::zero(); d];
        for j in 0..d {
            if pw[j].is_zero() {
                continue;
            }
            for i in 0..d {
                coords[i] += &pw[j] * &self.basis_inv[j][i];
            }
        }
        FieldElement { coords }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut coords = vec![BigRational::zero(); d];
        for i in 0..d {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y.coords[j].is_zero() {
                    continue;
                }
                let c = &x.coords[i] * &y.coords[j];
                for k in 0..d {
                    let m = &self.mult_table[i][j][k];
                    if !m.is_zero() {
                        coords[k] += &c * &BigRational::from(m.clone());
                    }
                }
            }
        }
        FieldElement { coords }
    }

    pub fn mul_scalar(&self, x: &FieldElement, s: &BigRational) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().map(|a| a * s).collect(),
        }
    }

    /// Row i = coordinates of basis_i * y.
    fn mult_matrix(&self, y: &FieldElement) -> Vec<Vec<BigRational>> {
        let d = self.degree;
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                if y.coords[j].is_zero() {
                    continue;
                }
                for k in 0..d {
                    let t = &self.mult_table[i][j][k];
                    if !t.is_zero() {
                        m[i][k] += &y.coords[j] * &BigRational::from(t.clone());
                    }
                }
            }
        }
        m
    }

    /// x / y; y must be nonzero.
    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        if y.is_zero() {
            return Err(Error::ZeroInput);
        }
        let m = self.mult_matrix(y);
        // solve z * M = x  <=>  M^T z^T = x^T
        let d = self.degree;
        let mt: Vec<Vec<BigRational>> = (0..d)
            .map(|i| (0..d).map(|j| m[j][i].clone()).collect())
            .collect();
        let z = solve_rational_q(&mt, &x.coords).ok_or(Error::ZeroInput)?;
        Ok(FieldElement { coords: z })
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        self.div(&self.one(), x)
    }

    pub fn pow(&self, x: &FieldElement, e: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = x.clone();
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        result
    }

    /// Field norm (determinant of multiplication by x). Exact rational.
    pub fn norm(&self, x: &FieldElement) -> BigRational {
        if x.is_zero() {
            return BigRational::zero();
        }
        // scale to integral for the fraction-free determinant
        let mut den = BigInt::one();
        for c in &x.coords {
            den = den.lcm(c.denom());
        }
        let scaled: Vec<BigInt> = x
            .coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let d = self.degree;
        let mut m = IMat::zero(d, d);
        for i in 0..d {
            for j in 0..d {
                if scaled[j].is_zero() {
                    continue;
                }
                for k in 0..d {
                    let t = &self.mult_table[i][j][k];
                    if !t.is_zero() {
                        *m.at_mut(i, k) += &scaled[j] * t;
                    }
                }
            }
        }
        let det = det_bareiss(&m);
        BigRational::new(det, den.pow(d as u32))
    }

    /// Field trace. Exact rational.
    pub fn trace(&self, x: &FieldElement) -> BigRational {
        let m = self.mult_matrix(x);
        let mut t = BigRational::zero();
        for (i, row) in m.iter().enumerate() {
            t += &row[i];
        }
        t
    }

    /// Integer norm of an integral element.
    pub fn norm_int(&self, x: &FieldElement) -> BigInt {
        let n = self.norm(x);
        debug_assert!(n.denom().is_one());
        n.numer().clone()
    }

    /// Trace form matrix Tr(basis_i * basis_j), integer and symmetric.
    pub fn trace_matrix(&self) -> IMat {
        let d = self.degree;
        // Tr(basis_k) from the multiplication table
        let tr_basis: Vec<BigInt> = (0..d)
            .map(|k| {
                let mut s = BigInt::zero();
                for i in 0..d {
                    s += &self.mult_table[k][i][i];
                }
                s
            })
            .collect();
        let mut t = IMat::zero(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut s = BigInt::zero();
                for k in 0..d {
                    s += &self.mult_table[i][j][k] * &tr_basis[k];
                }
                *t.at_mut(i, j) = s;
            }
        }
        t
    }

    /// Canonical total order on elements: (|norm|, coordinate lexicographic).
    pub fn cmp_elements(&self, a: &FieldElement, b: &FieldElement) -> Ordering {
        let na = self.norm(a).abs();
        let nb = self.norm(b).abs();
        na.cmp(&nb).then_with(|| a.coords.cmp(&b.coords))
    }

    pub fn sort_elements(&self, v: &mut Vec<FieldElement>) {
        v.sort_by_cached_key(|x| (self.norm(x).abs(), x.coords.clone()));
        v.dedup();
    }
}

// ---------------------------------------------------------------------------
// ideals
// ---------------------------------------------------------------------------

impl NumberField {
    /// The unit ideal O.
    pub fn unit_ideal(&self) -> IdealData {
        IdealData {
            hnf: IMat::identity(self.degree),
            norm: BigInt::one(),
        }
    }

    /// Ideal generated by the given integral elements (as an O-module).
    pub fn ideal_from_generators(&self, gens: &[FieldElement]) -> Result<IdealData> {
        let d = self.degree;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for g in gens {
            if !g.is_integral() {
                return Err(Error::InvalidInput(
                    "ideal generators must be integral".to_string(),
                ));
            }
            for j in 0..d {
                let basis_j = self.basis_element(j);
                let prod = self.mul(g, &basis_j);
                rows.push(prod.int_coords());
            }
        }
        let h = hnf_rows(&IMat::from_rows(rows));
        if h.rows < d {
            return Err(Error::ZeroIdeal);
        }
        let norm = (0..d).map(|i| h.at(i, i).clone()).product();
        Ok(IdealData { hnf: h, norm })
    }

    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[i] = BigRational::one();
        FieldElement { coords }
    }

    pub fn principal_ideal(&self, x: &FieldElement) -> Result<IdealData> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        self.ideal_from_generators(core::slice::from_ref(x))
    }

    /// Ideal generated by a rational integer.
    pub fn ideal_from_int(&self, n: &BigInt) -> Result<IdealData> {
        self.principal_ideal(&self.from_int(n))
    }

    /// Element of the ideal corresponding to HNF row i.
    pub fn ideal_row_element(&self, ideal: &IdealData, i: usize) -> FieldElement {
        self.element_from_int_coords(ideal.hnf.row(i))
    }

    pub fn ideal_mul(&self, a: &IdealData, b: &IdealData) -> IdealData {
        let d = self.degree;
        let mut rows = Vec::with_capacity(d * d);
        for i in 0..d {
            let ai = self.ideal_row_element(a, i);
            for j in 0..d {
                let bj = self.ideal_row_element(b, j);
                rows.push(self.mul(&ai, &bj).int_coords());
            }
        }
        let h = hnf_rows(&IMat::from_rows(rows));
        let norm = (0..d).map(|i| h.at(i, i).clone()).product();
        IdealData { hnf: h, norm }
    }

    pub fn ideal_add(&self, a: &IdealData, b: &IdealData) -> IdealData {
        let h = hnf_rows(&a.hnf.vstack(&b.hnf));
        let norm = (0..self.degree).map(|i| h.at(i, i).clone()).product();
        IdealData { hnf: h, norm }
    }

    pub fn ideal_pow(&self, a: &IdealData, n: u32) -> IdealData {
        let mut result = self.unit_ideal();
        let mut base = a.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = self.ideal_mul(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.ideal_mul(&base, &base);
            }
        }
        result
    }

    /// Membership x in I for integral x.
    pub fn ideal_contains(&self, ideal: &IdealData, x: &FieldElement) -> bool {
        if !x.is_integral() {
            return false;
        }
        let d = self.degree;
        let mut v = x.int_coords();
        for r in 0..d {
            let piv = ideal.hnf.at(r, r);
            let (q, rem) = v[r].div_rem(piv);
            if !rem.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for j in r..d {
                    let s = &q * ideal.hnf.at(r, j);
                    v[j] -= s;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// A subset of B, i.e. B | A.
    pub fn ideal_subset(&self, a: &IdealData, b: &IdealData) -> bool {
        (0..self.degree).all(|i| self.ideal_contains(b, &self.ideal_row_element(a, i)))
    }

    pub fn ideal_eq(&self, a: &IdealData, b: &IdealData) -> bool {
        a.hnf == b.hnf
    }

    /// Largest n with P^n | I (P prime, I nonzero).
    pub fn ideal_valuation(&self, ideal: &IdealData, p: &PrimeIdealData) -> u32 {
        let mut v = 0u32;
        let mut pk = p.ideal.clone();
        while self.ideal_subset(ideal, &pk) {
            v += 1;
            pk = self.ideal_mul(&pk, &p.ideal);
        }
        v
    }

    /// Largest n with x in P^n, for integral x != 0.
    pub fn element_valuation(&self, x: &FieldElement, p: &PrimeIdealData) -> u32 {
        debug_assert!(!x.is_zero());
        let mut v = 0u32;
        let mut pk = p.ideal.clone();
        while self.ideal_contains(&pk, x) {
            v += 1;
            pk = self.ideal_mul(&pk, &p.ideal);
        }
        v
    }

    /// Representatives of O / I from the HNF diagonal.
    pub fn quotient_representatives(&self, ideal: &IdealData) -> Vec<FieldElement> {
        let d = self.degree;
        let mut reps = vec![vec![BigInt::zero(); d]];
        for i in 0..d {
            let diag = ideal.hnf.at(i, i).clone();
            let mut next = Vec::new();
            for r in reps {
                let mut k = BigInt::zero();
                while k < diag {
                    let mut r2 = r.clone();
                    r2[i] = k.clone();
                    next.push(r2);
                    k += 1;
                }
            }
            reps = next;
        }
        reps.into_iter()
            .map(|v| self.element_from_int_coords(&v))
            .collect()
    }

    /// Solve z * y = x (mod J); z is unique mod (J : y). Returns None when no
    /// solution exists (i.e. x not in y*O + J).
    pub fn divide_in_quotient(
        &self,
        x: &FieldElement,
        y: &FieldElement,
        j: &IdealData,
    ) -> Option<FieldElement> {
        let d = self.degree;
        let my = self.mult_matrix(y);
        // rows of the combined lattice: [M_y ; H_J]; solve (z, w) * rows = x
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(2 * d);
        for r in my {
            let mut iv = Vec::with_capacity(d);
            for c in r {
                debug_assert!(c.denom().is_one());
                iv.push(c.numer().clone());
            }
            rows.push(iv);
        }
        for i in 0..d {
            rows.push(j.hnf.row(i).to_vec());
        }
        let a = IMat::from_rows(rows).transpose();
        let sol = solve_integer(&a, &x.int_coords())?;
        Some(self.element_from_int_coords(&sol[..d]))
    }

    /// (O : L) = {x in K : x L contained in O} as a fractional ideal.
    pub fn colon_lattice(&self, l: &IdealData) -> FracIdeal {
        let d = self.degree;
        // stack transposed multiplication matrices of the lattice generators
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d * d);
        for r in 0..d {
            let lr = self.ideal_row_element(l, r);
            let m = self.mult_matrix(&lr);
            // condition: c * M in Z^d -> columns of M give constraints
            for jcol in 0..d {
                let mut row = Vec::with_capacity(d);
                for i in 0..d {
                    debug_assert!(m[i][jcol].denom().is_one());
                    row.push(m[i][jcol].numer().clone());
                }
                rows.push(row);
            }
        }
        // constraints: A c in Z^{d^2} with A rows as above
        let a = IMat::from_rows(rows);
        let snf = smith_normal_form(&a);
        let mut den = BigInt::one();
        for di in &snf.diag {
            debug_assert!(!di.is_zero());
            den = den.lcm(di);
        }
        // solution lattice: columns of V * diag(1/d_i); scale by den
        let mut basis_rows = Vec::with_capacity(d);
        for i in 0..d {
            let scale = &den / &snf.diag[i];
            let row: Vec<BigInt> = (0..d).map(|r| snf.right.at(r, i) * &scale).collect();
            basis_rows.push(row);
        }
        let num = hnf_rows(&IMat::from_rows(basis_rows));
        normalize_frac(FracIdeal { num, den })
    }

    /// Inverse of an integral ideal as a fractional ideal.
    pub fn ideal_inverse(&self, l: &IdealData) -> FracIdeal {
        self.colon_lattice(l)
    }

    /// The different ideal D_{K/Q}: inverse of the trace-dual of O.
    pub fn different(&self) -> IdealData {
        let d = self.degree;
        if self.index.is_one() {
            // monogenic: (f'(theta))
            let fp = self.defining_poly.derivative();
            let el = self.from_power_poly(&fp.to_q());
            return self.principal_ideal(&el).expect("f' is nonzero");
        }
        let t = self.trace_matrix();
        let tq: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| BigRational::from(t.at(i, j).clone()))
                    .collect()
            })
            .collect();
        let tinv = invert_rational(&tq).expect("trace form nondegenerate");
        // dual lattice rows: T^{-1}; clear denominators
        let mut den = BigInt::one();
        for row in &tinv {
            for c in row {
                den = den.lcm(c.denom());
            }
        }
        let rows: Vec<Vec<BigInt>> = tinv
            .iter()
            .map(|row| row.iter().map(|c| c.numer() * (&den / c.denom())).collect())
            .collect();
        let dual = normalize_frac(FracIdeal {
            num: hnf_rows(&IMat::from_rows(rows)),
            den,
        });
        // different = inverse of the dual: q * (O : L) for dual = (1/q) L
        let inv = self.colon_lattice(&IdealData {
            norm: (0..d).map(|i| dual.num.at(i, i).clone()).product(),
            hnf: dual.num.clone(),
        });
        // different = dual.den * inv  (as fractional ideals): scale
        let scaled = normalize_frac(FracIdeal {
            num: scale_lattice(&inv.num, &dual.den),
            den: inv.den.clone(),
        });
        assert!(scaled.den.is_one(), "different must be integral");
        let norm = (0..d).map(|i| scaled.num.at(i, i).clone()).product::<BigInt>();
        debug_assert_eq!(norm, self.field_discriminant.abs());
        IdealData {
            hnf: scaled.num,
            norm,
        }
    }
}

fn scale_lattice(m: &IMat, s: &BigInt) -> IMat {
    let mut out = m.clone();
    for v in out.data.iter_mut() {
        *v *= s;
    }
    out
}

fn normalize_frac(f: FracIdeal) -> FracIdeal {
    let mut g = f.den.abs();
    for v in &f.num.data {
        g = g.gcd(v);
        if g.is_one() {
            return f;
        }
    }
    if g.is_one() || g.is_zero() {
        return f;
    }
    let mut num = f.num.clone();
    for v in num.data.iter_mut() {
        *v = &*v / &g;
    }
    FracIdeal {
        num,
        den: &f.den / &g,
    }
}

// ---------------------------------------------------------------------------
// prime decomposition
// ---------------------------------------------------------------------------

impl NumberField {
    /// All primes above the rational prime p, sorted by HNF-lexicographic
    /// order and indexed accordingly.
    pub fn factor_rational_prime(&self, p: &BigInt) -> Result<Vec<PrimeIdealData>> {
        if !intfact::is_prime(p) {
            return Err(Error::InvalidInput("not a rational prime".to_string()));
        }
        let mut primes = if (&self.index % p).is_zero() {
            self.split_prime_via_algebra(p)?
        } else {
            self.split_prime_via_poly(p)?
        };
        primes.sort_by(|a, b| a.ideal.lex_key().cmp(&b.ideal.lex_key()));
        for (i, pr) in primes.iter_mut().enumerate() {
            pr.index = i;
        }
        let total: usize = primes.iter().map(|q| (q.e * q.f) as usize).sum();
        debug_assert_eq!(total, self.degree);
        Ok(primes)
    }

    fn split_prime_via_poly(&self, p: &BigInt) -> Result<Vec<PrimeIdealData>> {
        let d = self.degree;
        let ctx = FpCtx::new(p.clone());
        let fbar = self.defining_poly.to_fp(&ctx);
        let factors = fp::factor(&ctx, &fbar);
        // power-basis coordinates of each basis element, mod p
        let mut bp: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let c = &self.basis_matrix[i][j];
                // denominator divides the index, hence invertible mod p
                let den_inv = ctx.inv(c.denom());
                row.push(ctx.mul(&ctx.norm(c.numer()), &den_inv));
            }
            bp.push(row);
        }
        let mut out = Vec::with_capacity(factors.len());
        for (gbar, e) in factors {
            let fdeg = gbar.deg();
            let g_lift = ZPoly::new(gbar.c.clone());
            let g_el = self.from_power_poly(&g_lift.to_q());
            let ideal = self.ideal_from_generators(&[self.from_int(p), g_el])?;
            debug_assert_eq!(ideal.norm, p.pow(fdeg as u32));
            // reduction matrix: basis_i -> its power-poly mod (p, gbar)
            let mut red = IMat::zero(fdeg, d);
            for i in 0..d {
                // polynomial sum_j bp[i][j] x^j mod gbar
                let poly_i = FpPoly::new(&ctx, bp[i].clone());
                let r = poly_i.rem(&ctx, &gbar);
                for k in 0..=r.deg().min(fdeg - 1) {
                    if let Some(c) = r.c.get(k) {
                        *red.at_mut(k, i) = c.clone();
                    }
                }
            }
            out.push(PrimeIdealData {
                under: p.clone(),
                e,
                f: fdeg as u32,
                ideal,
                residue: ResidueField {
                    p: p.clone(),
                    modulus: gbar,
                    reduction: red,
                },
                index: 0,
            });
        }
        Ok(out)
    }

    /// Decomposition of p | [O : Z[theta]] via the quotient algebra O/pO:
    /// nilradical by Frobenius kernels, then idempotent splitting of the
    /// etale quotient.
    fn split_prime_via_algebra(&self, p: &BigInt) -> Result<Vec<PrimeIdealData>> {
        let d = self.degree;
        let ctx = FpCtx::new(p.clone());
        // Frobenius matrix: row i = coords of basis_i^p mod p
        let mut frob = IMat::zero(d, d);
        for i in 0..d {
            let bi = self.basis_element(i);
            let pe = p.to_u64().ok_or_else(|| {
                Error::IndexDivisorUnsupported(p.clone())
            })?;
            let pw = self.pow_mod_p(&bi, pe, &ctx);
            for j in 0..d {
                *frob.at_mut(i, j) = pw[j].clone();
            }
        }
        // nilradical = left kernel of frob^m with p^m >= d
        let mut m_pow = 1u32;
        let mut pm = p.clone();
        while pm < BigInt::from(d) {
            pm *= p;
            m_pow += 1;
        }
        let mut fm = frob.clone();
        for _ in 1..m_pow {
            fm = mat_mul_mod(&ctx, &fm, &frob);
        }
        let rad_basis = kernel_mod_p(&ctx, &fm.transpose());
        let rad_dim = rad_basis.len();
        let abar_dim = d - rad_dim;

        // full basis: radical rows then complement rows
        let mut full_rows = rad_basis.clone();
        extend_to_basis(&ctx, &mut full_rows, d);
        let full = IMat::from_rows(full_rows.clone());
        let full_inv =
            invert_mod_p(&ctx, &full).expect("radical + complement is a basis");

        // multiplication in Abar coordinates (the last abar_dim coordinates)
        let to_abar = |v: &[BigInt]| -> Vec<BigInt> {
            // coords in full basis: v * full_inv
            let mut c = vec![BigInt::zero(); d];
            for i in 0..d {
                if v[i].is_zero() {
                    continue;
                }
                for j in 0..d {
                    c[j] = ctx.add(&c[j], &ctx.mul(&v[i], full_inv.at(i, j)));
                }
            }
            c[rad_dim..].to_vec()
        };
        let from_abar = |v: &[BigInt]| -> Vec<BigInt> {
            let mut c = vec![BigInt::zero(); d];
            for (idx, coef) in v.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for j in 0..d {
                    c[j] = ctx.add(&c[j], &ctx.mul(coef, full.at(rad_dim + idx, j)));
                }
            }
            c
        };
        let abar_mul = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
            let xa = from_abar(x);
            let ya = from_abar(y);
            let mut prod = vec![BigInt::zero(); d];
            for i in 0..d {
                if xa[i].is_zero() {
                    continue;
                }
                for j in 0..d {
                    if ya[j].is_zero() {
                        continue;
                    }
                    let c = ctx.mul(&xa[i], &ya[j]);
                    for k in 0..d {
                        let t = &self.mult_table[i][j][k];
                        if !t.is_zero() {
                            prod[k] = ctx.add(&prod[k], &ctx.mul(&c, t));
                        }
                    }
                }
            }
            to_abar(&prod)
        };
        let one_abar = to_abar(
            &self
                .one()
                .int_coords()
                .iter()
                .map(|c| ctx.norm(c))
                .collect::<Vec<_>>(),
        );

        // split the etale algebra into field components
        let identity_comp = Component {
            basis: echelon_rows(&ctx, (0..abar_dim).map(|i| unit_vec(abar_dim, i)).collect()),
            one: one_abar,
        };
        let comps = split_components(&ctx, identity_comp, &abar_mul, p)?;

        let mut out = Vec::with_capacity(comps.len());
        for comp in comps {
            let fdeg = comp.basis.len();
            // projection matrix: basis_i of O -> component coordinates of
            // (basis_i mod rad) * e_comp, expressed in z-power coordinates
            let (z, minpoly) = find_primitive(&ctx, &comp, &abar_mul)?;
            // z-power basis inside the component (coordinates in Abar)
            let mut zpows: Vec<Vec<BigInt>> = Vec::with_capacity(fdeg);
            let mut cur = comp.one.clone();
            for _ in 0..fdeg {
                zpows.push(cur.clone());
                cur = abar_mul(&cur, &z);
            }
            // solve for representation: need matrix sending Abar coords to
            // z-power coords; build (fdeg x abar_dim) by solving each basis
            let zmat = IMat::from_rows(zpows.clone());
            // for vectors inside the component, v = c * zmat has a solution
            let mut red = IMat::zero(fdeg, d);
            for i in 0..d {
                let vi: Vec<BigInt> = {
                    let e = self.basis_element(i).int_coords();
                    let elem_mod: Vec<BigInt> = e.iter().map(|c| ctx.norm(c)).collect();
                    let ab = to_abar(&elem_mod);
                    abar_mul(&ab, &comp.one)
                };
                let c = solve_in_span_mod_p(&ctx, &zmat, &vi)
                    .expect("projection lands in component");
                for k in 0..fdeg {
                    *red.at_mut(k, i) = c[k].clone();
                }
            }
            // prime ideal: p*O + lifts of the projection kernel
            let mut gens = vec![self.from_int(p)];
            let kernel = kernel_mod_p(&ctx, &red.transpose());
            for kv in kernel {
                gens.push(self.element_from_int_coords(&kv));
            }
            let ideal = self.ideal_from_generators(&gens)?;
            debug_assert_eq!(ideal.norm, p.pow(fdeg as u32));
            out.push(PrimeIdealData {
                under: p.clone(),
                e: 0, // filled below
                f: fdeg as u32,
                ideal,
                residue: ResidueField {
                    p: p.clone(),
                    modulus: minpoly,
                    reduction: red,
                },
                index: 0,
            });
        }
        // ramification indices by valuation of (p)
        let p_ideal = self.ideal_from_int(p)?;
        for pr in out.iter_mut() {
            let mut v = 0u32;
            let mut pk = pr.ideal.clone();
            while self.ideal_subset(&p_ideal, &pk) {
                v += 1;
                pk = self.ideal_mul(&pk, &pr.ideal);
            }
            pr.e = v;
        }
        Ok(out)
    }

    /// x^e mod p on coordinates (used for Frobenius rows).
    fn pow_mod_p(&self, x: &FieldElement, e: u64, ctx: &FpCtx) -> Vec<BigInt> {
        let d = self.degree;
        let mut result: Vec<BigInt> = self.one().int_coords();
        for v in result.iter_mut() {
            *v = ctx.norm(v);
        }
        let mut base: Vec<BigInt> = x.int_coords().iter().map(|c| ctx.norm(c)).collect();
        let mut n = e;
        let mulv = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            let mut prod = vec![BigInt::zero(); d];
            for i in 0..d {
                if a[i].is_zero() {
                    continue;
                }
                for j in 0..d {
                    if b[j].is_zero() {
                        continue;
                    }
                    let c = ctx.mul(&a[i], &b[j]);
                    for k in 0..d {
                        let t = &self.mult_table[i][j][k];
                        if !t.is_zero() {
                            prod[k] = ctx.add(&prod[k], &ctx.mul(&c, t));
                        }
                    }
                }
            }
            prod
        };
        while n > 0 {
            if n & 1 == 1 {
                result = mulv(&result, &base);
            }
            base = mulv(&base, &base);
            n >>= 1;
        }
        result
    }
}

#[derive(Clone, Debug)]
struct Component {
    /// Echelonized F_p-basis, coordinates in the etale quotient.
    basis: Vec<Vec<BigInt>>,
    /// Identity element of the component.
    one: Vec<BigInt>,
}

fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

fn mat_mul_mod(ctx: &FpCtx, a: &IMat, b: &IMat) -> IMat {
    let mut out = IMat::zero(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            if a.at(i, k).is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let v = ctx.add(out.at(i, j), &ctx.mul(a.at(i, k), b.at(k, j)));
                *out.at_mut(i, j) = v;
            }
        }
    }
    out
}

/// Row echelon over F_p, dropping zero rows.
fn echelon_rows(ctx: &FpCtx, rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| r.iter().map(|x| ctx.norm(x)).collect())
        .collect();
    let mut prow = 0;
    for col in 0..cols {
        let Some(sel) = (prow..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(prow, sel);
        let inv = ctx.inv(&m[prow][col].clone());
        for j in 0..cols {
            m[prow][j] = ctx.mul(&m[prow][j], &inv);
        }
        for i in 0..m.len() {
            if i != prow && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    let s = ctx.mul(&f, &m[prow][j]);
                    m[i][j] = ctx.sub(&m[i][j], &s);
                }
            }
        }
        prow += 1;
        if prow == m.len() {
            break;
        }
    }
    m.truncate(prow);
    m
}

/// Extend a set of independent rows to a basis of F_p^d with unit vectors.
fn extend_to_basis(ctx: &FpCtx, rows: &mut Vec<Vec<BigInt>>, d: usize) {
    for i in 0..d {
        let mut trial = rows.clone();
        trial.push(unit_vec(d, i));
        if echelon_rows(ctx, trial.clone()).len() > echelon_rows(ctx, rows.clone()).len() {
            rows.push(unit_vec(d, i));
        }
        if rows.len() == d {
            break;
        }
    }
}

/// Solve c * m = v over F_p where the rows of m are independent.
fn solve_in_span_mod_p(ctx: &FpCtx, m: &IMat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    // transpose to column form: m^T c^T = v^T
    let mt = m.transpose();
    let rows = mt.rows;
    let cols = mt.cols;
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigInt> = (0..cols).map(|j| ctx.norm(mt.at(i, j))).collect();
            r.push(ctx.norm(&v[i]));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        let Some(sel) = (prow..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(prow, sel);
        let inv = ctx.inv(&a[prow][col].clone());
        for j in 0..=cols {
            a[prow][j] = ctx.mul(&a[prow][j], &inv);
        }
        for i in 0..rows {
            if i != prow && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..=cols {
                    let s = ctx.mul(&f, &a[prow][j]);
                    a[i][j] = ctx.sub(&a[i][j], &s);
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
    }
    for i in prow..rows {
        if !a[i][cols].is_zero() {
            return None;
        }
    }
    let mut c = vec![BigInt::zero(); cols];
    for (r, col) in pivots {
        c[col] = a[r][cols].clone();
    }
    Some(c)
}

/// Minimal polynomial of z inside a commutative algebra with multiplication
/// `mul` and identity `one`.
fn minpoly_of(
    ctx: &FpCtx,
    one: &[BigInt],
    z: &[BigInt],
    mul: &dyn Fn(&[BigInt], &[BigInt]) -> Vec<BigInt>,
) -> FpPoly {
    let n = one.len();
    let mut pows: Vec<Vec<BigInt>> = vec![one.to_vec()];
    loop {
        let next = mul(pows.last().unwrap(), z);
        // check linear dependence of pows + next
        let mut rows = pows.clone();
        rows.push(next.clone());
        let ech = echelon_rows(ctx, rows.clone());
        if ech.len() < rows.len() {
            // dependence: solve next = sum c_i pows[i]
            let m = IMat::from_rows(pows.clone());
            let c = solve_in_span_mod_p(ctx, &m, &next).expect("dependence detected");
            // minpoly = x^k - sum c_i x^i
            let k = pows.len();
            let mut coeffs = vec![BigInt::zero(); k + 1];
            for (i, ci) in c.iter().enumerate() {
                coeffs[i] = ctx.sub(&BigInt::zero(), ci);
            }
            coeffs[k] = BigInt::one();
            return FpPoly::new(ctx, coeffs);
        }
        pows.push(next);
        if pows.len() > n {
            unreachable!("minimal polynomial must have degree <= dimension");
        }
    }
}

/// Split an etale algebra component into field components.
fn split_components(
    ctx: &FpCtx,
    comp: Component,
    mul: &dyn Fn(&[BigInt], &[BigInt]) -> Vec<BigInt>,
    p: &BigInt,
) -> Result<Vec<Component>> {
    let dim = comp.basis.len();
    if dim == 0 {
        return Ok(vec![]);
    }
    if dim == 1 {
        return Ok(vec![comp]);
    }
    // candidate elements: basis vectors, pairwise sums, then seeded random
    let mut candidates: Vec<Vec<BigInt>> = comp.basis.clone();
    for i in 0..comp.basis.len() {
        for j in i + 1..comp.basis.len() {
            let s: Vec<BigInt> = comp.basis[i]
                .iter()
                .zip(&comp.basis[j])
                .map(|(a, b)| ctx.add(a, b))
                .collect();
            candidates.push(s);
        }
    }
    let mut seed = Vec::new();
    for b in &comp.basis {
        for v in b {
            seed.extend_from_slice(&v.to_signed_bytes_le());
        }
    }
    seed.extend_from_slice(&p.to_signed_bytes_le());
    let mut rng = crate::rng::XorShift64::from_bytes(&seed);
    let n = comp.one.len();
    for _ in 0..256 {
        let mut v = vec![BigInt::zero(); n];
        for b in &comp.basis {
            let c = rng.below_int(p);
            for (k, bv) in b.iter().enumerate() {
                v[k] = ctx.add(&v[k], &ctx.mul(&c, bv));
            }
        }
        candidates.push(v);
    }
    for z in &candidates {
        // project into the component
        let z = mul(z, &comp.one);
        let mp = minpoly_of(ctx, &comp.one, &z, mul);
        if mp.deg() == dim && fp::is_irreducible(ctx, &mp) {
            // the component is a field
            return Ok(vec![comp]);
        }
        let factors = fp::factor(ctx, &mp);
        if factors.len() >= 2 || (factors.len() == 1 && factors[0].1 > 1) {
            if factors.len() == 1 {
                continue; // nilpotent behaviour cannot happen in etale part
            }
            // idempotent split
            let mut parts = Vec::new();
            for (h, _) in &factors {
                let u = {
                    // u = mp / h
                    let (q, r) = mp.divrem(ctx, h);
                    debug_assert!(r.is_zero());
                    q
                };
                let w = u.inv_mod(ctx, h).expect("coprime factors");
                // e = (u * w)(z) evaluated in the algebra
                let uw = u.mul(ctx, &w);
                let e = eval_poly_in_algebra(ctx, &uw, &z, &comp.one, mul);
                // new component: e * basis
                let rows: Vec<Vec<BigInt>> = comp
                    .basis
                    .iter()
                    .map(|b| mul(&e, b))
                    .collect();
                let basis = echelon_rows(ctx, rows);
                parts.push(Component { basis, one: e });
            }
            let mut out = Vec::new();
            for part in parts {
                out.extend(split_components(ctx, part, mul, p)?);
            }
            return Ok(out);
        }
    }
    Err(Error::BudgetExceeded(
        "algebra splitting candidates exhausted".to_string(),
    ))
}

/// Find an element of the field component whose minimal polynomial has
/// degree equal to the component dimension.
fn find_primitive(
    ctx: &FpCtx,
    comp: &Component,
    mul: &dyn Fn(&[BigInt], &[BigInt]) -> Vec<BigInt>,
) -> Result<(Vec<BigInt>, FpPoly)> {
    let dim = comp.basis.len();
    let mut candidates: Vec<Vec<BigInt>> = comp.basis.clone();
    for i in 0..comp.basis.len() {
        for j in i + 1..comp.basis.len() {
            let s: Vec<BigInt> = comp.basis[i]
                .iter()
                .zip(&comp.basis[j])
                .map(|(a, b)| ctx.add(a, b))
                .collect();
            candidates.push(s);
        }
    }
    let mut seed = alloc::vec![7u8];
    for b in &comp.basis {
        for v in b {
            seed.extend_from_slice(&v.to_signed_bytes_le());
        }
    }
    let mut rng = crate::rng::XorShift64::from_bytes(&seed);
    let n = comp.one.len();
    for _ in 0..256 {
        let mut v = vec![BigInt::zero(); n];
        for b in &comp.basis {
            let c = rng.below_int(&ctx.p);
            for (k, bv) in b.iter().enumerate() {
                v[k] = ctx.add(&v[k], &ctx.mul(&c, bv));
            }
        }
        candidates.push(v);
    }
    for z in &candidates {
        let z = mul(z, &comp.one);
        let mp = minpoly_of(ctx, &comp.one, &z, mul);
        if mp.deg() == dim && fp::is_irreducible(ctx, &mp) {
            return Ok((z, mp));
        }
    }
    Err(Error::BudgetExceeded(
        "no primitive element found in residue component".to_string(),
    ))
}

fn eval_poly_in_algebra(
    ctx: &FpCtx,
    poly: &FpPoly,
    z: &[BigInt],
    one: &[BigInt],
    mul: &dyn Fn(&[BigInt], &[BigInt]) -> Vec<BigInt>,
) -> Vec<BigInt> {
    let n = one.len();
    let mut acc = vec![BigInt::zero(); n];
    for c in poly.c.iter().rev() {
        acc = mul(&acc, z);
        for (k, ov) in one.iter().enumerate() {
            acc[k] = ctx.add(&acc[k], &ctx.mul(c, ov));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// archimedean embeddings, exact comparison, bounded enumeration
// ---------------------------------------------------------------------------

impl NumberField {
    /// Enclosure of the j-th real embedding of the generator.
    pub fn root_interval(&self, j: usize, prec_bits: u32) -> QInterval {
        let (lo, hi) = &self.real_roots[j];
        if lo == hi {
            return QInterval::point(lo.clone());
        }
        let (lo, hi) = poly::refine_root(&self.defining_poly, &(lo.clone(), hi.clone()), prec_bits);
        QInterval::new(lo, hi)
    }

    /// Enclosure of sigma_j(x).
    pub fn embed_interval(&self, x: &FieldElement, j: usize, prec_bits: u32) -> QInterval {
        let g = self.to_power_poly(x);
        eval_poly_interval(&g.c, &self.root_interval(j, prec_bits))
    }

    /// Exact sign of sigma_j(x) in {-1, 0, 1}.
    pub fn sign_at(&self, x: &FieldElement, j: usize) -> Result<i32> {
        if x.is_zero() {
            return Ok(0);
        }
        let mut prec = self.precision.start_bits;
        loop {
            let iv = self.embed_interval(x, j, prec);
            if let Some(s) = iv.sign() {
                if s != 0 {
                    return Ok(s);
                }
                // exact zero interval impossible for nonzero x
            }
            if prec >= self.precision.cap_bits {
                return Err(Error::PrecisionExhausted);
            }
            prec = (prec * 2).min(self.precision.cap_bits);
        }
    }

    /// Exact comparison sigma_j(x) vs coeff*sqrt(radicand).
    ///
    /// Boundary cases (equal absolute values) are resolved exactly: equality
    /// of squares is the divisibility test f | (g^2 - coeff^2 radicand) on
    /// the power-basis polynomial g of x, which holds at one embedding iff at
    /// all of them.
    pub fn cmp_embedding_to_bound(
        &self,
        x: &FieldElement,
        j: usize,
        bound: &RealBound,
    ) -> Result<Ordering> {
        if bound.is_zero() {
            let s = self.sign_at(x, j)?;
            return Ok(s.cmp(&0));
        }
        if x.is_zero() {
            let (_, bs) = bound.square_and_sign();
            return Ok(0.cmp(&bs));
        }
        let g = self.to_power_poly(x);
        let (bsq, bsign) = bound.square_and_sign();
        let diff = g.mul(&g).sub(&QPoly::new(vec![bsq]));
        let h = diff.rem(&self.defining_poly.to_q());
        if h.is_zero() {
            // |sigma_j(x)| = |bound| at every embedding; compare signs
            let xs = self.sign_at(x, j)?;
            return Ok(if xs == bsign {
                Ordering::Equal
            } else {
                xs.cmp(&bsign)
            });
        }
        let mut prec = self.precision.start_bits;
        loop {
            let xiv = self.embed_interval(x, j, prec);
            let biv = bound.enclosure(prec);
            if xiv.disjoint(&biv) {
                return Ok(if xiv.hi < biv.lo {
                    Ordering::Less
                } else {
                    Ordering::Greater
                });
            }
            if prec >= self.precision.cap_bits {
                return Err(Error::PrecisionExhausted);
            }
            prec = (prec * 2).min(self.precision.cap_bits);
        }
    }

    /// All algebraic integers x with lo_j <= sigma_j(x) <= hi_j at every real
    /// embedding. The field must be totally real. Output is canonically
    /// sorted.
    pub fn enumerate_bounded_integers(
        &self,
        bounds: &[(RealBound, RealBound)],
    ) -> Result<Vec<FieldElement>> {
        if !self.is_totally_real() {
            return Err(Error::InvalidInput(
                "bounded enumeration requires a totally real field".to_string(),
            ));
        }
        let d = self.degree;
        if bounds.len() != d {
            return Err(Error::InvalidInput(
                "one bound pair per real embedding required".to_string(),
            ));
        }
        let prec = self.precision.start_bits;
        // coordinate box via the trace-dual basis:
        // c_i = Tr(x * dual_i) = sum_j sigma_j(x) sigma_j(dual_i)
        let t = self.trace_matrix();
        let tq: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| BigRational::from(t.at(i, j).clone()))
                    .collect()
            })
            .collect();
        let tinv = invert_rational(&tq).expect("trace form nondegenerate");
        let radii: Vec<BigRational> = bounds
            .iter()
            .map(|(lo, hi)| {
                let a = lo.abs_upper(prec);
                let b = hi.abs_upper(prec);
                if a > b {
                    a
                } else {
                    b
                }
            })
            .collect();
        let mut limits = Vec::with_capacity(d);
        for i in 0..d {
            // dual_i has coordinates tinv[i] w.r.t. the integral basis
            let dual = FieldElement {
                coords: tinv[i].clone(),
            };
            let mut u = BigRational::zero();
            for (j, radius) in radii.iter().enumerate() {
                let s = self.embed_interval(&dual, j, prec).abs_upper();
                u += radius * s;
            }
            limits.push(u.floor().to_integer());
        }
        // odometer over the box
        let mut total = BigInt::one();
        for l in &limits {
            total *= BigInt::from(2) * l + 1;
        }
        if total > BigInt::from(50_000_000u64) {
            return Err(Error::BudgetExceeded(
                "enumeration box too large".to_string(),
            ));
        }
        // interval pre-filter: one refined enclosure per root and bound,
        // shared across candidates; the exact comparator only runs on
        // boundary-ambiguous candidates
        let roots: Vec<QInterval> = (0..d).map(|j| self.root_interval(j, prec)).collect();
        let lo_enc: Vec<QInterval> = bounds.iter().map(|(lo, _)| lo.enclosure(prec)).collect();
        let hi_enc: Vec<QInterval> = bounds.iter().map(|(_, hi)| hi.enclosure(prec)).collect();
        let mut out = Vec::new();
        let mut counter: Vec<BigInt> = limits.iter().map(|l| -l.clone()).collect();
        'outer: loop {
            let x = self.element_from_int_coords(&counter);
            let g = self.to_power_poly(&x);
            let mut inside = true;
            for j in 0..d {
                let xiv = eval_poly_interval(&g.c, &roots[j]);
                // certainly outside
                if xiv.hi < lo_enc[j].lo || xiv.lo > hi_enc[j].hi {
                    inside = false;
                    break;
                }
                // certainly inside for this embedding
                if xiv.lo > lo_enc[j].hi && xiv.hi < hi_enc[j].lo {
                    continue;
                }
                // ambiguous: decide exactly
                let (lo, hi) = &bounds[j];
                if self.cmp_embedding_to_bound(&x, j, lo)? == Ordering::Less
                    || self.cmp_embedding_to_bound(&x, j, hi)? == Ordering::Greater
                {
                    inside = false;
                    break;
                }
            }
            if inside {
                out.push(x);
            }
            // advance odometer
            for i in 0..d {
                counter[i] += 1;
                if counter[i] <= limits[i] {
                    continue 'outer;
                }
                counter[i] = -limits[i].clone();
            }
            break;
        }
        self.sort_elements(&mut out);
        Ok(out)
    }

    /// Prime-ideal support of a nonzero integral element.
    pub fn element_support(
        &self,
        x: &FieldElement,
        budget: &FactorBudget,
    ) -> Result<Vec<PrimeIdealData>> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        let n = self.norm_int(x).abs();
        if n.is_one() {
            return Ok(vec![]);
        }
        let rational_primes = intfact::prime_support(&n, budget)?;
        let mut out = Vec::new();
        for p in rational_primes {
            for pr in self.factor_rational_prime(&p)? {
                if self.ideal_contains(&pr.ideal, x) {
                    out.push(pr);
                }
            }
        }
        Ok(out)
    }
}

/// Canonical ordering of primes: by rational prime, then HNF lex.
pub fn cmp_primes(a: &PrimeIdealData, b: &PrimeIdealData) -> Ordering {
    a.under
        .cmp(&b.under)
        .then_with(|| a.ideal.lex_key().cmp(&b.ideal.lex_key()))
}

pub fn sort_primes(v: &mut Vec<PrimeIdealData>) {
    v.sort_by(cmp_primes);
    v.dedup_by(|a, b| a.under == b.under && a.ideal == b.ideal);
}

// ---------------------------------------------------------------------------
// embeddings into a larger field
// ---------------------------------------------------------------------------

/// An embedding of F into k given by the image of F's generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingIntoK {
    pub image: FieldElement,
}

/// Verify f_F(image) = 0 in k.
pub fn verify_embedding(
    field_f: &NumberField,
    field_k: &NumberField,
    emb: &EmbeddingIntoK,
) -> Result<()> {
    let mut acc = field_k.zero();
    for c in field_f.defining_poly.c.iter().rev() {
        acc = field_k.mul(&acc, &emb.image);
        acc = field_k.add(&acc, &field_k.from_int(c));
    }
    if acc.is_zero() {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "embedding image is not a root of the defining polynomial".to_string(),
        ))
    }
}

/// Image of x in F under the embedding into k.
pub fn apply_embedding(
    field_f: &NumberField,
    field_k: &NumberField,
    emb: &EmbeddingIntoK,
    x: &FieldElement,
) -> FieldElement {
    let g = field_f.to_power_poly(x);
    let mut acc = field_k.zero();
    for c in g.c.iter().rev() {
        acc = field_k.mul(&acc, &emb.image);
        acc = field_k.add(&acc, &field_k.from_rational(c));
    }
    acc
}
