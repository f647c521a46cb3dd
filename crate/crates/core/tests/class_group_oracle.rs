//! Class group computations cross-checked against the binary quadratic form
//! oracle on imaginary quadratic fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use qmc_core::class_group::{
    class_group, form_class_group_oracle, is_principal, is_principal_with, minkowski_bound,
};
use qmc_core::number_field::{construct_field, NumberField};
use qmc_core::poly::ZPoly;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Field of discriminant D < 0 via the standard monogenic polynomial.
fn imaginary_quadratic(d: i64) -> NumberField {
    assert!(d < 0);
    let rem = d.rem_euclid(4);
    let poly = if rem == 1 {
        // x^2 - x + (1 - d)/4
        ZPoly::from_i64(&[(1 - d) / 4, -1, 1])
    } else {
        assert_eq!(rem, 0);
        ZPoly::from_i64(&[-d / 4, 0, 1])
    };
    let f = construct_field(&poly, None).unwrap();
    assert_eq!(f.field_discriminant, BigInt::from(d));
    f
}

#[test]
fn minkowski_bounds() {
    let qi = imaginary_quadratic(-4);
    let b = minkowski_bound(&qi);
    assert!(b < rat(2, 1) && b > rat(1, 1));
    let qm5 = imaginary_quadratic(-20);
    let b = minkowski_bound(&qm5);
    // exact value 2 sqrt(20)/pi = 2.8470...
    assert!(b > rat(2847, 1000) && b < rat(285, 100));
    let q = construct_field(&ZPoly::from_i64(&[0, 1]), None).unwrap();
    assert_eq!(minkowski_bound(&q), rat(1, 1));
    let qm23 = imaginary_quadratic(-23);
    assert!(minkowski_bound(&qm23) > rat(305, 100));
}

#[test]
fn class_groups_match_form_oracle() {
    for d in [-4i64, -20, -23, -24] {
        let f = imaginary_quadratic(d);
        let cg = class_group(&f).unwrap();
        let oracle = form_class_group_oracle(&BigInt::from(d)).unwrap();
        assert_eq!(cg.elementary_divisors, oracle, "disc {d}");
    }
    // the acceptance quadruple
    let checks = [(-4i64, 1i64, 1i64), (-20, 2, 2), (-23, 3, 3), (-24, 2, 2)];
    for (d, h, h_exp) in checks {
        let f = imaginary_quadratic(d);
        let cg = class_group(&f).unwrap();
        assert_eq!(cg.h, BigInt::from(h), "h of disc {d}");
        assert_eq!(cg.h_exp, BigInt::from(h_exp), "h' of disc {d}");
    }
}

#[test]
fn wider_oracle_corpus() {
    // a few more fundamental discriminants, including a noncyclic group
    for d in [-47i64, -84, -39, -56, -71] {
        let f = imaginary_quadratic(d);
        let cg = class_group(&f).unwrap();
        let oracle = form_class_group_oracle(&BigInt::from(d)).unwrap();
        assert_eq!(cg.elementary_divisors, oracle, "disc {d}");
    }
}

#[test]
fn real_quadratic_trivial_group() {
    let f5 = construct_field(&ZPoly::from_i64(&[-1, -1, 1]), None).unwrap();
    let cg = class_group(&f5).unwrap();
    assert_eq!(cg.h, BigInt::one());
}

#[test]
fn quartic_cyclotomic_fields_have_trivial_group() {
    // Minkowski bound < 2 for both: forced trivial
    let z5 = construct_field(&ZPoly::from_i64(&[1, 1, 1, 1, 1]), None).unwrap();
    let cg = class_group(&z5).unwrap();
    assert_eq!(cg.h, BigInt::one());
    assert!(cg.factor_base.is_empty());
    let z12 = construct_field(&ZPoly::from_i64(&[1, 0, -1, 0, 1]), None).unwrap();
    let cg = class_group(&z12).unwrap();
    assert_eq!(cg.h, BigInt::one());
}

#[test]
fn principality_examples() {
    // (2 + i) in Q(i) is principal with generator 2 + i
    let qi = imaginary_quadratic(-4);
    let x = qi.element_from_int_coords(&[BigInt::from(2), BigInt::one()]);
    let ideal = qi.principal_ideal(&x).unwrap();
    let g = is_principal(&qi, &ideal).unwrap().expect("principal");
    let gi = qi.principal_ideal(&g).unwrap();
    assert!(qi.ideal_eq(&gi, &ideal));

    // prime above 2 in Q(sqrt-5) is not principal; its square is (2)
    let qm5 = imaginary_quadratic(-20);
    let cg = class_group(&qm5).unwrap();
    let p2 = &qm5.factor_rational_prime(&BigInt::from(2)).unwrap()[0];
    assert!(is_principal_with(&qm5, &cg, &p2.ideal).unwrap().is_none());
    let p2sq = qm5.ideal_pow(&p2.ideal, 2);
    let g = is_principal_with(&qm5, &cg, &p2sq).unwrap().expect("P^2 = (2)");
    let two = qm5.ideal_from_int(&BigInt::from(2)).unwrap();
    assert!(qm5.ideal_eq(&qm5.principal_ideal(&g).unwrap(), &two));
}

#[test]
fn factor_base_powers_are_principal() {
    for d in [-20i64, -23, -24, -47] {
        let f = imaginary_quadratic(d);
        let cg = class_group(&f).unwrap();
        let exp = u32::try_from(cg.h_exp.clone()).unwrap();
        for p in &cg.factor_base {
            let pe = f.ideal_pow(&p.ideal, exp);
            assert!(
                is_principal_with(&f, &cg, &pe).unwrap().is_some(),
                "disc {d}: P^h' must be principal"
            );
        }
    }
}
