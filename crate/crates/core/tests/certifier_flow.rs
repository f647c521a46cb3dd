//! End-to-end certifier checks on a small instance with a known witness:
//! F = Q, B ramified at {3, 17}, k = Q(i). The pair (q = 5, p_F = 17)
//! satisfies all six hypotheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use qmc_core::certifier::{
    build_input, build_pair_context, enumerate_r, search_witness, suggest_discriminants,
    verify_certificate, Candidate, CertifierConfig, FieldSpec, JobSpec, RPair, Verdict,
};
use qmc_core::certifier::evaluate_candidate;
use qmc_core::error::Error;

fn zero_embedding_spec(k_degree: usize) -> Vec<Vec<BigRational>> {
    vec![vec![BigRational::from(BigInt::from(0)); k_degree]]
}

fn job_q_317_qi() -> JobSpec {
    JobSpec {
        field_f: FieldSpec {
            poly: vec![BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        ramified: vec![(BigInt::from(3), 0), (BigInt::from(17), 0)],
        field_k: FieldSpec {
            poly: vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        embeddings: zero_embedding_spec(2),
    }
}

#[test]
fn build_and_derive() {
    let input = build_input(&job_q_317_qi(), &CertifierConfig::default()).unwrap();
    assert_eq!(input.derived.cyclotomic.nlcm.n_lcm, BigInt::from(12));
    assert_eq!(input.derived.h_k, BigInt::from(1));
    assert_eq!(input.derived.u_computed, 2);
    assert_eq!(input.quaternion.delta, BigInt::from(51));
}

#[test]
fn known_witness_passes_all_conditions() {
    let input = build_input(&job_q_317_qi(), &CertifierConfig::default()).unwrap();
    let report = evaluate_candidate(
        &input,
        &Candidate {
            q: BigInt::from(5),
            q_index: 0,
            p: BigInt::from(17),
            p_index: 0,
        },
    )
    .unwrap();
    assert!(report.all_pass(), "report: {report:?}");
    // the Q set evidence must contain the gating primes
    let qset = report.c4_q_set.unwrap();
    assert!(qset.iter().any(|(p, _)| *p == BigInt::from(2)));
    assert!(qset.iter().any(|(p, _)| *p == BigInt::from(3)));
    // p_F = 3 already fails the gcd condition (3 is inert in Q(i)), and the
    // expensive checks are skipped
    let report = evaluate_candidate(
        &input,
        &Candidate {
            q: BigInt::from(5),
            q_index: 0,
            p: BigInt::from(3),
            p_index: 0,
        },
    )
    .unwrap();
    assert_eq!(report.c5, Verdict::Fail);
    assert!(report.inconclusive_reason().is_none());
}

#[test]
fn condition_examples() {
    let input = build_input(&job_q_317_qi(), &CertifierConfig::default()).unwrap();
    // condition 2: prime above 5 in Q(i) has f = 1; a prime above 7 has f = 2
    let cand7 = Candidate {
        q: BigInt::from(7),
        q_index: 0,
        p: BigInt::from(17),
        p_index: 0,
    };
    let report = evaluate_candidate(&input, &cand7).unwrap();
    assert_eq!(report.c2, Verdict::Fail);
    // condition 6 fails when p_F is unramified in B
    let cand = Candidate {
        q: BigInt::from(5),
        q_index: 0,
        p: BigInt::from(7),
        p_index: 0,
    };
    let report = evaluate_candidate(&input, &cand).unwrap();
    assert_eq!(report.c6, Verdict::Fail);
    assert_eq!(report.c6_valuation, 0);
}

#[test]
fn search_finds_and_certificates_roundtrip() {
    let input = build_input(&job_q_317_qi(), &CertifierConfig::default()).unwrap();
    let out = search_witness(&input, 10, "qmc-test 0").unwrap();
    // both primes above 5 give the witness with p_F = 17
    assert_eq!(out.certificates.len(), 2);
    assert!(out.skipped.is_empty());
    for cert in &out.certificates {
        let text = cert.to_canonical_string();
        assert!(verify_certificate(&text, &CertifierConfig::default()).unwrap());
    }
    // determinism: run twice, byte-identical
    let again = search_witness(&input, 10, "qmc-test 0").unwrap();
    let a: Vec<String> = out
        .certificates
        .iter()
        .map(|c| c.to_canonical_string())
        .collect();
    let b: Vec<String> = again
        .certificates
        .iter()
        .map(|c| c.to_canonical_string())
        .collect();
    assert_eq!(a, b);
}

#[test]
fn search_monotone_in_bound() {
    let input = build_input(&job_q_317_qi(), &CertifierConfig::default()).unwrap();
    let small = search_witness(&input, 10, "t").unwrap();
    let large = search_witness(&input, 30, "t").unwrap();
    let small_set: Vec<String> = small
        .certificates
        .iter()
        .map(|c| c.to_canonical_string())
        .collect();
    let large_set: Vec<String> = large
        .certificates
        .iter()
        .map(|c| c.to_canonical_string())
        .collect();
    for s in &small_set {
        assert!(large_set.contains(s));
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let input = build_input(&job_q_317_qi(), &CertifierConfig::default()).unwrap();
    let out = search_witness(&input, 10, "t").unwrap();
    let text = out.certificates[0].to_canonical_string();
    // flip the claimed inertia degree
    let tampered = text.replace("\"q_inertia\":\"1\"", "\"q_inertia\":\"3\"");
    assert_ne!(text, tampered);
    match verify_certificate(&tampered, &CertifierConfig::default()) {
        Err(Error::DigestMismatch) => {}
        other => panic!("expected digest mismatch, got {other:?}"),
    }
    // malformed JSON
    assert!(matches!(
        verify_certificate("{not json", &CertifierConfig::default()),
        Err(Error::ParseError(_))
    ));
}

#[test]
fn duplicate_embeddings_rejected() {
    // F = Q(sqrt5) into Q(zeta5) with the same image twice
    let spec = JobSpec {
        field_f: FieldSpec {
            poly: vec![BigInt::from(-5), BigInt::from(0), BigInt::from(1)],
            basis: Some(vec![
                vec![
                    BigRational::from(BigInt::from(1)),
                    BigRational::from(BigInt::from(0)),
                ],
                vec![
                    BigRational::new(BigInt::from(1), BigInt::from(2)),
                    BigRational::new(BigInt::from(1), BigInt::from(2)),
                ],
            ]),
        },
        ramified: vec![(BigInt::from(2), 0), (BigInt::from(3), 0)],
        field_k: FieldSpec {
            poly: vec![
                BigInt::from(1),
                BigInt::from(1),
                BigInt::from(1),
                BigInt::from(1),
                BigInt::from(1),
            ],
            basis: None,
        },
        embeddings: vec![
            vec![
                BigRational::from(BigInt::from(-1)),
                BigRational::from(BigInt::from(0)),
                BigRational::from(BigInt::from(-2)),
                BigRational::from(BigInt::from(-2)),
            ];
            2
        ],
    };
    match build_input(&spec, &CertifierConfig::default()) {
        Err(Error::InvalidInput(m)) => assert!(m.contains("distinct")),
        other => panic!("expected distinctness rejection, got {other:?}"),
    }
}

#[test]
fn u_invariant_under_embedding_permutation() {
    let embeddings = |swap: bool| {
        let a = vec![
            BigRational::from(BigInt::from(-1)),
            BigRational::from(BigInt::from(0)),
            BigRational::from(BigInt::from(-2)),
            BigRational::from(BigInt::from(-2)),
        ];
        let b = vec![
            BigRational::from(BigInt::from(1)),
            BigRational::from(BigInt::from(0)),
            BigRational::from(BigInt::from(2)),
            BigRational::from(BigInt::from(2)),
        ];
        if swap {
            vec![b, a]
        } else {
            vec![a, b]
        }
    };
    let spec_for = |swap: bool| JobSpec {
        field_f: FieldSpec {
            poly: vec![BigInt::from(-5), BigInt::from(0), BigInt::from(1)],
            basis: Some(vec![
                vec![
                    BigRational::from(BigInt::from(1)),
                    BigRational::from(BigInt::from(0)),
                ],
                vec![
                    BigRational::new(BigInt::from(1), BigInt::from(2)),
                    BigRational::new(BigInt::from(1), BigInt::from(2)),
                ],
            ]),
        },
        ramified: vec![(BigInt::from(11), 0), (BigInt::from(11), 1)],
        field_k: FieldSpec {
            poly: vec![
                BigInt::from(1),
                BigInt::from(1),
                BigInt::from(1),
                BigInt::from(1),
                BigInt::from(1),
            ],
            basis: None,
        },
        embeddings: embeddings(swap),
    };
    let u1 = build_input(&spec_for(false), &CertifierConfig::default())
        .unwrap()
        .derived
        .u_computed;
    let u2 = build_input(&spec_for(true), &CertifierConfig::default())
        .unwrap()
        .derived
        .u_computed;
    assert_eq!(u1, u2);
    assert_eq!(u1, 2);
}

#[test]
fn totally_imaginary_guard() {
    let mut spec = job_q_317_qi();
    spec.field_k = FieldSpec {
        poly: vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)],
        basis: None,
    };
    spec.embeddings = zero_embedding_spec(2);
    match build_input(&spec, &CertifierConfig::default()) {
        Err(Error::InvalidInput(m)) => assert!(m.contains("totally imaginary")),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn strict_abstract_forces_u() {
    // B ramified at {2, 3} over Q with k = Q(i): computed u = 1
    let spec = JobSpec {
        field_f: FieldSpec {
            poly: vec![BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        ramified: vec![(BigInt::from(2), 0), (BigInt::from(3), 0)],
        field_k: FieldSpec {
            poly: vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        embeddings: zero_embedding_spec(2),
    };
    let input = build_input(&spec, &CertifierConfig::default()).unwrap();
    assert_eq!(input.derived.u_computed, 1);
    assert_eq!(input.derived.u_effective, 1);
    let strict = CertifierConfig {
        strict_abstract: true,
        ..CertifierConfig::default()
    };
    let input = build_input(&spec, &strict).unwrap();
    assert_eq!(input.derived.u_computed, 1);
    assert_eq!(input.derived.u_effective, 2);
}

#[test]
fn r_set_example() {
    // F = Q, k = Q(i), u = 2, q <= 20, p <= 50: admissible q are 5, 13, 17
    let cfg = CertifierConfig::default();
    let ctx = build_pair_context(
        &FieldSpec {
            poly: vec![BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        &FieldSpec {
            poly: vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        &cfg,
    )
    .unwrap();
    let (pairs, skipped) = enumerate_r(&ctx, 2, 20, 50).unwrap();
    assert!(skipped.is_empty());
    let mut qs: Vec<BigInt> = pairs.iter().map(|p| p.q.clone()).collect();
    qs.sort();
    qs.dedup();
    assert_eq!(qs, vec![BigInt::from(5), BigInt::from(13), BigInt::from(17)]);
    // gcd condition with F = Q forces odd residue degree, i.e. p = 2 or
    // p = 1 mod 4; and the support primes 2, 3 are never admissible
    for pair in &pairs {
        assert!(pair.p != BigInt::from(2) && pair.p != BigInt::from(3));
        assert_eq!(pair.p.clone() % BigInt::from(4), BigInt::from(1));
    }
    // nonempty on the desk corpus
    assert!(!pairs.is_empty());
}

#[test]
fn suggestion_recipe() {
    let cfg = CertifierConfig::default();
    let ctx = build_pair_context(
        &FieldSpec {
            poly: vec![BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        &FieldSpec {
            poly: vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            basis: None,
        },
        &cfg,
    )
    .unwrap();
    let pair = RPair {
        q: BigInt::from(5),
        q_index: 0,
        p: BigInt::from(17),
        p_index: 0,
    };
    let embeddings = zero_embedding_spec(2);
    let suggestions = suggest_discriminants(&ctx, &embeddings, &pair, 20).unwrap();
    assert!(!suggestions.is_empty());
    // every suggestion has even cardinality and contains p_F
    for s in &suggestions {
        assert_eq!(s.len() % 2, 0);
        assert!(s.contains(&(BigInt::from(17), 0)));
    }
    // the smallest admissible partner is 3 (splits in Q(sqrt-5))
    assert_eq!(suggestions[0], vec![(BigInt::from(3), 0), (BigInt::from(17), 0)]);
}
