//! Hypothesis checking and certification.
//!
//! For a totally real field F, a totally indefinite quaternion algebra B/F,
//! and a number field k containing the normal closure of F, this module
//! evaluates the six hypotheses for a candidate pair (q-prime of k, p-prime
//! of F), searches for witness pairs, enumerates the B-independent pair set
//! R(u), suggests quaternion discriminants realizing a pair, and emits
//! self-verifiable certificates.
//!
//! Certificates are canonical JSON: keys sorted, every integer a decimal
//! string, arrays in canonical order, digest = SHA-256 of the serialization
//! without the digest field. Verification rebuilds all objects from the
//! echoed inputs, re-runs every check, re-serializes, and compares bytes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::class_group::{class_group_with, ClassGroupConfig};
use crate::cyclotomic_data::{compute_n_f, CyclotomicInvariants};
use crate::error::Error;
use crate::intfact;
use crate::number_field::{
    construct_field_with_precision, verify_embedding, EmbeddingIntoK, NumberField,
    Precision, PrimeIdealData,
};
use crate::quaternion::{
    compute_u, quaternion_from_primes, splitting_evidence, QuaternionData, SplitType,
};
use crate::weil_sets::{compute_q, WeilConfig};
use crate::Result;

/// Knobs shared by all certifier entry points.
#[derive(Clone, Debug, Default)]
pub struct CertifierConfig {
    /// Force u = 2 in condition 4 (the conservative constant from the
    /// abstract) instead of the computed splitting invariant.
    pub strict_abstract: bool,
    pub weil: WeilConfig,
    pub class_group: ClassGroupConfig,
    pub precision: Precision,
}

/// Raw field description: monic integer polynomial (constant term first)
/// and an optional integral basis given by power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub poly: Vec<BigInt>,
    pub basis: Option<Vec<Vec<BigRational>>>,
}

impl FieldSpec {
    pub fn build(&self, precision: Precision) -> Result<NumberField> {
        construct_field_with_precision(
            &crate::poly::ZPoly::new(self.poly.clone()),
            self.basis.clone(),
            precision,
        )
    }
}

/// Complete problem statement: F, the ramification set of B (each prime as
/// its rational prime and index in the canonical factorization order), k,
/// and the images of F's generator under all d embeddings into k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub field_f: FieldSpec,
    pub ramified: Vec<(BigInt, usize)>,
    pub field_k: FieldSpec,
    pub embeddings: Vec<Vec<BigRational>>,
}

/// Derived arithmetic invariants of the (F, B, k) triple.
#[derive(Clone, Debug)]
pub struct DerivedInvariants {
    pub cyclotomic: CyclotomicInvariants,
    pub h_k: BigInt,
    pub h_exp_k: BigInt,
    pub u_computed: u8,
    pub u_effective: u8,
}

/// Verified and preprocessed theorem input.
#[derive(Clone, Debug)]
pub struct TheoremInput {
    pub spec: JobSpec,
    pub field_f: NumberField,
    pub quaternion: QuaternionData,
    pub field_k: NumberField,
    pub embeddings: Vec<EmbeddingIntoK>,
    pub derived: DerivedInvariants,
    pub config: CertifierConfig,
}

/// Build and verify a theorem input: fields are constructed with proven
/// maximal orders, embeddings are verified and counted, k must be totally
/// imaginary, and the derived invariants are computed.
pub fn build_input(spec: &JobSpec, config: &CertifierConfig) -> Result<TheoremInput> {
    let field_f = spec.field_f.build(config.precision)?;
    if !field_f.is_totally_real() {
        return Err(Error::InvalidInput("F must be totally real".to_string()));
    }
    let field_k = spec.field_k.build(config.precision)?;
    if !field_k.is_totally_imaginary() {
        return Err(Error::InvalidInput(
            "k has a real place; the certified statement needs a totally imaginary base field"
                .to_string(),
        ));
    }
    // embeddings: exactly d, distinct, verified roots
    if spec.embeddings.len() != field_f.degree {
        return Err(Error::EmbeddingCountMismatch {
            expected: field_f.degree,
            got: spec.embeddings.len(),
        });
    }
    let mut embeddings = Vec::with_capacity(spec.embeddings.len());
    for coords in &spec.embeddings {
        if coords.len() != field_k.degree {
            return Err(Error::InvalidInput(
                "embedding image has wrong coordinate length".to_string(),
            ));
        }
        let emb = EmbeddingIntoK {
            image: crate::number_field::FieldElement {
                coords: coords.clone(),
            },
        };
        verify_embedding(&field_f, &field_k, &emb)?;
        embeddings.push(emb);
    }
    for i in 0..embeddings.len() {
        for j in i + 1..embeddings.len() {
            if embeddings[i].image == embeddings[j].image {
                return Err(Error::InvalidInput("embeddings must be distinct".to_string()));
            }
        }
    }
    // ramified primes by (rational prime, canonical index)
    let mut primes = Vec::with_capacity(spec.ramified.len());
    for (p, idx) in &spec.ramified {
        let above = field_f.factor_rational_prime(p)?;
        let pr = above.get(*idx).ok_or_else(|| {
            Error::InvalidInput(format!("no prime of index {idx} above {p}"))
        })?;
        primes.push(pr.clone());
    }
    let quaternion = quaternion_from_primes(&field_f, primes)?;
    let cyclotomic = compute_n_f(&field_f, &config.weil.factor_budget)?;
    let cg = class_group_with(&field_k, &config.class_group)?;
    let u_computed = compute_u(&field_f, &quaternion, &field_k, &embeddings)?;
    let u_effective = if config.strict_abstract { 2 } else { u_computed };
    Ok(TheoremInput {
        spec: spec.clone(),
        field_f,
        quaternion,
        field_k,
        embeddings,
        derived: DerivedInvariants {
            cyclotomic,
            h_k: cg.h,
            h_exp_k: cg.h_exp,
            u_computed,
            u_effective,
        },
        config: config.clone(),
    })
}

/// Outcome of a single hypothesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Undecided(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided(_) => "undecided",
        }
    }
}

/// Evidence-bearing report for the six hypotheses on one candidate pair.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub q: BigInt,
    pub q_index: usize,
    pub q_inertia: u32,
    pub p: BigInt,
    pub p_index: usize,
    /// r, the absolute inertia degree of the F-prime.
    pub r: u32,
    pub c1: Verdict,
    pub c2: Verdict,
    pub c3: Verdict,
    /// Splitting classification of every ramified prime in F(sqrt(-q)).
    pub c3_splitting: Vec<(BigInt, usize, SplitType)>,
    pub c4: Verdict,
    /// The full Q set as (rational prime, index) pairs, when computed.
    pub c4_q_set: Option<Vec<(BigInt, usize)>>,
    pub c5: Verdict,
    /// (e, f, gcd(2r, f)) for every prime of k above p.
    pub c5_local: Vec<(u32, u32, u32)>,
    pub c6: Verdict,
    pub c6_valuation: u32,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.c1.passed()
            && self.c2.passed()
            && self.c3.passed()
            && self.c4.passed()
            && self.c5.passed()
            && self.c6.passed()
    }

    /// Inconclusive when nothing failed outright but some condition could
    /// not be decided (factorization or size budget).
    pub fn inconclusive_reason(&self) -> Option<String> {
        let vs = [&self.c1, &self.c2, &self.c3, &self.c4, &self.c5, &self.c6];
        if vs.iter().any(|v| matches!(v, Verdict::Fail)) {
            return None;
        }
        for v in vs {
            if let Verdict::Undecided(m) = v {
                return Some(m.clone());
            }
        }
        None
    }
}

/// Evaluate the six hypotheses for the pair. Cheap conditions (1, 2, 6, 5)
/// run first; the expensive splitting and trace-set conditions (3, 4) are
/// skipped when an earlier one already failed.
pub fn check_conditions(
    input: &TheoremInput,
    q_prime: &PrimeIdealData,
    p_prime: &PrimeIdealData,
) -> Result<ConditionReport> {
    let f = &input.field_f;
    let k = &input.field_k;
    let b = &input.quaternion;
    let r = p_prime.f;
    let mut report = ConditionReport {
        q: q_prime.under.clone(),
        q_index: q_prime.index,
        q_inertia: q_prime.f,
        p: p_prime.under.clone(),
        p_index: p_prime.index,
        r,
        c1: Verdict::Fail,
        c2: Verdict::Fail,
        c3: Verdict::Undecided("not evaluated".to_string()),
        c3_splitting: vec![],
        c4: Verdict::Undecided("not evaluated".to_string()),
        c4_q_set: None,
        c5: Verdict::Fail,
        c5_local: vec![],
        c6: Verdict::Fail,
        c6_valuation: 0,
    };
    // (1) q does not divide 2 Delta
    let two_delta = BigInt::from(2) * &b.delta;
    report.c1 = if (&two_delta % &q_prime.under).is_zero() {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    // (2) absolute inertia degree of the k-prime is odd
    report.c2 = if q_prime.f % 2 == 1 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    // (6) p_F ramifies in B
    report.c6_valuation = f.ideal_valuation(&b.disc_ideal, p_prime);
    report.c6 = if report.c6_valuation >= 1 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    // (5) gcd(2r, f(p')) = r for every prime of k above p
    let mut c5_ok = true;
    for kp in k.factor_rational_prime(&p_prime.under)? {
        let g = (2 * r).gcd(&kp.f);
        if g != r {
            c5_ok = false;
        }
        report.c5_local.push((kp.e, kp.f, g));
    }
    report.c5 = if c5_ok { Verdict::Pass } else { Verdict::Fail };
    let cheap_pass = report.c1.passed()
        && report.c2.passed()
        && report.c5.passed()
        && report.c6.passed();
    if !cheap_pass {
        return Ok(report);
    }
    // (3) B stays a division algebra over F(sqrt(-q)): some ramified prime
    // splits in F(sqrt(-q))
    let evidence = splitting_evidence(f, b, &q_prime.under)?;
    let mut any_split = false;
    for (pr, ty) in &evidence {
        if *ty == SplitType::Split {
            any_split = true;
        }
        report.c3_splitting.push((pr.under.clone(), pr.index, *ty));
    }
    report.c3 = if any_split { Verdict::Pass } else { Verdict::Fail };
    if !any_split {
        return Ok(report);
    }
    // (4) p_F not in Q(N(q-prime), u)
    match compute_q(
        f,
        &input.derived.cyclotomic,
        &input.derived.h_exp_k,
        &q_prime.under,
        q_prime.f,
        input.derived.u_effective,
        &input.config.weil,
    ) {
        Ok(q_set) => {
            let member = q_set
                .iter()
                .any(|pr| pr.under == p_prime.under && pr.index == p_prime.index);
            report.c4_q_set = Some(
                q_set
                    .iter()
                    .map(|pr| (pr.under.clone(), pr.index))
                    .collect(),
            );
            report.c4 = if member { Verdict::Fail } else { Verdict::Pass };
        }
        Err(Error::BudgetExceeded(m)) => {
            report.c4 = Verdict::Undecided(format!("trace-set budget exceeded: {m}"));
        }
        Err(Error::FactorizationIncomplete(n)) => {
            report.c4 = Verdict::Undecided(format!(
                "factorization incomplete; unfactored part {n}"
            ));
        }
        Err(other) => return Err(other),
    }
    Ok(report)
}

/// One point of the search grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub q: BigInt,
    pub q_index: usize,
    pub p: BigInt,
    pub p_index: usize,
}

/// The deterministic candidate grid: rational primes q <= q_bound coprime
/// to 2 Delta, primes of k above q with odd inertia degree, and the
/// ramified primes of B as p_F, in canonical order.
pub fn witness_candidates(input: &TheoremInput, q_bound: u64) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    let two_delta = BigInt::from(2) * &input.quaternion.delta;
    let mut q = BigInt::from(2);
    while q <= BigInt::from(q_bound) {
        if intfact::is_prime(&q) && !(&two_delta % &q).is_zero() {
            for kq in input.field_k.factor_rational_prime(&q)? {
                if kq.f % 2 == 1 {
                    for pf in &input.quaternion.ramified_primes {
                        out.push(Candidate {
                            q: q.clone(),
                            q_index: kq.index,
                            p: pf.under.clone(),
                            p_index: pf.index,
                        });
                    }
                }
            }
        }
        q += 1;
    }
    Ok(out)
}

/// Pure evaluation of a single candidate.
pub fn evaluate_candidate(input: &TheoremInput, cand: &Candidate) -> Result<ConditionReport> {
    let q_prime = input
        .field_k
        .factor_rational_prime(&cand.q)?
        .into_iter()
        .find(|p| p.index == cand.q_index)
        .ok_or_else(|| Error::InvalidInput("candidate q-prime index out of range".to_string()))?;
    let p_prime = input
        .field_f
        .factor_rational_prime(&cand.p)?
        .into_iter()
        .find(|p| p.index == cand.p_index)
        .ok_or_else(|| Error::InvalidInput("candidate p-prime index out of range".to_string()))?;
    check_conditions(input, &q_prime, &p_prime)
}

/// A candidate whose evaluation could not be decided, with the reason.
#[derive(Clone, Debug)]
pub struct SkippedCandidate {
    pub candidate: Candidate,
    pub reason: String,
}

/// Result of a witness search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub certificates: Vec<Certificate>,
    pub skipped: Vec<SkippedCandidate>,
    pub candidates_tried: usize,
}

/// Merge per-candidate reports (in grid order) into the final outcome.
pub fn assemble_outcomes(
    input: &TheoremInput,
    tool: &str,
    reports: Vec<(Candidate, ConditionReport)>,
) -> SearchOutcome {
    let mut certificates = Vec::new();
    let mut skipped = Vec::new();
    let count = reports.len();
    for (cand, report) in reports {
        if report.all_pass() {
            certificates.push(Certificate::build(input, tool, &report));
        } else if let Some(reason) = report.inconclusive_reason() {
            skipped.push(SkippedCandidate {
                candidate: cand,
                reason,
            });
        }
    }
    SearchOutcome {
        certificates,
        skipped,
        candidates_tried: count,
    }
}

/// Sequential witness search over the candidate grid.
pub fn search_witness(input: &TheoremInput, q_bound: u64, tool: &str) -> Result<SearchOutcome> {
    let candidates = witness_candidates(input, q_bound)?;
    let mut reports = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let report = evaluate_candidate(input, &cand)?;
        reports.push((cand, report));
    }
    Ok(assemble_outcomes(input, tool, reports))
}

// ---------------------------------------------------------------------------
// R(u) and discriminant suggestion
// ---------------------------------------------------------------------------

/// Context for the B-independent pair set R(u): F and k with their
/// invariants, but no quaternion algebra.
#[derive(Clone, Debug)]
pub struct PairContext {
    pub field_f: NumberField,
    pub field_k: NumberField,
    pub cyclotomic: CyclotomicInvariants,
    pub h_k: BigInt,
    pub h_exp_k: BigInt,
    pub config: CertifierConfig,
}

pub fn build_pair_context(
    f_spec: &FieldSpec,
    k_spec: &FieldSpec,
    config: &CertifierConfig,
) -> Result<PairContext> {
    let field_f = f_spec.build(config.precision)?;
    if !field_f.is_totally_real() {
        return Err(Error::InvalidInput("F must be totally real".to_string()));
    }
    let field_k = k_spec.build(config.precision)?;
    let cyclotomic = compute_n_f(&field_f, &config.weil.factor_budget)?;
    let cg = class_group_with(&field_k, &config.class_group)?;
    Ok(PairContext {
        field_f,
        field_k,
        cyclotomic,
        h_k: cg.h,
        h_exp_k: cg.h_exp,
        config: config.clone(),
    })
}

/// A pair in R(u), by canonical indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPair {
    pub q: BigInt,
    pub q_index: usize,
    pub p: BigInt,
    pub p_index: usize,
}

/// Enumerate R(u) within the given bounds: pairs (q-prime of k, p-prime of
/// F) with q coprime to 2 d_{F/Q}, odd inertia degree, p_F outside
/// Q(N(q-prime), u), and the gcd condition at p. Candidates whose Q set does
/// not compute within budget are reported in the second component.
pub fn enumerate_r(
    ctx: &PairContext,
    u: u8,
    q_bound: u64,
    p_bound: u64,
) -> Result<(Vec<RPair>, Vec<(RPair, String)>)> {
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    let two_disc = BigInt::from(2) * ctx.field_f.field_discriminant.abs();
    let mut q = BigInt::from(2);
    while q <= BigInt::from(q_bound) {
        if !intfact::is_prime(&q) || (&two_disc % &q).is_zero() {
            q += 1;
            continue;
        }
        for kq in ctx.field_k.factor_rational_prime(&q)? {
            if kq.f % 2 == 0 {
                continue;
            }
            // Q set for this q-prime
            let q_set = match compute_q(
                &ctx.field_f,
                &ctx.cyclotomic,
                &ctx.h_exp_k,
                &kq.under,
                kq.f,
                u,
                &ctx.config.weil,
            ) {
                Ok(s) => s,
                Err(Error::BudgetExceeded(m)) | Err(Error::ParseError(m)) => {
                    // record one skip marker per q-prime
                    skipped.push((
                        RPair {
                            q: kq.under.clone(),
                            q_index: kq.index,
                            p: BigInt::zero(),
                            p_index: 0,
                        },
                        m,
                    ));
                    continue;
                }
                Err(Error::FactorizationIncomplete(n)) => {
                    skipped.push((
                        RPair {
                            q: kq.under.clone(),
                            q_index: kq.index,
                            p: BigInt::zero(),
                            p_index: 0,
                        },
                        format!("factorization incomplete: {n}"),
                    ));
                    continue;
                }
                Err(other) => return Err(other),
            };
            let mut p = BigInt::from(2);
            while p <= BigInt::from(p_bound) {
                if !intfact::is_prime(&p) {
                    p += 1;
                    continue;
                }
                // gcd condition data at p in k
                let k_primes = ctx.field_k.factor_rational_prime(&p)?;
                for pf in ctx.field_f.factor_rational_prime(&p)? {
                    let r = pf.f;
                    if q_set
                        .iter()
                        .any(|s| s.under == pf.under && s.index == pf.index)
                    {
                        continue;
                    }
                    if k_primes.iter().all(|kp| (2 * r).gcd(&kp.f) == r) {
                        out.push(RPair {
                            q: kq.under.clone(),
                            q_index: kq.index,
                            p: p.clone(),
                            p_index: pf.index,
                        });
                    }
                }
                p += 1;
            }
        }
        q += 1;
    }
    Ok((out, skipped))
}

/// Suggest even ramification sets S containing p_F that realize the pair:
/// some member splits in F(sqrt(-q)), q does not divide the discriminant
/// norm, and the full six-condition check passes for B with Ram(B) = S.
/// Pairs of size two are tried by increasing partner norm, then size four.
pub fn suggest_discriminants(
    ctx: &PairContext,
    embeddings: &[Vec<BigRational>],
    pair: &RPair,
    size_bound: u64,
) -> Result<Vec<Vec<(BigInt, usize)>>> {
    // the pair must lie in R(2)
    let (r2, _) = enumerate_r(
        ctx,
        2,
        u64::try_from(pair.q.clone()).unwrap_or(u64::MAX),
        u64::try_from(pair.p.clone()).unwrap_or(u64::MAX),
    )?;
    if !r2.contains(pair) {
        return Err(Error::InvalidInput("pair is not in R(2)".to_string()));
    }
    // candidate partner primes by increasing (norm, prime, index)
    let mut partners: Vec<(BigInt, PrimeIdealData)> = Vec::new();
    let mut ell = BigInt::from(2);
    while ell <= BigInt::from(size_bound) {
        if intfact::is_prime(&ell) {
            for pr in ctx.field_f.factor_rational_prime(&ell)? {
                if pr.under == pair.p && pr.index == pair.p_index {
                    continue;
                }
                partners.push((pr.norm(), pr));
            }
        }
        ell += 1;
    }
    partners.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| crate::number_field::cmp_primes(&a.1, &b.1))
    });
    let f_spec_dummy = FieldSpec {
        poly: ctx.field_f.defining_poly.c.clone(),
        basis: basis_of(&ctx.field_f),
    };
    let k_spec_dummy = FieldSpec {
        poly: ctx.field_k.defining_poly.c.clone(),
        basis: basis_of(&ctx.field_k),
    };
    let mut suggestions = Vec::new();
    let try_set = |ram: Vec<(BigInt, usize)>| -> Result<bool> {
        let spec = JobSpec {
            field_f: f_spec_dummy.clone(),
            ramified: ram.clone(),
            field_k: k_spec_dummy.clone(),
            embeddings: embeddings.to_vec(),
        };
        let input = match build_input(&spec, &ctx.config) {
            Ok(i) => i,
            Err(_) => return Ok(false),
        };
        // q must not divide the discriminant norm
        if (input.quaternion.disc_ideal.norm.clone() % &pair.q).is_zero() {
            return Ok(false);
        }
        let report = evaluate_candidate(
            &input,
            &Candidate {
                q: pair.q.clone(),
                q_index: pair.q_index,
                p: pair.p.clone(),
                p_index: pair.p_index,
            },
        )?;
        Ok(report.all_pass())
    };
    // size-2 sets
    for (_, partner) in &partners {
        let ram = canonical_ram(vec![
            (pair.p.clone(), pair.p_index),
            (partner.under.clone(), partner.index),
        ]);
        if try_set(ram.clone())? {
            suggestions.push(ram);
        }
    }
    // size-4 sets if nothing of size 2 worked
    if suggestions.is_empty() {
        'outer: for i in 0..partners.len() {
            for j in i + 1..partners.len() {
                for l in j + 1..partners.len() {
                    let ram = canonical_ram(vec![
                        (pair.p.clone(), pair.p_index),
                        (partners[i].1.under.clone(), partners[i].1.index),
                        (partners[j].1.under.clone(), partners[j].1.index),
                        (partners[l].1.under.clone(), partners[l].1.index),
                    ]);
                    if ram.len() != 4 {
                        continue;
                    }
                    if try_set(ram.clone())? {
                        suggestions.push(ram);
                        break 'outer;
                    }
                }
            }
        }
    }
    if suggestions.is_empty() {
        return Err(Error::NoCandidateWithinBound);
    }
    Ok(suggestions)
}

fn canonical_ram(mut v: Vec<(BigInt, usize)>) -> Vec<(BigInt, usize)> {
    v.sort();
    v.dedup();
    v
}

fn basis_of(f: &NumberField) -> Option<Vec<Vec<BigRational>>> {
    if f.index.is_one() {
        None
    } else {
        Some(f.basis_matrix.clone())
    }
}

// ---------------------------------------------------------------------------
// certificates
// ---------------------------------------------------------------------------

/// A certificate: canonical JSON with an embedded SHA-256 digest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    value: Value,
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn rational_str(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn field_spec_json(spec: &FieldSpec) -> Value {
    let mut m = Map::new();
    m.insert(
        "poly".to_string(),
        Value::Array(spec.poly.iter().map(|c| s(c)).collect()),
    );
    if let Some(basis) = &spec.basis {
        m.insert(
            "basis".to_string(),
            Value::Array(
                basis
                    .iter()
                    .map(|row| Value::Array(row.iter().map(|c| s(rational_str(c))).collect()))
                    .collect(),
            ),
        );
    }
    Value::Object(m)
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Undecided(m) => json!({ "state": "undecided", "reason": m }),
        other => json!({ "state": other.label() }),
    }
}

impl Certificate {
    /// Assemble the canonical JSON for a passing report.
    pub fn build(input: &TheoremInput, tool: &str, report: &ConditionReport) -> Certificate {
        let mut root = Map::new();
        root.insert("version".to_string(), s("1"));
        root.insert("tool".to_string(), s(tool));
        root.insert("field_f".to_string(), field_spec_json(&input.spec.field_f));
        root.insert("field_k".to_string(), field_spec_json(&input.spec.field_k));
        root.insert(
            "quaternion".to_string(),
            json!({
                "ramified": Value::Array(
                    input
                        .spec
                        .ramified
                        .iter()
                        .map(|(p, i)| Value::Array(vec![s(p), s(i)]))
                        .collect()
                )
            }),
        );
        root.insert(
            "embeddings".to_string(),
            Value::Array(
                input
                    .spec
                    .embeddings
                    .iter()
                    .map(|row| Value::Array(row.iter().map(|c| s(rational_str(c))).collect()))
                    .collect(),
            ),
        );
        root.insert(
            "strict_abstract".to_string(),
            Value::Bool(input.config.strict_abstract),
        );
        root.insert(
            "derived".to_string(),
            json!({
                "n_lcm": s(&input.derived.cyclotomic.nlcm.n_lcm),
                "n_f_norm": s(&input.derived.cyclotomic.n_f_ideal.norm),
                "h_k": s(&input.derived.h_k),
                "h_exp_k": s(&input.derived.h_exp_k),
                "delta": s(&input.quaternion.delta),
                "delta_prime": s(&input.quaternion.delta_prime),
                "u_computed": s(input.derived.u_computed),
                "u_effective": s(input.derived.u_effective),
            }),
        );
        root.insert(
            "witness".to_string(),
            json!({
                "q": s(&report.q),
                "q_index": s(report.q_index),
                "q_inertia": s(report.q_inertia),
                "p": s(&report.p),
                "p_index": s(report.p_index),
                "r": s(report.r),
            }),
        );
        let mut conds = Map::new();
        conds.insert("c1".to_string(), verdict_json(&report.c1));
        conds.insert("c2".to_string(), verdict_json(&report.c2));
        let mut c3 = Map::new();
        c3.insert("state".to_string(), s(report.c3.label()));
        c3.insert(
            "splitting".to_string(),
            Value::Array(
                report
                    .c3_splitting
                    .iter()
                    .map(|(p, i, ty)| Value::Array(vec![s(p), s(i), s(ty)]))
                    .collect(),
            ),
        );
        conds.insert("c3".to_string(), Value::Object(c3));
        let mut c4 = Map::new();
        c4.insert("state".to_string(), s(report.c4.label()));
        if let Some(set) = &report.c4_q_set {
            c4.insert(
                "q_set".to_string(),
                Value::Array(
                    set.iter()
                        .map(|(p, i)| Value::Array(vec![s(p), s(i)]))
                        .collect(),
                ),
            );
        }
        conds.insert("c4".to_string(), Value::Object(c4));
        let mut c5 = Map::new();
        c5.insert("state".to_string(), s(report.c5.label()));
        c5.insert(
            "local".to_string(),
            Value::Array(
                report
                    .c5_local
                    .iter()
                    .map(|(e, f, g)| Value::Array(vec![s(e), s(f), s(g)]))
                    .collect(),
            ),
        );
        conds.insert("c5".to_string(), Value::Object(c5));
        let mut c6 = Map::new();
        c6.insert("state".to_string(), s(report.c6.label()));
        c6.insert("valuation".to_string(), s(report.c6_valuation));
        conds.insert("c6".to_string(), Value::Object(c6));
        root.insert("conditions".to_string(), Value::Object(conds));
        let digest = digest_of(&Value::Object(root.clone()));
        root.insert("digest".to_string(), s(digest));
        Certificate {
            value: Value::Object(root),
        }
    }

    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string(&self.value).expect("serialization cannot fail")
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
        if !value.is_object() {
            return Err(Error::ParseError("certificate must be an object".to_string()));
        }
        Ok(Certificate { value })
    }

    pub fn digest(&self) -> Option<String> {
        self.value
            .get("digest")
            .and_then(|d| d.as_str())
            .map(|x| x.to_string())
    }

    pub fn value(&self) -> &Value {
        &self.value
    }
}

/// SHA-256 hex of the canonical serialization without the digest field.
fn digest_of(value: &Value) -> String {
    let mut v = value.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("digest");
    }
    let bytes = serde_json::to_string(&v).expect("serialization cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(bytes.as_bytes());
    let out = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in out {
        hex.push(char::from_digit((byte >> 4) as u32, 16).unwrap());
        hex.push(char::from_digit((byte & 0xf) as u32, 16).unwrap());
    }
    hex
}

fn get_str(v: &Value, key: &str) -> Result<String> {
    v.get(key)
        .and_then(|x| x.as_str())
        .map(|x| x.to_string())
        .ok_or_else(|| Error::ParseError(format!("missing string field {key}")))
}

fn parse_bigint(text: &str) -> Result<BigInt> {
    text.parse()
        .map_err(|_| Error::ParseError(format!("bad integer {text}")))
}

fn parse_rational(text: &str) -> Result<BigRational> {
    if let Some((n, d)) = text.split_once('/') {
        Ok(BigRational::new(parse_bigint(n)?, parse_bigint(d)?))
    } else {
        Ok(BigRational::from(parse_bigint(text)?))
    }
}

/// Parse a field specification from its JSON form.
pub fn parse_field_spec(v: &Value) -> Result<FieldSpec> {
    let poly = v
        .get("poly")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::ParseError("field spec needs a poly array".to_string()))?;
    let poly: Result<Vec<BigInt>> = poly
        .iter()
        .map(|c| {
            c.as_str()
                .ok_or_else(|| Error::ParseError("poly coefficients are decimal strings".to_string()))
                .and_then(parse_bigint)
        })
        .collect();
    let basis = match v.get("basis") {
        None => None,
        Some(Value::Array(rows)) => {
            let mut out = Vec::new();
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::ParseError("basis rows are arrays".to_string()))?;
                let parsed: Result<Vec<BigRational>> = row
                    .iter()
                    .map(|c| {
                        c.as_str()
                            .ok_or_else(|| {
                                Error::ParseError("basis entries are strings".to_string())
                            })
                            .and_then(parse_rational)
                    })
                    .collect();
                out.push(parsed?);
            }
            Some(out)
        }
        Some(_) => return Err(Error::ParseError("basis must be an array".to_string())),
    };
    Ok(FieldSpec {
        poly: poly?,
        basis,
    })
}

/// Parse a job specification from its JSON form (shared by the CLI input
/// format and the certificate echo).
pub fn parse_job_spec(v: &Value) -> Result<JobSpec> {
    let field_f = parse_field_spec(
        v.get("field_f")
            .ok_or_else(|| Error::ParseError("missing field_f".to_string()))?,
    )?;
    let field_k = parse_field_spec(
        v.get("field_k")
            .ok_or_else(|| Error::ParseError("missing field_k".to_string()))?,
    )?;
    let ram = v
        .get("quaternion")
        .and_then(|x| x.get("ramified"))
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::ParseError("missing quaternion.ramified".to_string()))?;
    let mut ramified = Vec::new();
    for entry in ram {
        let pair = entry
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::ParseError("ramified entries are [p, index]".to_string()))?;
        let p = pair[0]
            .as_str()
            .ok_or_else(|| Error::ParseError("ramified prime must be a string".to_string()))
            .and_then(parse_bigint)?;
        let idx = pair[1]
            .as_str()
            .ok_or_else(|| Error::ParseError("ramified index must be a string".to_string()))?
            .parse::<usize>()
            .map_err(|_| Error::ParseError("bad index".to_string()))?;
        ramified.push((p, idx));
    }
    let embeddings = parse_embeddings(v)?;
    Ok(JobSpec {
        field_f,
        ramified,
        field_k,
        embeddings,
    })
}

/// Parse the embeddings array of a job or certificate.
pub fn parse_embeddings(v: &Value) -> Result<Vec<Vec<BigRational>>> {
    let embs = v
        .get("embeddings")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::ParseError("missing embeddings".to_string()))?;
    let mut embeddings = Vec::new();
    for row in embs {
        let row = row
            .as_array()
            .ok_or_else(|| Error::ParseError("embedding rows are arrays".to_string()))?;
        let parsed: Result<Vec<BigRational>> = row
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| Error::ParseError("embedding entries are strings".to_string()))
                    .and_then(parse_rational)
            })
            .collect();
        embeddings.push(parsed?);
    }
    Ok(embeddings)
}

/// Verify a certificate end to end: digest, reconstruction of every object
/// from the echoed inputs, re-evaluation of all six conditions, and byte
/// equality of the re-emitted certificate.
pub fn verify_certificate(text: &str, config: &CertifierConfig) -> Result<bool> {
    let cert = Certificate::parse(text)?;
    let v = cert.value();
    let claimed = cert
        .digest()
        .ok_or_else(|| Error::ParseError("missing digest".to_string()))?;
    if digest_of(v) != claimed {
        return Err(Error::DigestMismatch);
    }
    let spec = parse_job_spec(v)?;
    let strict = v
        .get("strict_abstract")
        .and_then(|x| x.as_bool())
        .ok_or_else(|| Error::ParseError("missing strict_abstract".to_string()))?;
    let tool = get_str(v, "tool")?;
    let mut cfg = config.clone();
    cfg.strict_abstract = strict;
    let input = build_input(&spec, &cfg)?;
    let witness = v
        .get("witness")
        .ok_or_else(|| Error::ParseError("missing witness".to_string()))?;
    let cand = Candidate {
        q: parse_bigint(&get_str(witness, "q")?)?,
        q_index: get_str(witness, "q_index")?
            .parse()
            .map_err(|_| Error::ParseError("bad q_index".to_string()))?,
        p: parse_bigint(&get_str(witness, "p")?)?,
        p_index: get_str(witness, "p_index")?
            .parse()
            .map_err(|_| Error::ParseError("bad p_index".to_string()))?,
    };
    let report = evaluate_candidate(&input, &cand)?;
    if !report.all_pass() {
        // a budget-limited rerun is inconclusive, not a refutation
        if let Some(reason) = report.inconclusive_reason() {
            return Err(Error::BudgetExceeded(reason));
        }
        return Ok(false);
    }
    let rebuilt = Certificate::build(&input, &tool, &report);
    Ok(rebuilt.to_canonical_string() == cert.to_canonical_string())
}
