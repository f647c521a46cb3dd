//! Deterministic text rendering for the subcommands.

use num_bigint::BigInt;
use num_traits::One;
use qmc_core::certifier::{
    build_input, evaluate_candidate, Candidate, Certificate, CertifierConfig, FieldSpec, JobSpec,
    SearchOutcome, Verdict,
};
use qmc_core::class_group::{class_group_with, minkowski_bound};
use qmc_core::cyclotomic_data::compute_n_f;
use qmc_core::number_field::{FieldElement, NumberField, PrimeIdealData};
use qmc_core::weil_sets::{compute_c, compute_d, compute_p, compute_q, enumerate_fr};
use qmc_core::Result;

fn rational_str(q: &num_rational::BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Elements print as plain integers over Q and as coordinate tuples in
/// higher degree; CLI set dumps are sorted by coordinates.
fn element_str(f: &NumberField, x: &FieldElement) -> String {
    if f.degree == 1 {
        rational_str(&x.coords[0])
    } else {
        let parts: Vec<String> = x.coords.iter().map(rational_str).collect();
        format!("({})", parts.join(","))
    }
}

fn element_set_str(f: &NumberField, xs: &[FieldElement]) -> String {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.coords.cmp(&b.coords));
    let parts: Vec<String> = sorted.iter().map(|x| element_str(f, x)).collect();
    format!("{{{}}}", parts.join(","))
}

fn prime_str(f: &NumberField, p: &PrimeIdealData) -> String {
    if f.degree == 1 {
        p.under.to_string()
    } else {
        format!("{}:{}", p.under, p.index)
    }
}

fn prime_set_str(f: &NumberField, ps: &[PrimeIdealData]) -> String {
    let parts: Vec<String> = ps.iter().map(|p| prime_str(f, p)).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn fieldinfo(spec: &FieldSpec, cfg: &CertifierConfig) -> Result<String> {
    let f = spec.build(cfg.precision)?;
    let mut out = Vec::new();
    out.push(format!("degree = {}", f.degree));
    out.push(format!("signature = ({},{})", f.signature.0, f.signature.1));
    out.push(format!("discriminant = {}", f.field_discriminant));
    out.push(format!("power_basis_index = {}", f.index));
    if f.is_totally_real() {
        let inv = compute_n_f(&f, &cfg.weil.factor_budget)?;
        out.push(format!("n_lcm = {}", inv.nlcm.n_lcm));
        let ms: Vec<String> = inv
            .nlcm
            .admissible_m
            .iter()
            .map(|m| m.to_string())
            .collect();
        out.push(format!("admissible_m = {{{}}}", ms.join(",")));
        out.push(format!("n_F_norm = {}", inv.n_f_ideal.norm));
        out.push(format!(
            "n_F_support = {}",
            prime_set_str(&f, &inv.n_f_support)
        ));
    }
    let cg = class_group_with(&f, &cfg.class_group)?;
    out.push(format!("h = {}", cg.h));
    out.push(format!("h_exp = {}", cg.h_exp));
    let divisors: Vec<String> = cg
        .elementary_divisors
        .iter()
        .map(|d| d.to_string())
        .collect();
    out.push(format!("class_group = [{}]", divisors.join(",")));
    Ok(out.join("\n"))
}

pub fn classgroup(spec: &FieldSpec, cfg: &CertifierConfig) -> Result<String> {
    let f = spec.build(cfg.precision)?;
    let cg = class_group_with(&f, &cfg.class_group)?;
    let mut out = Vec::new();
    out.push(format!("minkowski_bound = {}", rational_str(&minkowski_bound(&f))));
    out.push(format!(
        "factor_base = {}",
        prime_set_str(&f, &cg.factor_base)
    ));
    out.push(format!("relations = {}", cg.relation_matrix.rows));
    let divisors: Vec<String> = cg
        .elementary_divisors
        .iter()
        .map(|d| d.to_string())
        .collect();
    out.push(format!("class_group = [{}]", divisors.join(",")));
    out.push(format!("h = {}", cg.h));
    out.push(format!("h_exp = {}", cg.h_exp));
    Ok(out.join("\n"))
}

#[allow(clippy::too_many_arguments)]
pub fn weil_sets(
    spec: &FieldSpec,
    cfg: &CertifierConfig,
    ell: &BigInt,
    f_exp: u32,
    e: Option<u64>,
    u: Option<u8>,
    k_spec: Option<&FieldSpec>,
) -> Result<String> {
    let f = spec.build(cfg.precision)?;
    let inv = compute_n_f(&f, &cfg.weil.factor_budget)?;
    let mut out = Vec::new();
    let fr = enumerate_fr(&f, ell, f_exp)?;
    let bs: Vec<FieldElement> = fr.iter().map(|w| w.b.clone()).collect();
    out.push(format!("FR({ell}^{f_exp}) b = {}", element_set_str(&f, &bs)));
    match (e, u, k_spec) {
        (Some(e), _, _) => {
            let c = compute_c(&f, ell, f_exp, e)?;
            out.push(format!("C({ell}^{f_exp},{e}) = {}", element_set_str(&f, &c)));
            let d = compute_d(&f, &c, ell, f_exp, e);
            out.push(format!("D({ell}^{f_exp},{e}) = {}", element_set_str(&f, &d)));
            let p = compute_p(&f, &inv, ell, f_exp, e, &cfg.weil)?;
            out.push(format!("P({ell}^{f_exp},{e}) = {}", prime_set_str(&f, &p)));
        }
        (None, Some(u), Some(k_spec)) => {
            let k = k_spec.build(cfg.precision)?;
            let cg = class_group_with(&k, &cfg.class_group)?;
            let q = compute_q(&f, &inv, &cg.h_exp, ell, f_exp, u, &cfg.weil)?;
            out.push(format!("Q({ell}^{f_exp},{u}) = {}", prime_set_str(&f, &q)));
        }
        _ => {
            return Err(qmc_core::Error::InvalidInput(
                "weil-sets needs either --e, or --u with --k".to_string(),
            ))
        }
    }
    Ok(out.join("\n"))
}

fn verdict_str(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".to_string(),
        Verdict::Fail => "fail".to_string(),
        Verdict::Undecided(m) => format!("undecided ({m})"),
    }
}

/// Returns (text, is_witness, is_undecided).
pub fn certify(
    spec: &JobSpec,
    cfg: &CertifierConfig,
    cand: &Candidate,
    tool: &str,
    json: bool,
) -> Result<(String, bool, bool)> {
    let input = build_input(spec, cfg)?;
    let report = evaluate_candidate(&input, cand)?;
    if report.all_pass() {
        let cert = Certificate::build(&input, tool, &report);
        let text = if json {
            cert.to_canonical_string()
        } else {
            format!(
                "witness q={} (index {}) p={} (index {})\ncertificate digest {}",
                report.q,
                report.q_index,
                report.p,
                report.p_index,
                cert.digest().unwrap_or_default()
            )
        };
        return Ok((text, true, false));
    }
    let undecided = report.inconclusive_reason().is_some();
    let mut lines = Vec::new();
    lines.push(format!(
        "pair q={} (index {}) p={} (index {}): not a witness",
        report.q, report.q_index, report.p, report.p_index
    ));
    lines.push(format!("c1 q coprime to 2*Delta: {}", verdict_str(&report.c1)));
    lines.push(format!("c2 odd inertia degree: {}", verdict_str(&report.c2)));
    lines.push(format!("c3 B nonsplit over F(sqrt(-q)): {}", verdict_str(&report.c3)));
    lines.push(format!("c4 p outside Q-set: {}", verdict_str(&report.c4)));
    lines.push(format!("c5 gcd(2r, f) = r above p: {}", verdict_str(&report.c5)));
    lines.push(format!("c6 p ramified in B: {}", verdict_str(&report.c6)));
    Ok((lines.join("\n"), false, undecided))
}

pub fn search_report(outcome: &SearchOutcome, json: bool) -> String {
    if json {
        let certs: Vec<String> = outcome
            .certificates
            .iter()
            .map(|c| c.to_canonical_string())
            .collect();
        let mut lines = Vec::new();
        lines.push(format!(
            "{{\"candidates\":\"{}\",\"witnesses\":\"{}\",\"skipped\":\"{}\"}}",
            outcome.candidates_tried,
            outcome.certificates.len(),
            outcome.skipped.len()
        ));
        lines.extend(certs);
        return lines.join("\n");
    }
    let mut lines = Vec::new();
    lines.push(format!(
        "candidates tried: {}; witnesses: {}; inconclusive: {}",
        outcome.candidates_tried,
        outcome.certificates.len(),
        outcome.skipped.len()
    ));
    for cert in &outcome.certificates {
        let v = cert.value();
        let w = &v["witness"];
        lines.push(format!(
            "witness q={} (index {}) p={} (index {}) digest {}",
            w["q"].as_str().unwrap_or("?"),
            w["q_index"].as_str().unwrap_or("?"),
            w["p"].as_str().unwrap_or("?"),
            w["p_index"].as_str().unwrap_or("?"),
            cert.digest().unwrap_or_default()
        ));
    }
    for skip in &outcome.skipped {
        lines.push(format!(
            "inconclusive q={} (index {}) p={} (index {}): {}",
            skip.candidate.q,
            skip.candidate.q_index,
            skip.candidate.p,
            skip.candidate.p_index,
            skip.reason
        ));
    }
    lines.join("\n")
}
