//! Batch command-line front end.
//!
//! Subcommands: fieldinfo, classgroup, weil-sets, certify, search, suggest,
//! verify. All numeric output is exact decimal text; certificate output is
//! canonical JSON and byte-identical across runs and worker counts.
//!
//! Exit codes: 0 witness found / verified, 1 no witness in bounds,
//! 2 input error, 3 factorization or size budget exceeded.

use std::collections::HashMap;
use std::process::ExitCode;

use num_bigint::BigInt;
use qmc_core::certifier::{
    build_input, build_pair_context, parse_field_spec, parse_job_spec,
    suggest_discriminants, verify_certificate, Candidate, CertifierConfig, FieldSpec, JobSpec,
    RPair,
};
use qmc_core::error::Error;

mod output;
mod parallel;

const TOOL: &str = concat!("qmc ", env!("CARGO_PKG_VERSION"));

const EXIT_OK: u8 = 0;
const EXIT_EMPTY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        eprintln!("{}", usage());
        return ExitCode::from(EXIT_INPUT);
    }
    let sub = args[0].as_str();
    let opts = match Opts::parse(&args[1..]) {
        Ok(o) => o,
        Err(m) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let code = match sub {
        "fieldinfo" => run_over_corpus(&opts, "fields", cmd_fieldinfo),
        "classgroup" => run_over_corpus(&opts, "fields", cmd_classgroup),
        "weil-sets" => run_over_corpus(&opts, "fields", cmd_weil_sets),
        "certify" => run_over_corpus(&opts, "jobs", cmd_certify),
        "search" => run_over_corpus(&opts, "jobs", cmd_search),
        "suggest" => run_over_corpus(&opts, "jobs", cmd_suggest),
        "verify" => run_over_corpus(&opts, "certs", cmd_verify),
        "help" | "--help" | "-h" => {
            println!("{}", usage());
            EXIT_OK
        }
        other => {
            eprintln!("error: unknown subcommand {other}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code)
}

fn usage() -> String {
    [
        "qmc - arithmetic certificates for quaternionic Shimura varieties",
        "",
        "usage: qmc <subcommand> [flags]",
        "",
        "subcommands:",
        "  fieldinfo  --field F.json            degree, signature, discriminant, n_lcm, n_F, class group",
        "  classgroup --field K.json            class group structure and factor base",
        "  weil-sets  --field F.json --ell L --f N (--e E | --u U --k K.json)",
        "                                       dump FR/C/D/P or Q as canonical text",
        "  certify    --job J.json --q Q --q-index I --p P --p-index J [--json]",
        "  search     --job J.json --q-bound N [--workers W] [--json] [--out FILE]",
        "  suggest    --job J.json --q Q --q-index I --p P --p-index J --size-bound N",
        "  verify     --cert C.json",
        "",
        "common flags:",
        "  --strict-abstract        force u = 2 in condition 4",
        "  --precision-bits N       interval precision (env QMC_PRECISION_BITS)",
        "  --trial-bound N          trial division bound for factorization",
        "  --rho-budget N           Pollard rho iteration budget",
        "  --digit-budget N         reject norms above 10^N in trace sets",
        "  --seed-corpus DIR        run over the bundled corpus directory",
        "",
        "exit codes: 0 found/verified, 1 empty, 2 input error, 3 budget exceeded",
    ]
    .join("\n")
}

struct Opts {
    flags: HashMap<String, String>,
    switches: Vec<String>,
}

impl Opts {
    fn parse(args: &[String]) -> Result<Opts, String> {
        let mut flags = HashMap::new();
        let mut switches = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            if !a.starts_with("--") {
                return Err(format!("unexpected argument {a}"));
            }
            let name = a.trim_start_matches("--").to_string();
            match name.as_str() {
                "strict-abstract" | "json" => {
                    switches.push(name);
                    i += 1;
                }
                _ => {
                    let value = args
                        .get(i + 1)
                        .ok_or_else(|| format!("flag --{name} needs a value"))?;
                    flags.insert(name, value.clone());
                    i += 2;
                }
            }
        }
        Ok(Opts { flags, switches })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.flags.get(name).map(|s| s.as_str())
    }

    fn has(&self, name: &str) -> bool {
        self.switches.iter().any(|s| s == name)
    }

    fn get_u64(&self, name: &str) -> Result<Option<u64>, String> {
        match self.get(name) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("flag --{name} needs an integer, got {v}")),
        }
    }

    fn config(&self) -> Result<CertifierConfig, String> {
        let mut cfg = CertifierConfig {
            strict_abstract: self.has("strict-abstract"),
            ..CertifierConfig::default()
        };
        let env_prec = std::env::var("QMC_PRECISION_BITS")
            .ok()
            .and_then(|v| v.parse::<u32>().ok());
        if let Some(bits) = self
            .get_u64("precision-bits")?
            .map(|v| v as u32)
            .or(env_prec)
        {
            cfg.precision.start_bits = bits.max(8);
            cfg.precision.cap_bits = cfg.precision.cap_bits.max(bits);
        }
        if let Some(t) = self.get_u64("trial-bound")? {
            cfg.weil.factor_budget.trial_bound = t;
        }
        if let Some(r) = self.get_u64("rho-budget")? {
            cfg.weil.factor_budget.rho_iterations = r;
        }
        if let Some(d) = self.get_u64("digit-budget")? {
            cfg.weil.max_norm_digits = d as u32;
        }
        Ok(cfg)
    }
}

fn exit_code_of(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded(_)
        | Error::FactorizationIncomplete(_)
        | Error::RelationSearchBudgetExceeded => EXIT_BUDGET,
        Error::DigestMismatch => EXIT_EMPTY,
        _ => EXIT_INPUT,
    }
}

/// Run a command either on its single input or on every matching corpus
/// file (sorted) when --seed-corpus is given.
fn run_over_corpus(opts: &Opts, kind: &str, cmd: fn(&Opts, Option<&str>) -> u8) -> u8 {
    match opts.get("seed-corpus") {
        None => cmd(opts, None),
        Some(dir) => {
            let sub = format!("{dir}/{kind}");
            let mut entries: Vec<String> = match std::fs::read_dir(&sub) {
                Ok(rd) => rd
                    .filter_map(|e| e.ok())
                    .map(|e| e.path().display().to_string())
                    .filter(|p| p.ends_with(".json"))
                    .collect(),
                Err(e) => {
                    eprintln!("error: cannot read corpus directory {sub}: {e}");
                    return EXIT_INPUT;
                }
            };
            entries.sort();
            let mut worst = EXIT_OK;
            for path in entries {
                println!("== {path}");
                let code = cmd(opts, Some(&path));
                worst = worst.max(code);
            }
            worst
        }
    }
}

fn read_json(path: &str) -> Result<serde_json::Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))
}

fn load_field(opts: &Opts, corpus_path: Option<&str>) -> Result<(FieldSpec, String), String> {
    let path = corpus_path
        .map(|p| p.to_string())
        .or_else(|| opts.get("field").map(|s| s.to_string()))
        .ok_or("missing --field".to_string())?;
    let v = read_json(&path)?;
    let spec = parse_field_spec(&v).map_err(|e| format!("{path}: {e}"))?;
    Ok((spec, path))
}

fn load_job(opts: &Opts, corpus_path: Option<&str>) -> Result<(JobSpec, String), String> {
    let path = corpus_path
        .map(|p| p.to_string())
        .or_else(|| opts.get("job").map(|s| s.to_string()))
        .ok_or("missing --job".to_string())?;
    let v = read_json(&path)?;
    let spec = parse_job_spec(&v).map_err(|e| format!("{path}: {e}"))?;
    Ok((spec, path))
}

fn cmd_fieldinfo(opts: &Opts, corpus_path: Option<&str>) -> u8 {
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let (spec, _) = match load_field(opts, corpus_path) {
        Ok(x) => x,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    match output::fieldinfo(&spec, &cfg) {
        Ok(text) => {
            println!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn cmd_classgroup(opts: &Opts, corpus_path: Option<&str>) -> u8 {
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let (spec, _) = match load_field(opts, corpus_path) {
        Ok(x) => x,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    match output::classgroup(&spec, &cfg) {
        Ok(text) => {
            println!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn cmd_weil_sets(opts: &Opts, corpus_path: Option<&str>) -> u8 {
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let (spec, _) = match load_field(opts, corpus_path) {
        Ok(x) => x,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let ell = match opts.get("ell").map(|v| v.parse::<BigInt>()) {
        Some(Ok(v)) => v,
        _ => {
            eprintln!("error: missing or bad --ell");
            return EXIT_INPUT;
        }
    };
    let f_exp = match opts.get_u64("f") {
        Ok(Some(v)) => v as u32,
        _ => {
            eprintln!("error: missing or bad --f");
            return EXIT_INPUT;
        }
    };
    let e = match opts.get_u64("e") {
        Ok(v) => v,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let u = match opts.get_u64("u") {
        Ok(v) => v,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let k_spec = match opts.get("k") {
        None => None,
        Some(path) => match read_json(path).and_then(|v| {
            parse_field_spec(&v).map_err(|e| format!("{path}: {e}"))
        }) {
            Ok(s) => Some(s),
            Err(m) => {
                eprintln!("error: {m}");
                return EXIT_INPUT;
            }
        },
    };
    match output::weil_sets(&spec, &cfg, &ell, f_exp, e, u.map(|x| x as u8), k_spec.as_ref()) {
        Ok(text) => {
            println!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn parse_pair(opts: &Opts) -> Result<Candidate, String> {
    let q = opts
        .get("q")
        .ok_or("missing --q")?
        .parse::<BigInt>()
        .map_err(|_| "bad --q".to_string())?;
    let p = opts
        .get("p")
        .ok_or("missing --p")?
        .parse::<BigInt>()
        .map_err(|_| "bad --p".to_string())?;
    let q_index = opts.get_u64("q-index")?.unwrap_or(0) as usize;
    let p_index = opts.get_u64("p-index")?.unwrap_or(0) as usize;
    Ok(Candidate {
        q,
        q_index,
        p,
        p_index,
    })
}

fn cmd_certify(opts: &Opts, corpus_path: Option<&str>) -> u8 {
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let (spec, _) = match load_job(opts, corpus_path) {
        Ok(x) => x,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let cand = match parse_pair(opts) {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    match output::certify(&spec, &cfg, &cand, TOOL, opts.has("json")) {
        Ok((text, witness, undecided)) => {
            emit(opts, &text);
            if witness {
                EXIT_OK
            } else if undecided {
                EXIT_BUDGET
            } else {
                EXIT_EMPTY
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn cmd_search(opts: &Opts, corpus_path: Option<&str>) -> u8 {
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let (spec, _) = match load_job(opts, corpus_path) {
        Ok(x) => x,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let q_bound = match opts.get_u64("q-bound") {
        Ok(Some(v)) => v,
        Ok(None) => 50,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let workers = match opts.get_u64("workers") {
        Ok(v) => v.unwrap_or(1).max(1) as usize,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let input = match build_input(&spec, &cfg) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_of(&e);
        }
    };
    match parallel::search(&input, q_bound, TOOL, workers) {
        Ok(outcome) => {
            let text = output::search_report(&outcome, opts.has("json"));
            emit(opts, &text);
            if !outcome.certificates.is_empty() {
                EXIT_OK
            } else if outcome.skipped.is_empty() {
                EXIT_EMPTY
            } else {
                EXIT_BUDGET
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn cmd_suggest(opts: &Opts, corpus_path: Option<&str>) -> u8 {
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    // a suggest job may omit the quaternion block
    let path = match corpus_path
        .map(|p| p.to_string())
        .or_else(|| opts.get("job").map(|s| s.to_string()))
        .ok_or("missing --job".to_string())
    {
        Ok(p) => p,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let v = match read_json(&path) {
        Ok(v) => v,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let f_spec = match v.get("field_f").ok_or(Error::ParseError("missing field_f".into())).and_then(parse_field_spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return EXIT_INPUT;
        }
    };
    let k_spec = match v.get("field_k").ok_or(Error::ParseError("missing field_k".into())).and_then(parse_field_spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return EXIT_INPUT;
        }
    };
    let embeddings = match qmc_core::certifier::parse_embeddings(&v) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return EXIT_INPUT;
        }
    };
    let cand = match parse_pair(opts) {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let size_bound = match opts.get_u64("size-bound") {
        Ok(Some(v)) => v,
        Ok(None) => 50,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let ctx = match build_pair_context(&f_spec, &k_spec, &cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_of(&e);
        }
    };
    let pair = RPair {
        q: cand.q,
        q_index: cand.q_index,
        p: cand.p,
        p_index: cand.p_index,
    };
    match suggest_discriminants(&ctx, &embeddings, &pair, size_bound) {
        Ok(suggestions) => {
            for s in &suggestions {
                let parts: Vec<String> =
                    s.iter().map(|(p, i)| format!("[{p},{i}]")).collect();
                println!("suggest ramified = [{}]", parts.join(","));
            }
            EXIT_OK
        }
        Err(Error::NoCandidateWithinBound) => {
            println!("no candidate within bound");
            EXIT_EMPTY
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn cmd_verify(opts: &Opts, corpus_path: Option<&str>) -> u8 {
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let path = match corpus_path
        .map(|p| p.to_string())
        .or_else(|| opts.get("cert").map(|s| s.to_string()))
    {
        Some(p) => p,
        None => {
            eprintln!("error: missing --cert");
            return EXIT_INPUT;
        }
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {path}: {e}");
            return EXIT_INPUT;
        }
    };
    match verify_certificate(&text, &cfg) {
        Ok(true) => {
            println!("verified: all conditions reproduce; digest ok");
            EXIT_OK
        }
        Ok(false) => {
            println!("verification failed: conditions do not reproduce");
            EXIT_EMPTY
        }
        Err(Error::DigestMismatch) => {
            println!("verification failed: digest mismatch");
            EXIT_EMPTY
        }
        Err(e @ Error::ParseError(_)) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn emit(opts: &Opts, text: &str) {
    match opts.get("out") {
        None => println!("{text}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("error: cannot write {path}: {e}");
            }
        }
    }
}
