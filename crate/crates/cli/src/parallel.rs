//! Worker-pool driver for the witness search.
//!
//! The candidate grid is split round-robin across workers; every candidate
//! evaluation is a pure function of the input, and results are merged back
//! in grid order, so output is byte-identical for any worker count.

use qmc_core::certifier::{
    assemble_outcomes, evaluate_candidate, witness_candidates, Candidate, ConditionReport,
    SearchOutcome, TheoremInput,
};
use qmc_core::Result;

pub fn search(
    input: &TheoremInput,
    q_bound: u64,
    tool: &str,
    workers: usize,
) -> Result<SearchOutcome> {
    let candidates = witness_candidates(input, q_bound)?;
    let n = candidates.len();
    let mut slots: Vec<Option<Result<(Candidate, ConditionReport)>>> = Vec::new();
    slots.resize_with(n, || None);
    if workers <= 1 || n <= 1 {
        for (i, cand) in candidates.iter().enumerate() {
            slots[i] = Some(evaluate_candidate(input, cand).map(|r| (cand.clone(), r)));
        }
    } else {
        let workers = workers.min(n);
        std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(workers);
            for w in 0..workers {
                let cands = &candidates;
                let handle = scope.spawn(move || {
                    let mut mine = Vec::new();
                    let mut i = w;
                    while i < cands.len() {
                        let r = evaluate_candidate(input, &cands[i]);
                        mine.push((i, r.map(|rep| (cands[i].clone(), rep))));
                        i += workers;
                    }
                    mine
                });
                handles.push(handle);
            }
            for handle in handles {
                for (i, r) in handle.join().expect("worker panicked") {
                    slots[i] = Some(r);
                }
            }
        });
    }
    let mut reports = Vec::with_capacity(n);
    for slot in slots {
        let entry = slot.expect("all candidates evaluated");
        reports.push(entry?);
    }
    Ok(assemble_outcomes(input, tool, reports))
}
