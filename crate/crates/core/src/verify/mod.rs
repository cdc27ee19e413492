//! Replay of the finite content behind the almost-universality claims.
//!
//! Every check produces [`CheckRecord`]s with the expected and recomputed
//! values side by side. Reports are sorted by case id so that runs with
//! different worker counts print identical output.

pub mod golden;
pub mod identities;
pub mod offsets;
pub mod pipeline;
pub mod predicate;
pub mod report;
pub mod tables;

use rayon::prelude::*;

pub use golden::{verify_golden, GoldenRow, GoldenTable};
pub use identities::{verify_identity_family, IdentityFamily, FAMILIES};
pub use offsets::{proof_case, proof_cases, verify_offsets, OffsetRule, ProofCase};
pub use pipeline::{
    base_witnesses, conjecture_sweep, exceptions, pipeline_agreement, verify_auxiliary_1_1_8_8,
    verify_base_range, verify_candidate_pipeline, Agreement, ConjectureReport,
};
pub use predicate::Predicate;
pub use report::{CheckRecord, Report, Status};
pub use tables::{verify_table_row, TableRow, Tables, Transfer};

use crate::error::Result;
use crate::escalation::{escalate, Classification, Exception};
use crate::trisums::TriangularSum;

/// Bounds used by [`verify_all`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Empirical bound for table rows and candidate sieves.
    pub bound: u64,
    /// Escalation bound for regenerating the candidate lists.
    pub escalation_bound: u64,
    /// Number of `k` values checked past each offset threshold.
    pub offset_span: u64,
    pub identity_depth: u32,
}

impl SuiteConfig {
    pub fn with_bound(bound: u64) -> Self {
        SuiteConfig {
            bound,
            escalation_bound: 100_000,
            offset_span: 2_000,
            identity_depth: 40,
        }
    }
}

/// Every table row, in parallel, sorted by case id.
pub fn verify_tables(tables: &Tables, bound: u64) -> Result<Report> {
    let parts: Vec<Report> = tables
        .rows
        .par_iter()
        .map(|r| verify_table_row(r, bound))
        .collect::<Result<_>>()?;
    let mut rep: Report = parts.into_iter().collect();
    rep.sort();
    Ok(rep)
}

/// Offset schemes with their base ranges and identity families.
pub fn verify_proof_cases(span: u64, depth: u32) -> Report {
    let mut rep = Report::new();
    for case in proof_cases() {
        rep.extend(verify_offsets(&case, span));
        rep.extend(verify_base_range(&case));
    }
    for fam in FAMILIES {
        rep.extend(verify_identity_family(fam, depth));
    }
    rep.sort();
    rep
}

/// Golden-list agreement, then sieve and criterion verdicts for every proper
/// candidate of every exception.
pub fn verify_candidates(bound: u64, escalation_bound: u64) -> Result<Report> {
    let mut rep = Report::new();
    for m in Exception::ALL {
        let m = Exception::new(m)?;
        let esc = escalate(m, escalation_bound, 8)?;
        if let Some(g) = GoldenTable::builtin(m.get()) {
            rep.extend(verify_golden(&g, &esc)?);
        }
        let props: Vec<TriangularSum> = esc
            .with_class(Classification::Proper)
            .map(|r| r.coeffs.clone())
            .collect();
        let agreements: Vec<Agreement> = props
            .par_iter()
            .map(|s| pipeline_agreement(s, m, bound))
            .collect::<Result<_>>()?;
        for a in agreements {
            let id = format!("candidate {}/{}", m, a.sum.key());
            rep.push(CheckRecord::verdict(
                &id,
                format!("pipeline on [0,{bound}] and criterion"),
                "true/true",
                format!("{}/{}", a.pipeline, a.criterion),
                a.pipeline && a.criterion,
            ));
        }
    }
    rep.sort();
    Ok(rep)
}

/// The whole suite.
pub fn verify_all(tables: &Tables, cfg: SuiteConfig) -> Result<Report> {
    let mut rep = verify_tables(tables, cfg.bound)?;
    rep.extend(verify_proof_cases(cfg.offset_span, cfg.identity_depth));
    for (coeffs, expected) in [
        (vec![1, 1, 8, 8], vec![5]),
        (vec![1, 1, 8, 30], vec![5, 71]),
    ] {
        rep.extend(verify_candidate_pipeline(
            &TriangularSum::new(coeffs)?,
            &expected,
            cfg.bound,
        )?);
    }
    rep.extend(verify_auxiliary_1_1_8_8(20, 5000));
    rep.extend(verify_candidates(cfg.bound, cfg.escalation_bound)?);
    rep.sort();
    Ok(rep)
}
