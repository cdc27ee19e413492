//! End-to-end checks on whole sums.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::offsets::ProofCase;
use super::report::{CheckRecord, Report};
use crate::error::Result;
use crate::escalation::{criterion_check, Exception};
use crate::trisums::{odd_square_witness, sieve, TriangularSum};

fn fmt_set(s: &[u64]) -> String {
    let parts: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Unrepresented integers of `sum` in `[0, bound]`.
pub fn exceptions(sum: &TriangularSum, bound: u64) -> Result<Vec<u64>> {
    Ok(sieve(sum, bound)?.unrepresented().collect())
}

/// The sieve must miss exactly `expected` on `[0, bound]`.
pub fn verify_candidate_pipeline(
    sum: &TriangularSum,
    expected: &[u64],
    bound: u64,
) -> Result<Report> {
    let got = exceptions(sum, bound)?;
    let want: Vec<u64> = expected
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut rep = Report::new();
    rep.push(CheckRecord::new(
        &sum.key(),
        format!("exceptions on [0,{bound}]"),
        fmt_set(&want),
        fmt_set(&got),
    ));
    Ok(rep)
}

/// Explicit all-odd solutions of `Σ α_i x_i² = 8k + c` for every base value
/// of a proof case.
pub fn base_witnesses(case: &ProofCase) -> Vec<(u64, Option<Vec<u64>>)> {
    case.base
        .iter()
        .map(|&k| (k, odd_square_witness(case.sum.coeffs(), case.value(k))))
        .collect()
}

pub fn verify_base_range(case: &ProofCase) -> Report {
    let ws = base_witnesses(case);
    let missing: Vec<u64> = ws
        .iter()
        .filter(|(_, w)| w.is_none())
        .map(|(k, _)| *k)
        .collect();
    let mut rep = Report::new();
    rep.push(CheckRecord::verdict(
        &case.id,
        format!("base witnesses ({} values)", ws.len()),
        "[]",
        format!("{missing:?}"),
        missing.is_empty(),
    ));
    rep
}

/// Pipeline and criterion verdicts for one candidate.
#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    pub sum: TriangularSum,
    pub exception: u64,
    pub pipeline: bool,
    pub criterion: bool,
}

pub fn pipeline_agreement(sum: &TriangularSum, m: Exception, bound: u64) -> Result<Agreement> {
    let pipeline = verify_candidate_pipeline(sum, &[m.get()], bound)?.passed();
    let criterion = criterion_check(sum, m)?;
    Ok(Agreement {
        sum: sum.clone(),
        exception: m.get(),
        pipeline,
        criterion,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub sum: TriangularSum,
    pub bound: u64,
    pub unrepresented: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ConjectureReport {
    pub fn passed(&self) -> bool {
        self.unrepresented == [2]
    }
}

/// Sieves `Δ(1,4,5)` to `bound`.
pub fn conjecture_sweep(bound: u64) -> Result<ConjectureReport> {
    let sum = TriangularSum::new(vec![1, 4, 5])?;
    let start = Instant::now();
    let unrepresented = exceptions(&sum, bound)?;
    Ok(ConjectureReport {
        sum,
        bound,
        unrepresented,
        elapsed: start.elapsed(),
    })
}

/// Whether `r = x² + y² + 8z²` with `y ≡ z (mod 2)`.
pub fn represented_1_1_8(r: i64) -> bool {
    if r < 0 {
        return false;
    }
    let mut z = 0i64;
    while 8 * z * z <= r {
        let rz = r - 8 * z * z;
        let mut y = z & 1;
        while y * y <= rz {
            let x2 = rz - y * y;
            let x = num_integer::Roots::sqrt(&x2);
            if x * x == x2 {
                return true;
            }
            y += 2;
        }
        z += 1;
    }
    false
}

/// For every `n ∈ [lo, hi]`, one of `8n+18−8` and `8n+18−72` is
/// `x² + y² + 8z²` with `y ≡ z (mod 2)`.
pub fn verify_auxiliary_1_1_8_8(lo: u64, hi: u64) -> Report {
    let bad: Vec<u64> = (lo..=hi)
        .filter(|&n| {
            let big = 8 * n as i64 + 18;
            !(represented_1_1_8(big - 8) || represented_1_1_8(big - 72))
        })
        .collect();
    let mut rep = Report::new();
    rep.push(CheckRecord::verdict(
        "1,1,8,8",
        format!("8n+10 or 8n-54 is x²+y²+8z², y≡z mod 2, n in [{lo},{hi}]"),
        "[]",
        format!("{:?}", &bad[..bad.len().min(10)]),
        bad.is_empty(),
    ));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::offsets::proof_case;

    fn s(c: &[u64]) -> TriangularSum {
        TriangularSum::new(c.to_vec()).unwrap()
    }

    #[test]
    fn named_pipelines() {
        assert!(verify_candidate_pipeline(&s(&[2, 3, 4, 5]), &[1], 10_000)
            .unwrap()
            .passed());
        assert!(verify_candidate_pipeline(&s(&[1, 1, 8, 8]), &[5], 10_000)
            .unwrap()
            .passed());
        assert!(
            verify_candidate_pipeline(&s(&[1, 1, 8, 30]), &[5, 71], 10_000)
                .unwrap()
                .passed()
        );
        let rep = verify_candidate_pipeline(&s(&[1, 1, 8, 30]), &[5], 10_000).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.records[0].computed, "{5,71}");
    }

    #[test]
    fn base_range_of_2_3_4_5() {
        let case = proof_case("2,3,4,5").unwrap();
        let ws = base_witnesses(&case);
        assert_eq!(ws.len(), 218);
        for (k, w) in ws {
            let w = w.unwrap();
            let total: u64 = case
                .sum
                .coeffs()
                .iter()
                .zip(&w)
                .map(|(a, x)| a * x * x)
                .sum();
            assert_eq!(total, 8 * k + 14);
            assert!(w.iter().all(|x| x % 2 == 1));
        }
    }

    #[test]
    fn conjecture_small() {
        let r = conjecture_sweep(10).unwrap();
        assert_eq!(r.unrepresented, vec![2]);
    }

    #[test]
    fn auxiliary_small_range() {
        // 10 = 1 + 1 + 8; the only way to write 2 has y = ±1, z = 0
        assert!(represented_1_1_8(10));
        assert!(!represented_1_1_8(2));
        assert!(!represented_1_1_8(3));
        assert!(verify_auxiliary_1_1_8_8(20, 300).passed());
    }
}
