//! Offset schemes: for `N = 8n + Σα`, a choice of odd offsets `a_j` on some
//! coefficients so that the residual `N − Σ α_j a_j²` lands where the ternary
//! part is known to represent it.

use num_integer::Integer;
use serde::Serialize;

use super::predicate::Predicate;
use super::report::{CheckRecord, Report};
use crate::qforms::ValuationClass;
use crate::trisums::{odd_square_solvable, TriangularSum};

/// First matching rule wins; the guard is evaluated on `N` (or on `N'` when
/// the scheme strips square factors).
#[derive(Clone, Debug, Serialize)]
pub struct OffsetRule {
    pub when: Predicate,
    pub offsets: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofCase {
    pub id: String,
    pub sum: TriangularSum,
    pub exception: u64,
    /// Coefficients left to the ternary part.
    pub ternary: Vec<u64>,
    /// Coefficients that carry the offsets, in rule order.
    pub offset_coeffs: Vec<u64>,
    /// When set to `p`, `N = p^{2ℓ} N'` with `p² ∤ N'` and the scheme works on `N'`.
    pub strip: Option<u64>,
    pub rules: Vec<OffsetRule>,
    /// Where the residual must land.
    pub target: Predicate,
    /// The scheme is claimed for `N' = 8k + c` with `k ≥ threshold`.
    pub threshold: u64,
    /// Values of `k` below the threshold settled by direct search.
    pub base: Vec<u64>,
    /// Identity families covering the remaining small `k` when stripping.
    pub families: Vec<&'static str>,
}

impl ProofCase {
    /// `c` in `8k + c`: `Σα`, or `Σα mod 8` when square factors are stripped.
    fn offset_const(&self) -> u64 {
        match self.strip {
            Some(_) => self.sum.weight() % 8,
            None => self.sum.weight(),
        }
    }

    pub fn value(&self, k: u64) -> u64 {
        8 * k + self.offset_const()
    }

    pub fn rule_for(&self, n: u64) -> Option<&OffsetRule> {
        self.rules.iter().find(|r| r.when.eval(n))
    }

    pub fn residual(&self, n: u64, offsets: &[u64]) -> Option<u64> {
        let used: u64 = self
            .offset_coeffs
            .iter()
            .zip(offsets)
            .map(|(a, d)| a * d * d)
            .sum();
        n.checked_sub(used)
    }

    /// Modulus after which the rules and the target repeat.
    pub fn period(&self) -> u64 {
        let mut p = 8u64.lcm(&self.target.period());
        for r in &self.rules {
            p = p.lcm(&r.when.period());
        }
        if let Some(q) = self.strip {
            p = p.lcm(&(q * q));
        }
        p
    }
}

fn c(m: u64, r: &[u64]) -> Predicate {
    Predicate::cong(m, r)
}

fn nc(m: u64, r: &[u64]) -> Predicate {
    Predicate::not_cong(m, r)
}

fn all(ps: Vec<Predicate>) -> Predicate {
    Predicate::All(ps)
}

fn rule(when: Predicate, offsets: &[u64]) -> OffsetRule {
    OffsetRule {
        when,
        offsets: offsets.to_vec(),
    }
}

fn sum(c: &[u64]) -> TriangularSum {
    TriangularSum::new(c.to_vec()).expect("valid coefficients")
}

/// Every offset scheme used for the exception-1 sums.
pub fn proof_cases() -> Vec<ProofCase> {
    let always = Predicate::All(vec![]);
    vec![
        ProofCase {
            id: "2,2,3,4".into(),
            sum: sum(&[2, 2, 3, 4]),
            exception: 1,
            ternary: vec![2, 2, 3],
            offset_coeffs: vec![4],
            strip: None,
            rules: vec![rule(c(3, &[0]), &[1]), rule(always.clone(), &[3])],
            target: all(vec![c(8, &[7]), nc(3, &[0])]),
            threshold: 4,
            base: vec![0, 2, 3],
            families: vec![],
        },
        ProofCase {
            id: "2,3,3,4".into(),
            sum: sum(&[2, 3, 3, 4]),
            exception: 1,
            ternary: vec![2, 3, 3],
            offset_coeffs: vec![4],
            strip: Some(3),
            rules: vec![
                rule(c(9, &[2, 3, 5, 6, 8]), &[3]),
                rule(c(9, &[1, 7]), &[1]),
                rule(c(9, &[4]), &[5]),
            ],
            target: all(vec![
                c(8, &[0]),
                Predicate::pattern(3, ValuationClass::Even, &[1]).negate(),
            ]),
            threshold: 13,
            base: vec![1, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
            families: vec!["2,3,3,4:4", "2,3,3,4:20"],
        },
        ProofCase {
            id: "2,3,4,4".into(),
            sum: sum(&[2, 3, 4, 4]),
            exception: 1,
            ternary: vec![2, 3, 4],
            offset_coeffs: vec![4],
            strip: None,
            rules: vec![
                rule(c(5, &[0, 3]), &[1]),
                rule(c(5, &[1, 4]), &[5]),
                rule(c(5, &[2]), &[3]),
            ],
            target: all(vec![Predicate::Gt(1), c(8, &[1]), c(5, &[1, 4])]),
            threshold: 12,
            base: [0].into_iter().chain(2..12).collect(),
            families: vec![],
        },
        ProofCase {
            id: "2,3,4,5".into(),
            sum: sum(&[2, 3, 4, 5]),
            exception: 1,
            ternary: vec![2, 3, 5],
            offset_coeffs: vec![4],
            strip: None,
            rules: vec![
                rule(all(vec![nc(3, &[0]), c(7, &[0, 3, 5, 6])]), &[21]),
                rule(all(vec![nc(3, &[0]), c(7, &[1, 4])]), &[3]),
                rule(all(vec![nc(3, &[0]), c(7, &[2])]), &[9]),
                rule(all(vec![c(3, &[0]), c(7, &[0, 3, 5, 6])]), &[7]),
                rule(all(vec![c(3, &[0]), c(7, &[2, 4])]), &[1]),
                rule(all(vec![c(3, &[0]), c(7, &[1])]), &[5]),
            ],
            target: all(vec![c(8, &[2]), nc(3, &[0]), c(7, &[0, 3, 5, 6])]),
            threshold: 219,
            base: [0].into_iter().chain(2..219).collect(),
            families: vec![],
        },
        ProofCase {
            id: "2,3,4,8".into(),
            sum: sum(&[2, 3, 4, 8]),
            exception: 1,
            ternary: vec![2, 4, 8],
            offset_coeffs: vec![3],
            strip: None,
            // n even exactly when 8n + 17 ≡ 1 mod 16
            rules: vec![rule(c(16, &[1]), &[1]), rule(c(16, &[9]), &[3])],
            target: c(16, &[14]),
            threshold: 2,
            base: vec![0],
            families: vec![],
        },
        ProofCase {
            id: "2,2,3,3,3".into(),
            sum: sum(&[2, 2, 3, 3, 3]),
            exception: 1,
            ternary: vec![2, 2, 3],
            offset_coeffs: vec![3, 3],
            strip: Some(3),
            rules: vec![
                rule(nc(3, &[0]), &[1, 1]),
                rule(c(9, &[3]), &[3, 3]),
                rule(c(9, &[6]), &[1, 3]),
            ],
            target: all(vec![
                c(8, &[7]),
                Predicate::pattern(3, ValuationClass::Odd, &[2]).negate(),
            ]),
            threshold: 7,
            base: vec![1, 3, 4, 5, 6],
            families: vec!["2,2,3,3,3:5", "2,2,3,3,3:21"],
        },
        ProofCase {
            id: "2,2,3,6,9".into(),
            sum: sum(&[2, 2, 3, 6, 9]),
            exception: 1,
            ternary: vec![3, 6, 9],
            offset_coeffs: vec![2, 2],
            strip: None,
            rules: vec![
                rule(c(3, &[0]), &[3, 3]),
                rule(c(3, &[1]), &[1, 1]),
                rule(c(3, &[2]), &[1, 3]),
            ],
            target: all(vec![c(8, &[2]), c(3, &[0])]),
            threshold: 2,
            base: vec![0],
            families: vec![],
        },
    ]
}

pub fn proof_case(id: &str) -> Option<ProofCase> {
    proof_cases().into_iter().find(|c| c.id == id)
}

/// Exhaustive check over one period of residues, then an empirical pass
/// over `k ∈ [threshold, threshold + span)`.
pub fn verify_offsets(case: &ProofCase, span: u64) -> Report {
    let id = case.id.as_str();
    let mut rep = Report::new();
    let period = case.period();
    let c = case.offset_const() % 8;
    let lower = case.value(case.threshold);

    let mut classes = 0u64;
    let mut problems: Vec<String> = Vec::new();
    let mut r = c;
    while r < period {
        if case.strip.is_some_and(|q| r % (q * q) == 0) {
            r += 8;
            continue;
        }
        classes += 1;
        let Some(rl) = case.rule_for(r) else {
            problems.push(format!("{r}: no rule"));
            r += 8;
            continue;
        };
        if rl.offsets.iter().any(|d| d % 2 == 0) {
            problems.push(format!("{r}: even offset {:?}", rl.offsets));
        }
        // least value of the class at or above the threshold
        let first = if r >= lower {
            r
        } else {
            r + (lower - r).div_ceil(period) * period
        };
        let used: u64 = case
            .offset_coeffs
            .iter()
            .zip(&rl.offsets)
            .map(|(a, d)| a * d * d)
            .sum();
        if used >= first {
            problems.push(format!("{r}: residual {first}-{used} not positive"));
            r += 8;
            continue;
        }
        let res = (r + period * used.div_ceil(period) - used) % period;
        match case.target.decide(res, period, first - used) {
            Some(true) => {}
            Some(false) => problems.push(format!("{r}: residual class {res} misses the target")),
            None => problems.push(format!("{r}: residual class {res} undecided")),
        }
        r += 8;
    }
    rep.push(CheckRecord::verdict(
        id,
        format!("offsets over one period mod {period} ({classes} classes)"),
        "[]",
        format!("{problems:?}"),
        problems.is_empty(),
    ));

    let mut bad = Vec::new();
    for k in case.threshold..case.threshold + span {
        let n = case.value(k);
        if case.strip.is_some_and(|q| n % (q * q) == 0) {
            continue;
        }
        let ok = case
            .rule_for(n)
            .and_then(|rl| case.residual(n, &rl.offsets))
            .is_some_and(|res| case.target.eval(res) && odd_square_solvable(&case.ternary, res));
        if !ok {
            bad.push(k);
        }
    }
    rep.push(CheckRecord::verdict(
        id,
        format!(
            "residual odd-represented for k in [{}, {})",
            case.threshold,
            case.threshold + span
        ),
        "[]",
        format!("{:?}", &bad[..bad.len().min(10)]),
        bad.is_empty(),
    ));
    rep
}
