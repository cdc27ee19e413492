//! Truant-driven escalation for sums that miss exactly one integer `m`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trisums::{sieve, RepSieve, TriangularSum};

/// One of the five integers a sum can miss while representing all others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Exception(u64);

impl Exception {
    pub const ALL: [u64; 5] = [1, 2, 4, 5, 8];

    pub fn new(m: u64) -> Result<Self> {
        if Self::ALL.contains(&m) {
            Ok(Self(m))
        } else {
            Err(Error::InvalidException(m))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Integers that, together with not representing `m`, decide whether a
    /// sum misses exactly `m`.
    pub fn criterion_set(self) -> &'static [u64] {
        match self.0 {
            1 => &[2, 3, 4, 8, 10, 16, 19],
            2 => &[1, 4, 5, 7, 8, 9, 11, 16, 17, 20, 29, 35],
            4 => &[1, 2, 11, 14, 19, 25, 29, 46, 50],
            5 => &[1, 2, 8, 14, 26, 40, 41, 47, 59, 71],
            8 => &[1, 2, 5, 17, 89],
            _ => unreachable!(),
        }
    }
}

impl TryFrom<u64> for Exception {
    type Error = Error;
    fn try_from(m: u64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<Exception> for u64 {
    fn from(e: Exception) -> u64 {
        e.0
    }
}

impl fmt::Display for Exception {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// Misses only `m`, and every proper sub-sum misses at least two integers.
    Proper,
    /// Misses only `m`, but so does some proper sub-sum.
    Dagger,
    /// Misses nothing up to the bound.
    Star,
    Rejected,
}

impl Classification {
    pub fn mark(self) -> &'static str {
        match self {
            Classification::Proper => "",
            Classification::Dagger => "†",
            Classification::Star => "*",
            Classification::Rejected => "x",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Proper => "proper",
            Classification::Dagger => "dagger",
            Classification::Star => "star",
            Classification::Rejected => "rejected",
        })
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub coeffs: TriangularSum,
    pub exception: u64,
    pub classification: Classification,
    pub verified_bound: u64,
    /// Proper only under an unproved hypothesis (`Δ(1,4,5)` for `m = 2`).
    #[serde(default, skip_serializing_if = "is_false")]
    pub conditional: bool,
}

/// First unrepresented integers of one maximal sub-sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsumWitness {
    pub sub: TriangularSum,
    pub misses: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classified {
    pub record: CandidateRecord,
    /// The first few unrepresented integers.
    pub unrepresented: Vec<u64>,
    /// Sub-sum witnesses, present for candidates missing exactly `m`.
    pub witnesses: Vec<SubsumWitness>,
}

fn is_conditional(sum: &TriangularSum, m: Exception, class: Classification) -> bool {
    m.get() == 2 && sum.coeffs() == [1, 4, 5] && class == Classification::Proper
}

/// Memo of the first two unrepresented integers of sub-sums.
#[derive(Default)]
struct MissCache {
    bound: u64,
    map: Mutex<HashMap<TriangularSum, Vec<u64>>>,
}

impl MissCache {
    fn new(bound: u64) -> Self {
        Self {
            bound,
            map: Mutex::default(),
        }
    }

    fn misses(&self, sum: &TriangularSum) -> Result<Vec<u64>> {
        if let Some(v) = self.map.lock().unwrap().get(sum) {
            return Ok(v.clone());
        }
        let v = sieve(sum, self.bound)?.truants(2).values;
        self.map.lock().unwrap().insert(sum.clone(), v.clone());
        Ok(v)
    }
}

fn classify_sieve(
    sv: &RepSieve,
    sum: &TriangularSum,
    m: Exception,
    cache: &MissCache,
) -> Result<Classified> {
    let bound = sv.bound();
    let unrepresented: Vec<u64> = sv.unrepresented().take(8).collect();
    let mut witnesses = Vec::new();
    let class = if unrepresented.is_empty() {
        Classification::Star
    } else if unrepresented != [m.get()] {
        Classification::Rejected
    } else {
        let mut class = Classification::Proper;
        for sub in sum.maximal_subsums() {
            let misses = cache.misses(&sub)?;
            if misses.len() < 2 {
                class = Classification::Dagger;
            }
            witnesses.push(SubsumWitness { sub, misses });
        }
        class
    };
    Ok(Classified {
        record: CandidateRecord {
            coeffs: sum.clone(),
            exception: m.get(),
            classification: class,
            verified_bound: bound,
            conditional: is_conditional(sum, m, class),
        },
        unrepresented,
        witnesses,
    })
}

/// Classifies `sum` against exception `m` using integers up to `bound`.
pub fn classify(sum: &TriangularSum, m: Exception, bound: u64) -> Result<Classified> {
    if bound < m.get() {
        return Err(Error::Precondition(format!(
            "bound {bound} is below the exception {m}"
        )));
    }
    let sv = sieve(sum, bound)?;
    classify_sieve(&sv, sum, m, &MissCache::new(bound))
}

/// Whether `sum` represents every integer of the criterion set and not `m`.
pub fn criterion_check(sum: &TriangularSum, m: Exception) -> Result<bool> {
    let set = m.criterion_set();
    let top = *set.iter().max().unwrap();
    let sv = sieve(sum, top.max(m.get()))?;
    Ok(!sv.contains(m.get()) && set.iter().all(|&n| sv.contains(n)))
}

/// Output of one escalation run.
#[derive(Clone, Debug, Serialize)]
pub struct Escalation {
    pub exception: u64,
    pub bound: u64,
    pub max_k: usize,
    /// Every classified node except the root, sorted by coefficients.
    pub records: Vec<CandidateRecord>,
    /// Rejected nodes left unexpanded at the depth cap.
    pub frontier: usize,
    pub diagnostics: Vec<String>,
}

impl Escalation {
    pub fn with_class(&self, class: Classification) -> impl Iterator<Item = &CandidateRecord> {
        self.records
            .iter()
            .filter(move |r| r.classification == class)
    }

    /// Proper candidates per number of coefficients.
    pub fn proper_by_len(&self) -> Vec<(usize, usize)> {
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for r in self.with_class(Classification::Proper) {
            *counts.entry(r.coeffs.len()).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// `proper=29 (quaternary=11, quinary=18)`.
    pub fn summary(&self) -> String {
        let names = [
            "",
            "unary",
            "binary",
            "ternary",
            "quaternary",
            "quinary",
            "senary",
            "septenary",
            "octonary",
        ];
        let total: usize = self.proper_by_len().iter().map(|&(_, c)| c).sum();
        let parts: Vec<String> = self
            .proper_by_len()
            .into_iter()
            .map(|(k, c)| {
                let name = names.get(k).copied().unwrap_or("k");
                let conditional = self
                    .with_class(Classification::Proper)
                    .filter(|r| r.coeffs.len() == k && r.conditional)
                    .count();
                if conditional > 0 {
                    format!("{name}={c} conditional")
                } else {
                    format!("{name}={c}")
                }
            })
            .collect();
        format!("proper={total} ({})", parts.join(", "))
    }
}

/// Largest coefficient allowed for the next child, from the node's truants.
fn child_window(
    sum: &TriangularSum,
    sv: &RepSieve,
    m: Exception,
) -> std::result::Result<(u64, u64), String> {
    let tr = sv.truants(2);
    let lo = sum.last().unwrap_or(1);
    let Some(t1) = tr.get(0) else {
        return Err(format!("{sum}: no truant below {}", sv.bound()));
    };
    let hi = if t1 == m.get() {
        match tr.get(1) {
            Some(t2) => t2,
            None => {
                return Err(format!(
                    "{sum}: second truant exhausted at bound {}",
                    sv.bound()
                ))
            }
        }
    } else {
        t1
    };
    Ok((lo, hi))
}

struct Expanded {
    records: Vec<CandidateRecord>,
    next: Vec<RepSieve>,
    frontier: usize,
    diagnostics: Vec<String>,
}

fn expand(sv: &RepSieve, m: Exception, cache: &MissCache, keep: bool) -> Result<Expanded> {
    let crate::trisums::SieveOwner::Sum(sum) = &sv.owner else {
        unreachable!("escalation nodes are sums");
    };
    let mut out = Expanded {
        records: Vec::new(),
        next: Vec::new(),
        frontier: 0,
        diagnostics: Vec::new(),
    };
    let (lo, hi) = match child_window(sum, sv, m) {
        Ok(w) => w,
        Err(msg) => {
            out.diagnostics.push(msg);
            return Ok(out);
        }
    };
    for alpha in lo..=hi {
        let child = sv.extend(alpha)?;
        let csum = sum.extended(alpha);
        let c = classify_sieve(&child, &csum, m, cache)?;
        let extend =
            c.record.classification == Classification::Rejected && !child.contains(m.get());
        out.records.push(c.record);
        if extend && keep {
            out.next.push(child);
        } else if extend {
            out.frontier += 1;
        }
    }
    Ok(out)
}

/// Breadth-first escalation from the empty sum up to `max_k` coefficients.
///
/// A node with first truant `t1` is extended by `α ∈ [α_last, t1]`, or by
/// `α ∈ [α_last, t2]` when `t1 = m`. Nodes representing `m` and nodes
/// missing at most `m` are leaves.
pub fn escalate(m: Exception, bound: u64, max_k: usize) -> Result<Escalation> {
    if bound < 2 * Exception::ALL.iter().max().unwrap() {
        return Err(Error::Precondition(format!("bound {bound} is too small")));
    }
    let cache = MissCache::new(bound);
    let mut level = vec![sieve(&TriangularSum::empty(), bound)?];
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut frontier = 0;
    for depth in 0..max_k {
        let keep = depth + 1 < max_k;
        let expanded: Vec<Expanded> = level
            .par_iter()
            .map(|sv| expand(sv, m, &cache, keep))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for e in expanded {
            frontier += e.frontier;
            records.extend(e.records);
            next.extend(e.next);
            diagnostics.extend(e.diagnostics);
        }
        level = next;
    }
    records.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    Ok(Escalation {
        exception: m.get(),
        bound,
        max_k,
        records,
        frontier,
        diagnostics,
    })
}

/// Children of a rejected prefix, checked against the fixed-width tail window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailReport {
    pub prefix: TriangularSum,
    pub exception: u64,
    pub bound: u64,
    /// Window from the prefix's truants.
    pub window: (u64, u64),
    /// `α_last + m`.
    pub expected_hi: u64,
    pub children: Vec<(u64, Classification)>,
    pub passed: bool,
}

/// Checks that a rejected prefix with at least five coefficients extends over
/// `[α_last, α_last + m]` with the first child rejected and the rest dagger.
pub fn tail_rule_check(m: Exception, prefix: &TriangularSum, bound: u64) -> Result<TailReport> {
    if prefix.len() < 5 {
        return Err(Error::Precondition(format!(
            "{prefix} has fewer than five coefficients"
        )));
    }
    let sv = sieve(prefix, bound)?;
    if sv.contains(m.get()) {
        return Err(Error::Precondition(format!("{prefix} represents {m}")));
    }
    let head: Vec<u64> = sv.unrepresented().take(2).collect();
    if head == [m.get()] {
        return Err(Error::Precondition(format!(
            "{prefix} already misses only {m}"
        )));
    }
    let window = child_window(prefix, &sv, m).map_err(|msg| Error::BoundExhausted {
        bound,
        context: msg,
    })?;
    let cache = MissCache::new(bound);
    let mut children = Vec::new();
    for alpha in window.0..=window.1 {
        let csum = prefix.extended(alpha);
        let c = classify_sieve(&sv.extend(alpha)?, &csum, m, &cache)?;
        children.push((alpha, c.record.classification));
    }
    let last = prefix.last().unwrap();
    let expected_hi = last + m.get();
    let passed = window == (last, expected_hi)
        && children.iter().all(|&(a, c)| {
            if a == last {
                c == Classification::Rejected
            } else {
                c == Classification::Dagger
            }
        });
    Ok(TailReport {
        prefix: prefix.clone(),
        exception: m.get(),
        bound,
        window,
        expected_hi,
        children,
        passed,
    })
}
