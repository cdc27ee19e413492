//! Shipped candidate lists, compared against a fresh escalation.
//!
//! Each row names a rejected prefix and the window of last coefficients it
//! extends by. Window entries are proper unless listed in `excluded`, where
//! `†` marks a dagger, `*` a star and a bare number a rejected node.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use super::report::{CheckRecord, Report};
use crate::error::{Error, Result};
use crate::escalation::{Classification, Escalation};
use crate::trisums::TriangularSum;

pub const GOLDEN: [(&str, &str); 5] = [
    ("m1", include_str!("../../data/golden/m1.json")),
    ("m4", include_str!("../../data/golden/m4.json")),
    ("m5", include_str!("../../data/golden/m5.json")),
    ("m8", include_str!("../../data/golden/m8.json")),
    ("m2", include_str!("../../data/golden/m2.json")),
];

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenRow {
    pub prefix: Vec<u64>,
    pub range: (u64, u64),
    pub excluded: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenTable {
    pub exception: u64,
    /// Number of proper candidates.
    pub total: usize,
    /// Width of the window past the last prefix coefficient for long prefixes.
    pub tail_width: u64,
    pub rows: Vec<GoldenRow>,
}

impl GoldenRow {
    fn exclusions(&self) -> Result<BTreeMap<u64, Classification>> {
        let mut out = BTreeMap::new();
        for tok in self
            .excluded
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
        {
            let (num, class) = if let Some(n) = tok.strip_suffix('†') {
                (n, Classification::Dagger)
            } else if let Some(n) = tok.strip_suffix('*') {
                (n, Classification::Star)
            } else {
                (tok, Classification::Rejected)
            };
            let a: u64 = num
                .parse()
                .map_err(|_| Error::Data(format!("bad exclusion {tok:?}")))?;
            out.insert(a, class);
        }
        Ok(out)
    }

    /// Every child of the prefix with its expected class.
    pub fn expand(&self) -> Result<Vec<(TriangularSum, Classification)>> {
        let ex = self.exclusions()?;
        if let Some(a) = ex.keys().find(|&&a| a < self.range.0 || a > self.range.1) {
            return Err(Error::Data(format!(
                "exclusion {a} outside {:?}",
                self.range
            )));
        }
        let prefix = TriangularSum::new(self.prefix.clone())?;
        Ok((self.range.0..=self.range.1)
            .map(|a| {
                (
                    prefix.extended(a),
                    ex.get(&a).copied().unwrap_or(Classification::Proper),
                )
            })
            .collect())
    }
}

impl GoldenTable {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Data(e.to_string()))
    }

    pub fn builtin(m: u64) -> Option<Self> {
        GOLDEN
            .iter()
            .map(|(_, t)| Self::parse(t).expect("shipped golden file parses"))
            .find(|g| g.exception == m)
    }

    pub fn expected(&self) -> Result<Vec<(TriangularSum, Classification)>> {
        let mut out = Vec::new();
        for r in &self.rows {
            out.extend(r.expand()?);
        }
        Ok(out)
    }
}

fn fmt_sums<'a>(it: impl Iterator<Item = &'a TriangularSum>) -> String {
    let v: Vec<String> = it.take(8).map(|s| s.key()).collect();
    format!("[{}]", v.join(" "))
}

/// Classification of every listed node, the proper total, and equality of
/// the proper sets in both directions.
pub fn verify_golden(table: &GoldenTable, esc: &Escalation) -> Result<Report> {
    let id = format!("golden m={}", table.exception);
    let mut rep = Report::new();
    if esc.exception != table.exception {
        return Err(Error::Precondition(format!(
            "escalation is for m={}",
            esc.exception
        )));
    }
    let emitted: BTreeMap<&TriangularSum, Classification> = esc
        .records
        .iter()
        .map(|r| (&r.coeffs, r.classification))
        .collect();
    let expected = table.expected()?;
    let mismatched: Vec<String> = expected
        .iter()
        .filter(|(s, c)| emitted.get(s) != Some(c))
        .map(|(s, c)| {
            format!(
                "{}:{}≠{}",
                s.key(),
                c,
                emitted.get(s).map_or("absent".into(), |e| e.to_string())
            )
        })
        .collect();
    rep.push(CheckRecord::verdict(
        &id,
        format!("classification of {} listed nodes", expected.len()),
        "[]",
        format!(
            "[{}]",
            mismatched
                .iter()
                .take(8)
                .cloned()
                .collect::<Vec<_>>()
                .join(" ")
        ),
        mismatched.is_empty(),
    ));
    let want: BTreeSet<&TriangularSum> = expected
        .iter()
        .filter(|(_, c)| *c == Classification::Proper)
        .map(|(s, _)| s)
        .collect();
    let got: BTreeSet<&TriangularSum> = esc
        .with_class(Classification::Proper)
        .map(|r| &r.coeffs)
        .collect();
    rep.push(CheckRecord::new(
        &id,
        "proper total",
        table.total,
        got.len(),
    ));
    rep.push(CheckRecord::new(
        &id,
        "listed proper total",
        table.total,
        want.len(),
    ));
    rep.push(CheckRecord::new(
        &id,
        "emitted but not listed",
        "[]",
        fmt_sums(got.difference(&want).copied()),
    ));
    rep.push(CheckRecord::new(
        &id,
        "listed but not emitted",
        "[]",
        fmt_sums(want.difference(&got).copied()),
    ));
    Ok(rep)
}
