//! Shipped per-row data for the ternary sections and its verification.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::predicate::Predicate;
use super::report::{CheckRecord, Report};
use crate::error::{Error, Result};
use crate::goodvec::{self, PmeCertificate};
use crate::qforms::{self, form_sieve, Mat3, TernaryForm};

/// The data file compiled into the crate.
pub const BUILTIN_TABLES: &str = include_str!("../../data/tables.json");

pub const SCHEMA: u32 = 1;

/// One transfer step: a modulus, the residues it covers and what the good
/// vector computation should find there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub d: u64,
    pub a: Vec<u64>,
    /// `|B_f(g, d, a)|` for each listed `a`.
    pub b_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Mat3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<[i64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qz: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub id: String,
    /// The `(α1, α2, α3)` prefix the row belongs to.
    pub group: String,
    pub exception: u64,
    /// Coefficients of the ternary section the form comes from.
    pub ternary: Vec<u64>,
    pub f: TernaryForm,
    pub h: usize,
    /// The other classes in the genus of `f`; the first one is `g`.
    pub mates: Vec<TernaryForm>,
    pub transfers: Vec<Transfer>,
    /// Sufficient condition for `m → f`, as printed.
    pub condition: Predicate,
    /// Extra conjunct needed when the printed condition alone admits values
    /// `f` does not represent. Every such value must violate it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amendment: Option<Predicate>,
}

impl TableRow {
    /// The condition actually checked: the printed one and the amendment.
    pub fn effective_condition(&self) -> Predicate {
        match &self.amendment {
            None => self.condition.clone(),
            Some(a) => Predicate::All(vec![self.condition.clone(), a.clone()]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub schema: u32,
    pub rows: Vec<TableRow>,
}

impl Tables {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_TABLES).expect("shipped tables parse")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t: Tables = serde_json::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        if t.schema != SCHEMA {
            return Err(Error::Data(format!("unsupported schema {}", t.schema)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for r in &t.rows {
            if !seen.insert(&r.id) {
                return Err(Error::Data(format!("duplicate row id {}", r.id)));
            }
            if !r.transfers.is_empty() && r.mates.is_empty() {
                return Err(Error::Data(format!(
                    "row {} has transfers but no mate",
                    r.id
                )));
            }
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Rows whose `id` or `group` equals `key`.
    pub fn select(&self, key: &str) -> Vec<&TableRow> {
        self.rows
            .iter()
            .filter(|r| r.id == key || r.group == key)
            .collect()
    }
}

fn fmt_z(z: &[i64; 3]) -> String {
    format!("±({},{},{})", z[0], z[1], z[2])
}

fn canonical(z: [i64; 3]) -> [i64; 3] {
    match z.iter().find(|&&c| c != 0) {
        Some(&c) if c < 0 => [-z[0], -z[1], -z[2]],
        _ => z,
    }
}

fn err_text(e: &Error) -> String {
    format!("error: {e}")
}

/// Runs every check of one row. Sub-checks are independent: a failure in
/// one is recorded and the rest still run.
pub fn verify_table_row(row: &TableRow, bound: u64) -> Result<Report> {
    let id = row.id.as_str();
    let mut rep = Report::new();

    match qforms::genus_classes(&row.f) {
        Ok(gs) => {
            rep.push(CheckRecord::new(
                id,
                "class number",
                row.h,
                gs.class_count(),
            ));
            for (i, mate) in row.mates.iter().enumerate() {
                let mut found = false;
                for c in &gs.classes {
                    if qforms::is_isometric(c, mate)? {
                        found = true;
                        break;
                    }
                }
                let distinct = !qforms::is_isometric(&row.f, mate)?;
                rep.push(CheckRecord::verdict(
                    id,
                    format!("mate {} in genus", i + 1),
                    "distinct class",
                    if found && distinct {
                        "distinct class"
                    } else if found {
                        "isometric to f"
                    } else {
                        "absent"
                    },
                    found && distinct,
                ));
            }
        }
        Err(e) if e.is_resource_limit() => return Err(e),
        Err(e) => rep.push(CheckRecord::verdict(
            id,
            "class number",
            row.h,
            err_text(&e),
            false,
        )),
    }

    let sieve_f = form_sieve(&row.f, bound)?;
    let effective = row.effective_condition();
    let mut bad = Vec::new();
    let mut gaps = Vec::new();
    let mut hits = 0u64;
    for m in 0..=bound {
        if row.condition.eval(m) && !sieve_f.contains(m) {
            gaps.push(m);
        }
        if effective.eval(m) {
            hits += 1;
            if !sieve_f.contains(m) {
                bad.push(m);
            }
        }
    }
    rep.push(CheckRecord::verdict(
        id,
        format!("condition => m→f on [0,{bound}] ({hits} values)"),
        "[]",
        format!("{:?}", &bad[..bad.len().min(10)]),
        bad.is_empty(),
    ));
    if let Some(a) = &row.amendment {
        // the printed condition's misses, all of which the amendment must reject
        let unexplained: Vec<u64> = gaps.iter().copied().filter(|&m| a.eval(m)).collect();
        rep.push(CheckRecord::verdict(
            id,
            format!(
                "printed condition misses {} values, all rejected by amendment {a}",
                gaps.len()
            ),
            "[]",
            format!("{:?}", &unexplained[..unexplained.len().min(10)]),
            unexplained.is_empty(),
        ));
    }

    let Some(g) = row.mates.first() else {
        return Ok(rep);
    };
    for tr in &row.transfers {
        let isos = goodvec::scaling_isometries(&row.f, g, tr.d)?;
        for &a in &tr.a {
            let label = format!("d={},a={a}", tr.d);
            let b = goodvec::b_set_with(&isos, g, tr.d, a)?;
            rep.push(CheckRecord::new(
                id,
                format!("|B| {label}"),
                tr.b_size,
                b.len(),
            ));

            let transfer = match &tr.t {
                None => {
                    if b.is_empty() {
                        Some(goodvec::verify_good(&row.f, g, tr.d, a, bound))
                    } else {
                        rep.push(CheckRecord::verdict(
                            id,
                            format!("transfer {label}"),
                            "B empty or certificate",
                            "neither",
                            false,
                        ));
                        None
                    }
                }
                Some(t) => match goodvec::pme_certificate(t, &row.f, g, tr.d, a) {
                    Ok(cert) => {
                        rep.push(CheckRecord::new(
                            id,
                            format!("certificate {label}"),
                            "valid",
                            "valid",
                        ));
                        push_eigen(&mut rep, id, &label, tr, &cert);
                        Some(goodvec::verify_pme(&cert, &row.f, g, tr.d, a, bound))
                    }
                    Err(e) if e.is_resource_limit() => return Err(e),
                    Err(e) => {
                        rep.push(CheckRecord::verdict(
                            id,
                            format!("certificate {label}"),
                            "valid",
                            err_text(&e),
                            false,
                        ));
                        None
                    }
                },
            };
            if let Some(res) = transfer {
                let tr_rep = res?;
                rep.push(CheckRecord::verdict(
                    id,
                    format!(
                        "transfer {label} on [0,{bound}] ({} values)",
                        tr_rep.checked
                    ),
                    "[]",
                    format!(
                        "{:?}",
                        &tr_rep.counterexamples[..tr_rep.counterexamples.len().min(10)]
                    ),
                    tr_rep.passed(),
                ));
            }
        }
    }
    Ok(rep)
}

fn push_eigen(rep: &mut Report, id: &str, label: &str, tr: &Transfer, cert: &PmeCertificate) {
    let computed: Vec<String> = cert
        .eigen
        .iter()
        .map(|e| format!("{} Q={}", fmt_z(&canonical(e.z)), e.qz))
        .collect();
    if let (Some(z), Some(qz)) = (tr.z, tr.qz) {
        let expected = format!("{} Q={qz}", fmt_z(&canonical(z)));
        let computed = computed.join("; ");
        let ok = expected == computed;
        rep.push(CheckRecord::verdict(
            id,
            format!("eigenvectors {label}"),
            expected,
            computed,
            ok,
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let t = Tables::builtin();
        assert!(t.rows.len() >= 40);
        assert_eq!(t.select("1,2,6").len(), 4);
        assert_eq!(t.select("1,1,7:every case").len(), 1);
        for r in &t.rows {
            assert_eq!(r.h, r.mates.len() + 1, "{}", r.id);
            if r.amendment.is_none() {
                assert_eq!(r.effective_condition(), r.condition);
            }
            for tr in &r.transfers {
                assert_eq!(tr.t.is_some(), tr.z.is_some(), "{}", r.id);
                assert_eq!(tr.t.is_some(), tr.b_size > 0, "{}", r.id);
            }
        }
    }

    #[test]
    fn amendment_is_reported() {
        let t = Tables::builtin();
        let mut row = t.select("1,1,3:α4=15")[0].clone();
        let rep = verify_table_row(&row, 1000).unwrap();
        assert!(rep.passed(), "{:#?}", rep.failures().collect::<Vec<_>>());
        assert!(rep
            .records
            .iter()
            .any(|r| r.check.starts_with("printed condition misses 2 values")));
        // without the amendment the miss at 81 shows up as a failure
        row.amendment = None;
        let rep = verify_table_row(&row, 1000).unwrap();
        let fails: Vec<_> = rep.failures().collect();
        assert_eq!(fails.len(), 1);
        assert_eq!(fails[0].computed, "[81, 729]");
    }

    #[test]
    fn schema_is_checked() {
        assert!(Tables::parse(r#"{"schema": 2, "rows": []}"#).is_err());
        assert!(Tables::parse("not json").is_err());
    }

    #[test]
    fn class_number_one_row() {
        let t = Tables::builtin();
        let row = t.select("1,2,10:every case")[0];
        let rep = verify_table_row(row, 2000).unwrap();
        assert!(rep.passed(), "{:#?}", rep.failures().collect::<Vec<_>>());
    }
}
