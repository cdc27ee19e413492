use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use triquad::escalation::{classify, criterion_check, escalate, Exception};
use triquad::goodvec::{self, b_set, pme_certificate};
use triquad::qforms::{genus_classes, Mat3, TernaryForm};
use triquad::trisums::{sieve, truants, TriangularSum};
use triquad::verify::{self, Report, SuiteConfig, Tables};
use triquad::Error;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "triquad",
    version,
    about = "Almost universal sums of triangular numbers"
)]
struct Cli {
    /// Sieve bound; each command has its own default.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// The exception m, one of 1, 2, 4, 5, 8.
    #[arg(long, global = true)]
    exception: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Table data file; defaults to the built-in tables.
    #[arg(long, global = true, env = "TRIQUAD_DATA")]
    data: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unrepresented integers of a sum up to the bound.
    Sieve { coeffs: String },
    /// The first unrepresented integers of a sum.
    Truants {
        coeffs: String,
        #[arg(long, default_value_t = 2)]
        count: usize,
    },
    /// Regenerate the candidate list for one exception.
    Escalate {
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Also write the candidate records as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify one sum against an exception.
    Classify { coeffs: String },
    /// Isometry classes in the genus of a form.
    Genus { form: String },
    /// The set B_f(g, d, a) of bad vectors modulo d.
    Bset {
        f: String,
        g: String,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        a: u64,
    },
    /// Validate a scaling isometry T and run the transfer it certifies.
    Pme {
        /// Gram-style JSON 3×3 matrix.
        t: String,
        f: String,
        g: String,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        a: u64,
    },
    /// Replay checks: `all`, `table:<group or row id>` or `candidate:<coeffs>`.
    Verify { scope: String },
    /// Sieve Δ(1,4,5) and compare against {2}.
    Conjecture,
}

/// What a command produced, in every output format.
struct Rendered {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    text: Vec<String>,
    ok: bool,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<Rendered, Failure>;

fn fmt_set(xs: &[u64]) -> String {
    format!(
        "{{{}}}",
        xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    )
}

fn parse_sum(s: &str) -> Result<TriangularSum, Failure> {
    let mut coeffs = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Usage(format!("not a positive integer: {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.windows(2).any(|w| w[0] > w[1]) {
        eprintln!("warning: coefficients {s} sorted into ascending order");
        coeffs.sort_unstable();
    }
    TriangularSum::new(coeffs).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_form(s: &str) -> Result<TernaryForm, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn exception(cli: &Cli) -> Result<Exception, Failure> {
    let m = cli
        .exception
        .ok_or_else(|| Failure::Usage("--exception is required".into()))?;
    Exception::new(m).map_err(|e| Failure::Usage(e.to_string()))
}

fn tables(cli: &Cli) -> Result<Tables, Failure> {
    match &cli.data {
        Some(p) => Tables::load(p).map_err(|e| Failure::Usage(e.to_string())),
        None => Ok(Tables::builtin()),
    }
}

fn report_rendered(rep: &Report, head: Value, extra: Vec<String>) -> Rendered {
    let mut text: Vec<String> = rep.records.iter().map(|r| r.to_string()).collect();
    text.extend(extra);
    text.push(rep.summary());
    let mut json = head;
    json["records"] = serde_json::to_value(&rep.records).expect("records serialize");
    json["passed"] = json!(rep.passed());
    Rendered {
        json,
        header: vec!["case_id", "check", "expected", "computed", "status"],
        rows: rep
            .records
            .iter()
            .map(|r| {
                let st = if r.passed() { "pass" } else { "fail" };
                vec![
                    r.case_id.clone(),
                    r.check.clone(),
                    r.expected.clone(),
                    r.computed.clone(),
                    st.into(),
                ]
            })
            .collect(),
        text,
        ok: rep.passed(),
    }
}

fn cmd_sieve(cli: &Cli, coeffs: &str) -> Outcome {
    let sum = parse_sum(coeffs)?;
    let bound = cli.bound.unwrap_or(100_000);
    let missing: Vec<u64> = sieve(&sum, bound)?.unrepresented().collect();
    Ok(Rendered {
        json: json!({"sum": sum.key(), "bound": bound, "unrepresented": missing}),
        header: vec!["n"],
        rows: missing.iter().map(|n| vec![n.to_string()]).collect(),
        text: vec![fmt_set(&missing)],
        ok: true,
    })
}

fn cmd_truants(cli: &Cli, coeffs: &str, count: usize) -> Outcome {
    let sum = parse_sum(coeffs)?;
    let bound = cli.bound.unwrap_or(100_000);
    let t = truants(&sum, count, bound)?;
    if t.exhausted {
        eprintln!("note: fewer than {count} unrepresented integers up to {bound}");
    }
    Ok(Rendered {
        json: json!({"sum": sum.key(), "bound": bound, "truants": t.values, "exhausted": t.exhausted}),
        header: vec!["index", "truant"],
        rows: t
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| vec![(i + 1).to_string(), v.to_string()])
            .collect(),
        text: vec![fmt_set(&t.values)],
        ok: true,
    })
}

fn cmd_escalate(cli: &Cli, depth: usize, out: Option<&PathBuf>) -> Outcome {
    let m = exception(cli)?;
    let bound = cli.bound.unwrap_or(100_000);
    let esc = escalate(m, bound, depth)?;
    for d in &esc.diagnostics {
        eprintln!("diagnostic: {d}");
    }
    let records = serde_json::to_value(&esc.records).expect("records serialize");
    if let Some(path) = out {
        let body =
            json!({"schema": SCHEMA, "exception": m.get(), "bound": bound, "records": records});
        std::fs::write(
            path,
            serde_json::to_string_pretty(&body).expect("serialize") + "\n",
        )
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let count = |c| esc.with_class(c).count();
    use triquad::Classification::*;
    let counts = format!(
        "proper={} dagger={} star={} rejected={} frontier={}",
        count(Proper),
        count(Dagger),
        count(Star),
        count(Rejected),
        esc.frontier
    );
    let proper: Vec<_> = esc.with_class(Proper).collect();
    let mut text: Vec<String> = proper
        .iter()
        .map(|r| {
            format!(
                "{}{}",
                r.coeffs,
                if r.conditional { " conditional" } else { "" }
            )
        })
        .collect();
    text.push(counts);
    text.push(esc.summary());
    Ok(Rendered {
        json: json!({
            "exception": m.get(), "bound": bound, "depth": depth, "summary": esc.summary(),
            "frontier": esc.frontier, "records": records,
        }),
        header: vec![
            "coeffs",
            "exception",
            "classification",
            "verified_bound",
            "conditional",
        ],
        rows: esc
            .records
            .iter()
            .map(|r| {
                vec![
                    r.coeffs.key(),
                    r.exception.to_string(),
                    r.classification.to_string(),
                    r.verified_bound.to_string(),
                    r.conditional.to_string(),
                ]
            })
            .collect(),
        text,
        ok: true,
    })
}

fn cmd_classify(cli: &Cli, coeffs: &str) -> Outcome {
    let sum = parse_sum(coeffs)?;
    let m = exception(cli)?;
    let bound = cli.bound.unwrap_or(100_000);
    let c = classify(&sum, m, bound)?;
    let crit = criterion_check(&sum, m)?;
    let mut text = vec![format!(
        "{} m={} {} unrepresented={} criterion={}",
        sum,
        m,
        c.record.classification,
        fmt_set(&c.unrepresented),
        crit
    )];
    for w in &c.witnesses {
        text.push(format!("  {} misses {}", w.sub, fmt_set(&w.misses)));
    }
    Ok(Rendered {
        json: json!({"record": c.record, "unrepresented": c.unrepresented, "witnesses": c.witnesses, "criterion": crit}),
        header: vec![
            "coeffs",
            "exception",
            "classification",
            "unrepresented",
            "criterion",
        ],
        rows: vec![vec![
            sum.key(),
            m.to_string(),
            c.record.classification.to_string(),
            fmt_set(&c.unrepresented),
            crit.to_string(),
        ]],
        text,
        ok: true,
    })
}

fn cmd_genus(form: &str) -> Outcome {
    let f = parse_form(form)?;
    let gs = genus_classes(&f)?;
    let grams: Vec<Mat3> = gs.classes.iter().map(|c| *c.gram()).collect();
    let mut text = vec![format!("{} det={} h={}", f, f.det(), gs.class_count())];
    text.extend(gs.classes.iter().map(|c| format!("  {c}")));
    Ok(Rendered {
        json: json!({"form": f.gram(), "det": f.det(), "class_number": gs.class_count(), "classes": grams}),
        header: vec!["class"],
        rows: gs.classes.iter().map(|c| vec![c.to_string()]).collect(),
        text,
        ok: true,
    })
}

fn cmd_bset(f: &str, g: &str, d: u64, a: u64) -> Outcome {
    let (f, g) = (parse_form(f)?, parse_form(g)?);
    let b = b_set(&f, &g, d, a)?;
    let vs: Vec<String> = b
        .members
        .iter()
        .map(|v| format!("({},{},{})", v[0], v[1], v[2]))
        .collect();
    Ok(Rendered {
        json: json!({"f": f.gram(), "g": g.gram(), "d": d, "a": a, "size": b.len(), "members": b.members}),
        header: vec!["x", "y", "z"],
        rows: b
            .members
            .iter()
            .map(|v| v.iter().map(u64::to_string).collect())
            .collect(),
        text: vec![format!("|B|={} {{{}}}", b.len(), vs.join(", "))],
        ok: true,
    })
}

fn cmd_pme(cli: &Cli, t: &str, f: &str, g: &str, d: u64, a: u64) -> Outcome {
    let t: Mat3 =
        serde_json::from_str(t).map_err(|e| Failure::Usage(format!("bad matrix {t:?}: {e}")))?;
    let (f, g) = (parse_form(f)?, parse_form(g)?);
    let bound = cli.bound.unwrap_or(20_000);
    let cert = pme_certificate(&t, &f, &g, d, a)?;
    let rep = goodvec::verify_pme(&cert, &f, &g, d, a, bound)?;
    let mut text = vec![format!("certificate valid |B|={}", cert.b_size)];
    for e in &cert.eigen {
        text.push(format!(
            "  lambda={} z=±({},{},{}) Q={}",
            e.lambda, e.z[0], e.z[1], e.z[2], e.qz
        ));
    }
    text.push(format!(
        "transfer on [0,{bound}]: checked={} skipped={} counterexamples={}",
        rep.checked,
        rep.skipped,
        fmt_set(&rep.counterexamples)
    ));
    Ok(Rendered {
        json: json!({"certificate": cert, "transfer": rep}),
        header: vec!["counterexample"],
        rows: rep
            .counterexamples
            .iter()
            .map(|n| vec![n.to_string()])
            .collect(),
        text,
        ok: rep.passed(),
    })
}

fn cmd_verify(cli: &Cli, scope: &str) -> Outcome {
    let bound = cli.bound.unwrap_or(20_000);
    let head = json!({"scope": scope, "bound": bound});
    if scope == "all" {
        let rep = verify::verify_all(&tables(cli)?, SuiteConfig::with_bound(bound))?;
        return Ok(report_rendered(&rep, head, vec![]));
    }
    if let Some(key) = scope.strip_prefix("table:") {
        let t = tables(cli)?;
        let rows = t.select(key);
        if rows.is_empty() {
            return Err(Failure::Usage(format!("no table row matches {key:?}")));
        }
        let sub = Tables {
            schema: t.schema,
            rows: rows.into_iter().cloned().collect(),
        };
        let rep = verify::verify_tables(&sub, bound)?;
        let mut extra = Vec::new();
        for r in &sub.rows {
            let ok = rep
                .records
                .iter()
                .filter(|c| c.case_id == r.id)
                .all(|c| c.passed());
            extra.push(format!("{} {}", if ok { "PASS" } else { "FAIL" }, r.id));
        }
        return Ok(report_rendered(&rep, head, extra));
    }
    if let Some(coeffs) = scope.strip_prefix("candidate:") {
        let sum = parse_sum(coeffs)?;
        let found = verify::exceptions(&sum, bound)?;
        let m = match cli.exception {
            Some(m) => Some(Exception::new(m).map_err(|e| Failure::Usage(e.to_string()))?),
            None if found.len() == 1 => Exception::new(found[0]).ok(),
            None => None,
        };
        let crit = match m {
            Some(m) => criterion_check(&sum, m)?,
            None => false,
        };
        let ok = crit && m.is_some_and(|m| found == [m.get()]);
        let line = format!(
            "exceptions={} {}",
            fmt_set(&found),
            if ok { "PASS" } else { "FAIL" }
        );
        return Ok(Rendered {
            json: json!({
                "scope": scope, "bound": bound, "sum": sum.key(), "exceptions": found,
                "exception": m.map(Exception::get), "criterion": crit, "passed": ok,
            }),
            header: vec!["sum", "exceptions", "criterion", "status"],
            rows: vec![vec![
                sum.key(),
                fmt_set(&found),
                crit.to_string(),
                if ok { "pass" } else { "fail" }.into(),
            ]],
            text: vec![line],
            ok,
        });
    }
    Err(Failure::Usage(format!(
        "unknown scope {scope:?}; expected all, table:<key> or candidate:<coeffs>"
    )))
}

fn cmd_conjecture(cli: &Cli) -> Outcome {
    let bound = cli.bound.unwrap_or(1_000_000);
    let r = verify::conjecture_sweep(bound)?;
    let ok = r.passed();
    Ok(Rendered {
        json: json!({"sum": r.sum.key(), "bound": bound, "unrepresented": r.unrepresented, "passed": ok}),
        header: vec!["n"],
        rows: r
            .unrepresented
            .iter()
            .map(|n| vec![n.to_string()])
            .collect(),
        text: vec![format!(
            "{} unrepresented={} {}",
            r.sum,
            fmt_set(&r.unrepresented),
            if ok { "PASS" } else { "FAIL" }
        )],
        ok,
    })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Sieve { coeffs } => cmd_sieve(cli, coeffs),
        Command::Truants { coeffs, count } => cmd_truants(cli, coeffs, *count),
        Command::Escalate { depth, out } => cmd_escalate(cli, *depth, out.as_ref()),
        Command::Classify { coeffs } => cmd_classify(cli, coeffs),
        Command::Genus { form } => cmd_genus(form),
        Command::Bset { f, g, d, a } => cmd_bset(f, g, *d, *a),
        Command::Pme { t, f, g, d, a } => cmd_pme(cli, t, f, g, *d, *a),
        Command::Verify { scope } => cmd_verify(cli, scope),
        Command::Conjecture => cmd_conjecture(cli),
    }
}

fn emit(format: Format, r: &Rendered) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => {
            for line in &r.text {
                writeln!(out, "{line}")?;
            }
        }
        Format::Json => {
            let mut v = json!({"schema": SCHEMA});
            if let Value::Object(m) = &r.json {
                for (k, x) in m {
                    v[k] = x.clone();
                }
            }
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).expect("serialize")
            )?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&r.header)?;
            for row in &r.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("pool is configured once");
    }
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(r) => {
            if let Err(e) = emit(cli.format, &r) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                if let Some(Value::Array(recs)) = r.json.get("records") {
                    if let Some(first) = recs.iter().find(|x| x["status"] == "fail") {
                        eprintln!(
                            "first failure: {}",
                            first["case_id"].as_str().unwrap_or("?")
                        );
                    }
                }
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) if e.is_resource_limit() => {
            eprintln!("resource limit: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
