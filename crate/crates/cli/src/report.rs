use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use zsl::classify::{match_theorem_forms_with_mask, VerdictJson};
use zsl::enumerate::{fg_table_csv, fg_table_json, search, EnumConfig};
use zsl::lemmas::{all_lemma_reports, LemmaId};
use zsl::sequence::SequenceJson;
use zsl::sumset::SumsetJson;
use zsl::{
    audit_classification, davenport_constant, lemma_bound_scan, subsequence_sums, AuditReport,
    Group, LemmaReport, Sequence, VERSION,
};

use crate::{Failure, Format, Outcome};

fn ok(body: String) -> Result<Outcome, Failure> {
    Ok(Outcome {
        body,
        violations: false,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn no_csv(command: &str) -> Failure {
    Failure::Usage(format!("--format csv is not supported by `{command}`"))
}

#[derive(Serialize, Deserialize)]
pub struct AnalyzeJson {
    pub version: String,
    pub group: String,
    pub sequence: SequenceJson,
    pub length: usize,
    pub zero_sum_free: bool,
    pub f: usize,
    pub extremal: bool,
    pub sums: SumsetJson,
    pub verdict: VerdictJson,
}

pub fn analyze(group: &Arc<Group>, text: &str, fmt: Format) -> Result<Outcome, Failure> {
    let seq = Sequence::parse(group.clone(), text)?;
    let mask = subsequence_sums(&seq);
    let verdict = match_theorem_forms_with_mask(&seq, &mask);
    let f = mask.count();
    let zsf = !mask.contains_zero();
    let extremal = zsf && !seq.is_empty() && f < 2 * seq.len();
    match fmt {
        Format::Json => ok(json(&AnalyzeJson {
            version: VERSION.into(),
            group: group.to_string(),
            sequence: seq.to_json(),
            length: seq.len(),
            zero_sum_free: zsf,
            f,
            extremal,
            sums: mask.to_json(),
            verdict: verdict.to_json(),
        })),
        Format::Text => {
            let mut out = String::new();
            let v = verdict.to_json();
            writeln!(out, "group: {group}").unwrap();
            writeln!(out, "sequence: {seq}").unwrap();
            writeln!(out, "length: {}", seq.len()).unwrap();
            writeln!(out, "zero-sum free: {zsf}").unwrap();
            writeln!(out, "f: {f}").unwrap();
            writeln!(out, "extremal (f <= 2|S| - 1): {extremal}").unwrap();
            writeln!(out, "sums: {}", mask.to_json().sums.join(" ")).unwrap();
            let mut line = format!("verdict: {}", v.tag);
            let mut parts = Vec::new();
            if let Some(a) = &v.a {
                parts.push(format!("a={a}"));
            }
            if let Some(b) = &v.b {
                parts.push(format!("b={b}"));
            }
            if let Some(k) = v.k {
                parts.push(format!("k={k}"));
            }
            if let Some(l) = v.l {
                parts.push(format!("l={l}"));
            }
            if let Some(inside) = v.singleton_in_power_sums {
                parts.push(format!("b in sums of a^k: {inside}"));
            }
            if !parts.is_empty() {
                write!(line, " ({})", parts.join(", ")).unwrap();
            }
            writeln!(out, "{line}").unwrap();
            match &verdict.certificate {
                Some(c) => writeln!(
                    out,
                    "smooth certificate: base {}, coefficients {:?}, n = {}",
                    c.base, c.coefficients, c.n
                )
                .unwrap(),
                None => writeln!(out, "smooth certificate: none").unwrap(),
            }
            ok(out)
        }
        Format::Csv => Err(no_csv("analyze")),
    }
}

#[derive(Serialize, Deserialize)]
pub struct EnumeratedJson {
    pub sequence: String,
    pub length: usize,
    pub f: usize,
}

#[derive(Serialize, Deserialize)]
pub struct EnumerateJson {
    pub version: String,
    pub group: String,
    pub max_length: usize,
    pub squarefree: bool,
    pub count: usize,
    pub sequences: Vec<EnumeratedJson>,
}

pub fn enumerate(
    group: &Arc<Group>,
    max_length: Option<usize>,
    squarefree: bool,
    workers: usize,
    fmt: Format,
) -> Result<Outcome, Failure> {
    let max_length = max_length.unwrap_or(group.order());
    let cfg = EnumConfig::new(group.clone(), max_length)
        .squarefree(squarefree)
        .workers(workers);
    let rows: Vec<EnumeratedJson> =
        search(&cfg, Vec::new, |acc: &mut Vec<EnumeratedJson>, node| {
            acc.push(EnumeratedJson {
                sequence: node.to_sequence().to_string(),
                length: node.len(),
                f: node.f(),
            })
        })
        .into_iter()
        .flatten()
        .collect();
    match fmt {
        Format::Json => ok(json(&EnumerateJson {
            version: VERSION.into(),
            group: group.to_string(),
            max_length,
            squarefree,
            count: rows.len(),
            sequences: rows,
        })),
        Format::Csv => {
            let mut out = String::from("length,f,sequence\n");
            for r in &rows {
                writeln!(out, "{},{},\"{}\"", r.length, r.f, r.sequence).unwrap();
            }
            ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                writeln!(out, "{}\tf={}", r.sequence, r.f).unwrap();
            }
            writeln!(out, "# {} zero-sum free sequences over {group}", rows.len()).unwrap();
            ok(out)
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct DavenportJson {
    pub version: String,
    pub group: String,
    pub davenport: usize,
}

pub fn davenport(group: &Arc<Group>, workers: usize, fmt: Format) -> Result<Outcome, Failure> {
    let d = davenport_constant(group, workers);
    match fmt {
        Format::Json => ok(json(&DavenportJson {
            version: VERSION.into(),
            group: group.to_string(),
            davenport: d,
        })),
        Format::Csv => ok(format!("group,davenport\n{group},{d}\n")),
        Format::Text => ok(format!("{d}\n")),
    }
}

pub fn fg_table(
    group: &Arc<Group>,
    max_length: Option<usize>,
    workers: usize,
    fmt: Format,
) -> Result<Outcome, Failure> {
    let r_max = match max_length {
        Some(r) => r,
        None => davenport_constant(group, workers) - 1,
    };
    let table = zsl::fg_table(group, r_max, workers);
    match fmt {
        Format::Json => ok(json(&fg_table_json(group, &table))),
        Format::Csv => ok(fg_table_csv(&table)),
        Format::Text => {
            let mut out = format!("# f_G(r) for G = {group} ({VERSION})\n");
            for e in &table {
                match (&e.fg, &e.witness) {
                    (Some(f), Some(w)) => writeln!(out, "r={}\tf={}\twitness {}", e.r, f, w),
                    _ => writeln!(out, "r={}\tf=inf", e.r),
                }
                .unwrap();
            }
            ok(out)
        }
    }
}

fn audit_text(out: &mut String, r: &AuditReport) {
    writeln!(
        out,
        "audit {}: checked {}, extremal {}, violations {}",
        r.group, r.checked, r.extremal, r.violation_count
    )
    .unwrap();
    for (form, n) in &r.by_form {
        writeln!(out, "  {form}: {n}").unwrap();
    }
    for v in &r.violations {
        writeln!(out, "  violation: {v}").unwrap();
    }
}

pub fn audit(group: &Arc<Group>, workers: usize, fmt: Format) -> Result<Outcome, Failure> {
    let r = audit_classification(group, workers);
    let violations = r.violation_count > 0;
    let body = match fmt {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = String::new();
            audit_text(&mut out, &r);
            writeln!(out, "violations: {}", r.violation_count).unwrap();
            out
        }
        Format::Csv => return Err(no_csv("audit")),
    };
    Ok(Outcome { body, violations })
}

fn lemma_text(out: &mut String, r: &LemmaReport) {
    writeln!(
        out,
        "{} on {}: {} instances, {} failures",
        r.lemma,
        r.group,
        r.instances(),
        r.failures()
    )
    .unwrap();
    writeln!(out, "  {}", r.statement).unwrap();
    for c in &r.checks {
        writeln!(
            out,
            "  [{}] {}: {} instances, {} failures",
            if c.failures == 0 { "ok" } else { "FAIL" },
            c.name,
            c.instances,
            c.failures
        )
        .unwrap();
        for ce in &c.counterexamples {
            writeln!(
                out,
                "    counterexample: {} has f = {}, expected {}",
                ce.sequence, ce.f, ce.expected
            )
            .unwrap();
        }
    }
    for (k, v) in &r.info {
        writeln!(out, "  {k}: {v}").unwrap();
    }
}

pub fn verify_lemma(
    group: &Arc<Group>,
    lemma: &str,
    workers: usize,
    fmt: Format,
) -> Result<Outcome, Failure> {
    if lemma == "list" {
        let mut out = String::new();
        for l in LemmaId::ALL {
            writeln!(out, "{:<22}{}", l.id(), l.statement()).unwrap();
        }
        return ok(out);
    }
    let id: LemmaId = lemma.parse()?;
    let r = lemma_bound_scan(group, id, workers);
    let violations = !r.passed();
    let body = match fmt {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = String::new();
            lemma_text(&mut out, &r);
            writeln!(out, "violations: {}", r.failures()).unwrap();
            out
        }
        Format::Csv => return Err(no_csv("verify-lemma")),
    };
    Ok(Outcome { body, violations })
}

#[derive(Serialize, Deserialize)]
pub struct VerifyAllJson {
    pub version: String,
    pub group: String,
    pub lemmas: Vec<LemmaReport>,
    pub audit: AuditReport,
    pub violations: u64,
}

pub fn verify_all(group: &Arc<Group>, workers: usize, fmt: Format) -> Result<Outcome, Failure> {
    let lemmas = all_lemma_reports(group, workers);
    let audit = audit_classification(group, workers);
    let total = lemmas.iter().map(|r| r.failures()).sum::<u64>() + audit.violation_count;
    let body = match fmt {
        Format::Json => json(&VerifyAllJson {
            version: VERSION.into(),
            group: group.to_string(),
            lemmas,
            audit,
            violations: total,
        }),
        Format::Text => {
            let mut out = String::new();
            for r in &lemmas {
                lemma_text(&mut out, r);
            }
            audit_text(&mut out, &audit);
            writeln!(out, "violations: {total}").unwrap();
            out
        }
        Format::Csv => return Err(no_csv("verify-all")),
    };
    Ok(Outcome {
        body,
        violations: total > 0,
    })
}
