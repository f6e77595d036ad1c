use std::fmt::Write;

use quatstab::{Check, Measure};
use serde::Serialize;

use crate::Format;

#[derive(Debug, Serialize)]
pub struct Document<'a, C: Serialize, V: Serialize, R: Serialize> {
    pub config: &'a C,
    pub checks: &'a [Check],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<&'a R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'a V>,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a check list plus optional structured extras.
pub fn render<C: Serialize, V: Serialize, R: Serialize>(
    format: Format,
    config: &C,
    checks: &[Check],
    results: Option<&R>,
    verdict: Option<&V>,
    verdict_line: Option<&str>,
) -> String {
    match format {
        Format::Json => {
            let doc = Document { config, checks, results, verdict };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serialises");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("name,paper_ref,kind,value,reference,tolerance,pass\n");
            for c in checks {
                let (kind, value) = match c.measure {
                    Measure::Residual(x) => ("residual", x),
                    Measure::Value(x) => ("value", x),
                };
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    csv_field(&c.name),
                    csv_field(&c.paper_ref),
                    kind,
                    value,
                    opt(c.reference),
                    c.tolerance,
                    c.pass
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let (kind, value) = match c.measure {
                    Measure::Residual(x) => ("residual", x),
                    Measure::Value(x) => ("value", x),
                };
                write!(s, "{status}  {:<44} {kind} = {value:.6e}", c.name).unwrap();
                if let Some(r) = c.reference {
                    write!(s, "  reference = {r:.6e}").unwrap();
                }
                writeln!(s, "  tol = {:.1e}", c.tolerance).unwrap();
            }
            if let Some(line) = verdict_line {
                writeln!(s, "verdict: {line}").unwrap();
            }
            s
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub c: f64,
    pub classification: &'static str,
    pub verdict: &'static str,
    pub lambda1: Option<f64>,
    pub einstein_constant: f64,
    pub margin: Option<f64>,
}

pub fn render_rows(format: Format, rows: &[ReportRow]) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialise");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("n,c,classification,verdict,lambda1,einstein_constant,margin\n");
            for r in rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.c,
                    r.classification,
                    r.verdict,
                    opt(r.lambda1),
                    r.einstein_constant,
                    opt(r.margin)
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in rows {
                writeln!(
                    s,
                    "n={:<5} c={:<8} {:<11} {:<18} lambda1={:<8} C={:<8} margin={}",
                    r.n,
                    r.c,
                    r.classification,
                    r.verdict,
                    opt(r.lambda1),
                    r.einstein_constant,
                    opt(r.margin)
                )
                .unwrap();
            }
            s
        }
    }
}
