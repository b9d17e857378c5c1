//! JSON and CSV serialization of verification reports.
//!
//! Every number is rounded to 12 significant digits so that reports are byte-identical
//! across runs and platforms. Non-finite values become `null` in JSON and empty CSV cells.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::bounds::{Diagnostic, VerificationReport, MARGIN};
use crate::format::{round12, sig12};

pub const CSV_HEADER: [&str; 10] =
    ["scenario", "check", "orientation", "lhs", "rhs", "slack", "satisfied", "status", "reason", "diagnostics"];

fn number(x: f64) -> Value {
    round12(x).map_or(Value::Null, Value::from)
}

fn csv_number(x: f64) -> String {
    if x.is_finite() {
        sig12(x)
    } else {
        String::new()
    }
}

fn diagnostic_json(d: &Diagnostic) -> Value {
    match d {
        Diagnostic::Number(x) => number(*x),
        Diagnostic::Flag(b) => Value::Bool(*b),
        Diagnostic::Text(s) => Value::String(s.clone()),
    }
}

fn diagnostic_text(d: &Diagnostic) -> String {
    match d {
        Diagnostic::Number(x) if x.is_finite() => sig12(*x),
        Diagnostic::Number(x) => x.to_string(),
        Diagnostic::Flag(b) => b.to_string(),
        Diagnostic::Text(s) => s.clone(),
    }
}

/// One report as a JSON object.
pub fn report_json(r: &VerificationReport) -> Value {
    let diagnostics: Map<String, Value> =
        r.diagnostics.iter().map(|(k, v)| (k.clone(), diagnostic_json(v))).collect();
    json!({
        "scenario": r.scenario,
        "check": r.check.name(),
        "orientation": r.check.orientation().symbol(),
        "lhs": number(r.lhs),
        "rhs": number(r.rhs),
        "slack": number(r.slack),
        "satisfied": r.is_satisfied(),
        "status": r.status.label(),
        "reason": r.status.reason(),
        "diagnostics": diagnostics,
    })
}

/// The full report document.
pub fn reports_json(reports: &[VerificationReport]) -> Value {
    json!({
        "schema": 1,
        "margin": MARGIN,
        "rows": reports.iter().map(report_json).collect::<Vec<_>>(),
    })
}

/// CSV fields of one report, in `CSV_HEADER` order. Diagnostics are `key=value` pairs
/// joined by `;`.
pub fn report_csv_record(r: &VerificationReport) -> [String; 10] {
    let diagnostics = r
        .diagnostics
        .iter()
        .map(|(k, v)| format!("{k}={}", diagnostic_text(v)))
        .collect::<Vec<_>>()
        .join(";");
    [
        r.scenario.clone(),
        r.check.name().to_string(),
        r.check.orientation().symbol().to_string(),
        csv_number(r.lhs),
        csv_number(r.rhs),
        csv_number(r.slack),
        r.is_satisfied().to_string(),
        r.status.label().to_string(),
        r.status.reason().unwrap_or_default().to_string(),
        diagnostics,
    ]
}

pub fn write_csv<W: Write>(reports: &[VerificationReport], w: W) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in reports {
        out.write_record(report_csv_record(r))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(reports: &[VerificationReport], mut w: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut w, &reports_json(reports))?;
    writeln!(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::CheckKind;

    #[test]
    fn json_rounds_and_nulls() {
        let r = VerificationReport::evaluate(CheckKind::TorsionBound, 1.0 / 3.0, 0.5)
            .with_scenario("a")
            .diag("k", f64::INFINITY)
            .diag("divergent", false);
        let v = report_json(&r);
        assert_eq!(v["lhs"], json!(0.333333333333));
        assert_eq!(v["diagnostics"]["k"], Value::Null);
        assert_eq!(v["status"], "satisfied");
        assert_eq!(v["reason"], Value::Null);
        let na = VerificationReport::not_applicable(CheckKind::LinftyBound, "why");
        let v = report_json(&na);
        assert_eq!(v["lhs"], Value::Null);
        assert_eq!(v["reason"], "why");
        assert_eq!(v["satisfied"], false);
    }

    #[test]
    fn csv_layout() {
        let r = VerificationReport::evaluate(CheckKind::LpLowerBound, 2.0, 1.0)
            .with_scenario("s")
            .diag("gamma", 0.0)
            .diag("note", "a,b");
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "scenario,check,orientation,lhs,rhs,slack,satisfied,status,reason,diagnostics\n\
             s,lp_lower_bound,>=,2.00000000000e0,1.00000000000e0,2.00000000000e0,true,satisfied,,\"gamma=0.00000000000e0;note=a,b\"\n"
        );
    }
}
