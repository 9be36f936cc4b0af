use std::fmt::Write;

use lpsas_core::report::{AuditReport, CheckKind, Parameters, Status};
use serde_json::Value;

pub fn json(command: &str, data: &Value, report: &AuditReport) -> String {
    let doc = serde_json::json!({
        "command": command,
        "data": data,
        "report": report,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    s.push('\n');
    s
}

struct Style {
    color: bool,
}

impl Style {
    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    match v {
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(map) => {
            let parts: Option<Vec<String>> = map
                .iter()
                .map(|(k, v)| inline(v).filter(|_| !v.is_object()).map(|s| format!("{k}={s}")))
                .collect();
            parts.map(|p| p.join(" "))
        }
        _ => None,
    }
}

fn value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = inline(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    match v {
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            for item in items {
                match inline(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}  - {s}");
                    }
                    None => value(out, "-", item, depth + 1),
                }
            }
        }
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, v) in map {
                value(out, k, v, depth + 1);
            }
        }
        _ => unreachable!("scalars are inline"),
    }
}

pub fn table(command: &str, data: &Value, report: &AuditReport, color: bool) -> String {
    let style = Style { color };
    let mut out = String::new();
    let _ = writeln!(out, "{}", style.paint("1", command));
    if let Value::Object(map) = data {
        for (k, v) in map {
            value(&mut out, k, v, 0);
        }
    }
    let _ = writeln!(out);
    let heading = if report.subject == command {
        "checks".to_string()
    } else {
        format!("checks: {}", report.subject)
    };
    let _ = writeln!(out, "{}", style.paint("1", &heading));
    match &report.parameters {
        Some(Parameters::Point { a, b }) => {
            let _ = writeln!(out, "parameters: a={a} b={b}");
        }
        Some(Parameters::Grid { description, .. }) => {
            let _ = writeln!(out, "parameters: {description}");
        }
        None => {}
    }
    for check in &report.checks {
        let (label, code) = match (check.status, check.kind) {
            (Status::Pass, _) => ("PASS", "32"),
            (Status::Conditional, _) => ("COND", "36"),
            (Status::Skipped, _) => ("SKIP", "33"),
            (Status::Fail, CheckKind::Reference) => ("DIFF", "35"),
            (Status::Fail, CheckKind::Consistency) => ("FAIL", "31"),
        };
        let _ = writeln!(out, "{}  {}", style.paint(code, label), check.name);
        if let Some(note) = &check.note {
            let _ = writeln!(out, "      note: {note}");
        }
        for w in &check.witnesses {
            let ix: Vec<String> = w.index.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "      at ({}): expected {}, actual {}",
                ix.join(","),
                w.expected,
                w.actual
            );
        }
    }
    let count = |s| report.count(s);
    let diffs = report
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail && c.kind == CheckKind::Reference)
        .count();
    let _ = writeln!(
        out,
        "{} pass, {} conditional, {} skipped, {} fail, {} reference discrepancies",
        count(Status::Pass),
        count(Status::Conditional),
        count(Status::Skipped),
        count(Status::Fail) - diffs,
        diffs
    );
    out
}
