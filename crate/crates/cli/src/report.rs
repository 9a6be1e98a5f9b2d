//! Machine-readable reports.
//!
//! Reports serialize with a fixed field order and sorted maps, so
//! identical inputs and flags produce byte-identical output except for
//! the timing field.

use centerflow::returnmap::CenterVerdict;
use centerflow::scalar::Scalar;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::doc::RescaleNote;

#[derive(Serialize, Debug)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rescaled_period: Option<RescaleNote>,
    pub results: Value,
    pub timing_ms: u64,
}

pub const REPORT_SCHEMA: &str = "cfl-report-1";

/// Renders a scalar as both its exact pi-polynomial (when exact) and a
/// 17-significant-digit decimal pair.
pub fn scalar_json(s: &Scalar) -> Value {
    let z = s.to_complex();
    json!({
        "exact": if s.is_exact() { Value::String(s.render()) } else { Value::Null },
        "decimal": { "re": format!("{:.16e}", z.re), "im": format!("{:.16e}", z.im) },
    })
}

pub fn verdict_json(v: &CenterVerdict) -> Value {
    let mut m = Map::new();
    m.insert("order_checked".into(), json!(v.order_checked));
    m.insert("is_center_up_to_N".into(), json!(v.is_center_up_to));
    m.insert(
        "first_nonzero".into(),
        match &v.first_nonzero {
            None => Value::Null,
            Some((n, value)) => json!({ "n": n, "value": scalar_json(value) }),
        },
    );
    m.insert("is_universal_up_to_N".into(), json!(v.is_universal_up_to));
    m.insert(
        "first_nonvanishing_word".into(),
        match &v.first_nonvanishing_word {
            None => Value::Null,
            Some((w, value)) => json!({ "word": w.to_string(), "value": scalar_json(value) }),
        },
    );
    m.insert(
        "evidence".into(),
        Value::Array(
            v.evidence
                .iter()
                .map(|e| {
                    json!({
                        "quantity": e.quantity,
                        "value": e.value,
                        "vanishes": e.vanishes,
                    })
                })
                .collect(),
        ),
    );
    Value::Object(m)
}

/// Human-readable rendering for --pretty.
pub fn render_pretty(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "centerflow {} (mode {}{})\n",
        report.command.join(" "),
        report.mode,
        report
            .order
            .map(|n| format!(", order {n}"))
            .unwrap_or_default()
    ));
    if let Some(d) = &report.input_digest {
        out.push_str(&format!("input   {d}\n"));
    }
    if let Some(r) = &report.rescaled_period {
        out.push_str(&format!(
            "period  {} normalized to 2pi (ratio {})\n",
            r.original_period, r.ratio_to_canonical
        ));
    }
    render_value(&mut out, "results", &report.results, 0);
    out.push_str(&format!("timing  {} ms\n", report.timing_ms));
    out
}

fn render_value(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                render_value(out, k, v, depth + 1);
            }
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, v) in items.iter().enumerate() {
                render_value(out, &i.to_string(), v, depth + 1);
            }
        }
        other => {
            out.push_str(&format!("{pad}{key} = {other}\n"));
        }
    }
}
