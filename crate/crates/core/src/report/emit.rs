//! Report serialization: versioned JSON, plot CSV, and the text summary.

use super::{fin, Report};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Json,
    CsvPlot,
    Text,
}

/// Render a report. JSON carries the full schema; the CSV holds one row
/// per plot grid point; text is a human summary table.
pub fn emit(r: &Report, format: EmitFormat) -> Vec<u8> {
    match format {
        EmitFormat::Json => {
            let v = to_json(r);
            let mut out = serde_json::to_vec_pretty(&v).expect("report serializes");
            out.push(b'\n');
            out
        }
        EmitFormat::CsvPlot => {
            let mut out = String::from("xi,abs_engine,abs_oracle,envelope_fit\n");
            for row in &r.plot_rows {
                let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    row.xi,
                    cell(row.engine_abs),
                    cell(row.oracle_abs),
                    cell(row.fit_env),
                ));
            }
            out.into_bytes()
        }
        EmitFormat::Text => text_summary(r).into_bytes(),
    }
}

pub fn to_json(r: &Report) -> Value {
    let mut sections = serde_json::Map::new();
    for (name, v) in &r.sections {
        sections.insert(name.clone(), v.clone());
    }
    json!({
        "schema_version": super::SCHEMA_VERSION,
        "crate_version": env!("CARGO_PKG_VERSION"),
        "status": if r.pass() { "pass" } else { "fail" },
        "input": r.input,
        "class": format!("{:?}", r.class),
        "ast": r.expr.to_json(),
        "canonical": r.expr.to_string(),
        "sections": Value::Object(sections),
        "consistency": r.consistency.iter().map(|c| json!({
            "name": c.name,
            "residual": fin(c.residual),
            "tolerance": c.tolerance,
            "pass": c.pass,
        })).collect::<Vec<_>>(),
        "skips": r.skips.iter().map(|(k, why)| json!({
            "check": k.name(), "reason": why,
        })).collect::<Vec<_>>(),
        "timings_ms": r.timings_ms.iter().map(|(n, ms)| json!({
            "step": n, "ms": ms,
        })).collect::<Vec<_>>(),
    })
}

fn text_summary(r: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("input    : {}\n", r.input));
    out.push_str(&format!("canonical: {}\n", r.expr));
    out.push_str(&format!("class    : {:?}\n", r.class));
    for (name, v) in &r.sections {
        if name == "delta" {
            let get = |k: &str| {
                v.get(k)
                    .map(|x| match x {
                        Value::String(s) => s.clone(),
                        other => format!("{:.6}", other.as_f64().unwrap_or(f64::NAN)),
                    })
                    .unwrap_or_default()
            };
            out.push_str(&format!("delta_H+     : {}\n", get("delta_H_plus")));
            out.push_str(&format!("delta_H-     : {}\n", get("delta_H_minus")));
            out.push_str(&format!("theta_H+     : {}\n", get("theta_H_plus")));
            out.push_str(&format!("theta_H-     : {}\n", get("theta_H_minus")));
            out.push_str(&format!("delta_M+     : {}\n", get("delta_M_plus")));
            out.push_str(&format!("delta_M-     : {}\n", get("delta_M_minus")));
        }
        if name == "decay_fit" {
            for fit in v.as_array().into_iter().flatten() {
                let side = fit["side"].as_str().unwrap_or("?");
                let tag = if side == "plus" { "+" } else { "-" };
                let rate = match &fit["rate"] {
                    Value::String(s) => s.clone(),
                    other => format!("{:.6}", other.as_f64().unwrap_or(f64::NAN)),
                };
                out.push_str(&format!(
                    "delta_F_fit{} : {} (m = {:.3}, r² = {:.6})\n",
                    tag,
                    rate,
                    fit["power"].as_f64().unwrap_or(f64::NAN),
                    fit["r_squared"].as_f64().unwrap_or(f64::NAN),
                ));
            }
        }
    }
    if !r.consistency.is_empty() {
        out.push_str("consistency checks:\n");
        for c in &r.consistency {
            out.push_str(&format!(
                "  [{}] {} residual {:.3e} (tol {:.1e})\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance,
            ));
        }
    }
    if !r.skips.is_empty() {
        out.push_str("skipped checks:\n");
        for (k, why) in &r.skips {
            out.push_str(&format!("  - {}: {}\n", k.name(), why));
        }
    }
    out.push_str(&format!(
        "status   : {}\n",
        if r.pass() { "PASS" } else { "FAIL" }
    ));
    out
}
