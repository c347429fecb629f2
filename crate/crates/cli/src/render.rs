use std::time::Duration;

use koszulkit::io::fingerprint;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Number, Value};

use crate::run::{Outcome, Request, Source};
use crate::{Common, FieldArg, Format};

/// Largest integer a JSON consumer can hold exactly in a double.
const SAFE: u64 = 1 << 53;

/// Small integers as numbers, the rest as decimal strings.
pub fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) if x.unsigned_abs() <= SAFE => Value::Number(x.into()),
        _ => Value::String(v.to_string()),
    }
}

fn field_name(f: FieldArg) -> &'static str {
    match f {
        FieldArg::Modular => "modular",
        FieldArg::Exact => "exact",
        FieldArg::Verify => "verify",
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "text",
    }
}

pub fn report(src: &Source, c: &Common, req: &Request, out: &Outcome, elapsed: Option<Duration>) -> Value {
    let p = &src.presentation;
    let mut command = json!({
        "verb": req.verb(),
        "cutoff": out.cutoff,
        "format": format_name(c.format),
        "field": field_name(c.field),
        "seed": c.seed,
        "max_ambient": c.max_ambient,
    });
    match req {
        Request::LieDims { jmax } => command["jmax"] = json!(jmax),
        Request::RepCheck { rep: Some(path) } => command["rep"] = json!(path.display().to_string()),
        _ => {}
    }
    let mut meta = json!({
        "tool": "koszulkit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "passed": out.passed,
    });
    if let Some(d) = elapsed {
        meta["timing_ms"] = json!(d.as_millis() as u64);
    }
    let input = json!({
        "source": src.description,
        "label": p.label(),
        "generators": p.generator_names(),
        "degree": p.degree(),
        "relator_dimension": p.relators().dim(),
        "fingerprint": fingerprint(p),
    });
    let certificates: Vec<Value> = out
        .certificates
        .iter()
        .map(|cert| serde_json::to_value(cert).expect("plain data"))
        .collect();
    let v = json!({
        "meta": meta,
        "input": input,
        "results": Value::Object(out.results.clone()),
        "certificates": certificates,
    });
    canonical(v)
}

/// Rebuilds objects with sorted keys and turns unsafe integers into strings,
/// so output is the same whatever map ordering serde_json was built with.
fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, canonical(v));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        Value::Number(n) => number(n),
        other => other,
    }
}

fn number(n: Number) -> Value {
    let unsafe_int = n.as_u64().is_some_and(|x| x > SAFE) || n.as_i64().is_some_and(|x| x.unsigned_abs() > SAFE);
    if unsafe_int {
        Value::String(n.to_string())
    } else {
        Value::Number(n)
    }
}

pub fn json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Dotted paths with array indices; arrays of scalars stay on one row,
/// space separated.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, rows);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            rows.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(" ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

pub fn csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, x) in rows {
        w.write_record([k, x]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
}

fn certificate_text(c: &Value, out: &mut String) {
    let kind = scalar(&c["kind"]);
    let verdict = scalar(&c["verdict"]);
    out.push_str(&format!(
        "{kind}: {verdict} ({}, {})\n",
        scalar(&c["note"]),
        scalar(&c["computed_by"])
    ));
    if let Some(pos) = c["positions"].as_array() {
        let cells: Vec<String> = pos
            .iter()
            .map(|p| format!("{}:{}", scalar(&p["index"]), scalar(&p["rank"])))
            .collect();
        out.push_str(&format!("  positions (index:rank) {}\n", cells.join(" ")));
    }
    if !c["global_dimension"].is_null() {
        out.push_str(&format!("  global dimension {}\n", scalar(&c["global_dimension"])));
    }
    if !c["top_degree"].is_null() {
        out.push_str(&format!(
            "  top class in internal degree {}\n",
            scalar(&c["top_degree"])
        ));
    }
    if let Some(h) = c["homology"].as_array() {
        for e in h.iter().filter(|e| e["homology"].as_u64() != Some(0)) {
            out.push_str(&format!(
                "  H at position {}, degree {}: {}\n",
                scalar(&e["position"]),
                scalar(&e["degree"]),
                scalar(&e["homology"])
            ));
        }
    }
    if !c["witness"].is_null() {
        let w = &c["witness"];
        out.push_str(&format!(
            "  witness: position {}, degree {}: {}\n",
            scalar(&w["position"]),
            scalar(&w["degree"]),
            scalar(&w["reason"])
        ));
    }
}

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    let input = &v["input"];
    let meta = &v["meta"];
    out.push_str(&format!(
        "{} ({}), generators {}, degree {}\n",
        scalar(&input["label"]),
        scalar(&input["source"]),
        scalar(&Value::Array(
            input["generators"].as_array().cloned().unwrap_or_default()
        )),
        scalar(&input["degree"])
    ));
    out.push_str(&format!("fingerprint {}\n", scalar(&input["fingerprint"])));
    let cmd = &meta["command"];
    out.push_str(&format!(
        "{} cutoff {} field {}\n",
        scalar(&cmd["verb"]),
        scalar(&cmd["cutoff"]),
        scalar(&cmd["field"])
    ));
    if let Some(r) = v["results"].as_object() {
        let mut rows = Vec::new();
        for (k, x) in r {
            flatten(k, x, &mut rows);
        }
        for (k, x) in rows {
            out.push_str(&format!("{k}: {x}\n"));
        }
    }
    if let Some(cs) = v["certificates"].as_array() {
        for c in cs {
            certificate_text(c, &mut out);
        }
    }
    out.push_str(if meta["passed"] == Value::Bool(true) {
        "PASS\n"
    } else {
        "FAIL\n"
    });
    if !meta["timing_ms"].is_null() {
        out.push_str(&format!("{} ms\n", scalar(&meta["timing_ms"])));
    }
    out
}
