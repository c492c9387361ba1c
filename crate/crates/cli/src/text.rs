//! Plain-text rendering of a JSON payload.

use std::fmt::Write;

use serde_json::Value;

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object() && is_flat(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn walk(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if is_flat(v) {
        let _ = writeln!(out, "{pad}{key}: {}", inline(v));
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                walk(out, k, x, depth + 1);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                walk(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        _ => unreachable!(),
    }
}

fn headline(command: &str, p: &Value) -> Option<String> {
    match command {
        "verdict" => {
            let v = &p["verdict"];
            Some(format!(
                "verdict: {} (l + dim centralizer = {}, l + dim g = {})",
                inline(&v["verdict"]),
                v["d_def"],
                v["d_inv"]
            ))
        }
        "cohomology tangent" | "report" => {
            let t = &p["tangent"];
            if t["status"] == "refused" {
                let w = &t["witness"];
                Some(format!(
                    "refused: rho = {} is {} (witness sigma={} lambda={} beta={})",
                    inline(&t["rho"]),
                    inline(&t["verdict"]),
                    inline(&w["sigma"]),
                    inline(&w["lambda"]),
                    inline(&w["beta"])
                ))
            } else {
                Some(format!("tangent cohomology dims: {}", inline(&t["dims"])))
            }
        }
        "cohomology line" => Some(format!("dims: {}  h0: {}", inline(&p["dims"]), p["h0"])),
        "resonance scan" => Some(format!("verdict: {}", inline(&p["certificate"]["verdict"]))),
        "oracle bwbd" | "oracle sweep" => Some(format!("all match: {}", p["all_match"])),
        "oracle kostant" => Some(format!("passed: {}", p["kostant"]["passed"])),
        _ => None,
    }
}

pub fn render(command: &str, payload: &Value) -> String {
    let mut out = String::new();
    if let Some(h) = headline(command, payload) {
        let _ = writeln!(out, "{h}");
    }
    if let Value::Object(map) = payload {
        for (k, v) in map {
            walk(&mut out, k, v, 0);
        }
    }
    out
}
