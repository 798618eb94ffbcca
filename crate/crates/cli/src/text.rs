//! Plain-text renderings for `--format text`.

use std::fmt::Display;

use serde_json::Value;
use torus_lefschetz::algebra::LinComb;

/// One term per line, `coeff · key`; `0` for the empty chain.
fn lincomb<K: Ord + Clone + Display>(x: &LinComb<K>) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    x.iter().map(|(k, c)| format!("{c} · {k}\n")).collect()
}

pub fn chain1(x: &torus_lefschetz::TensorChain1) -> String {
    lincomb(x)
}

pub fn chain2(x: &torus_lefschetz::TensorChain2) -> String {
    lincomb(x)
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn classes(doc: &Value) -> String {
    let mut s = format!("det([φ]−I) = {}\nclasses: {}\n", doc["det"], compact(&doc["count"]));
    if let Some(reps) = doc.get("representatives") {
        s += &format!("representatives: {}\n", compact(reps));
    }
    if let Some(d) = doc.get("invariant_factors") {
        s += &format!("invariant factors: {}\n", compact(d));
    }
    if let Some(Value::Array(ids)) = doc.get("class_ids") {
        for id in ids {
            s += &format!("{} in class {}\n", compact(&id["g"]), compact(&id["class"]));
        }
    }
    s
}

pub fn same_class(doc: &Value) -> String {
    if doc["same_class"] == Value::Bool(true) {
        format!("same class, witness {}\n", compact(&doc["witness"]))
    } else {
        "different classes\n".into()
    }
}

pub fn kernel(doc: &Value) -> String {
    format!(
        "rank {}\nbasis {}\nsmith U={} S={} V={}\n",
        doc["rank"],
        compact(&doc["basis"]),
        compact(&doc["smith"]["U"]),
        compact(&doc["smith"]["S"]),
        compact(&doc["smith"]["V"]),
    )
}

pub fn components(doc: &Value) -> String {
    let mut s = String::new();
    if let Value::Array(cs) = &doc["components"] {
        for c in cs {
            s += &format!("class {}: {}", compact(&c["class"]), c["verdict"].as_str().unwrap_or("?"));
            if let Some(inv) = c.get("invariant") {
                s += &format!(" {}", compact(inv));
            }
            s.push('\n');
        }
    }
    s
}

pub fn report(doc: &Value) -> String {
    let mut s = components(doc);
    s += &format!(
        "N = {}\nL = {}\nalpha = {}\ntheorem holds: {}\n",
        doc["N"],
        compact(&doc["L"]),
        compact(&doc["alpha"]),
        compact(&doc["theorem_holds"]),
    );
    s
}
