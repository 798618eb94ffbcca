//! JSON encodings. Integers are written with full precision; all collections
//! are emitted in canonical order so equal values serialize identically.
//!
//! * ℤG element: `[[c, m, n], ...]`, sorted by `(m, n)`
//! * 1-chain: `[{"c", "a": [m,n], "b": [m,n]}, ...]`
//! * 2-chain: `[{"c", "a", "b", "t"}, ...]` for `c · a⊗b⊗t`
//! * matrix: `[[a, b], [c, d]]`, row-major

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::algebra::{Endomorphism, GroupElement, RingElement};
use crate::error::{Error, Result};
use crate::hochschild::{Tensor1, Tensor2, TensorChain1, TensorChain2, TrivialityVerdict};
use crate::lattice::{IntMatrix2, Vec2};
use crate::trace::{CellularHomotopyData, ChainMapMatrices, TheoremVerdict, TraceReport, Violation};

fn malformed(what: &str, v: &Value) -> Error {
    let mut s = v.to_string();
    if s.len() > 80 {
        s.truncate(77);
        s.push_str("...");
    }
    Error::Malformed(format!("expected {what}, got {s}"))
}

pub fn int_to_json(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal"))
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| malformed("integer", v)),
        _ => Err(malformed("integer", v)),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(what, v))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Malformed(format!("missing field \"{key}\"")))
}

pub fn vec2_to_json(x: &Vec2) -> Value {
    Value::Array(vec![int_to_json(&x[0]), int_to_json(&x[1])])
}

pub fn vec2_from_json(v: &Value) -> Result<Vec2> {
    match array(v, "pair [m,n]")?.as_slice() {
        [a, b] => Ok([int_from_json(a)?, int_from_json(b)?]),
        _ => Err(malformed("pair [m,n]", v)),
    }
}

pub fn group_to_json(g: &GroupElement) -> Value {
    vec2_to_json(&g.exponents())
}

pub fn group_from_json(v: &Value) -> Result<GroupElement> {
    Ok(GroupElement::from_exponents(&vec2_from_json(v)?))
}

pub fn ring_to_json(x: &RingElement) -> Value {
    Value::Array(
        x.iter().map(|(g, c)| Value::Array(vec![int_to_json(c), int_to_json(&g.m), int_to_json(&g.n)])).collect(),
    )
}

pub fn ring_from_json(v: &Value) -> Result<RingElement> {
    let mut out = RingElement::zero();
    for t in array(v, "list of [c,m,n]")? {
        match array(t, "[c,m,n]")?.as_slice() {
            [c, m, n] => out.add_term(GroupElement::new(int_from_json(m)?, int_from_json(n)?), int_from_json(c)?),
            _ => return Err(malformed("[c,m,n]", t)),
        }
    }
    Ok(out)
}

pub fn chain1_to_json(x: &TensorChain1) -> Value {
    Value::Array(
        x.iter()
            .map(|(t, c)| json!({"c": int_to_json(c), "a": group_to_json(&t.a), "b": group_to_json(&t.b)}))
            .collect(),
    )
}

pub fn chain1_from_json(v: &Value) -> Result<TensorChain1> {
    let mut out = TensorChain1::zero();
    for r in array(v, "list of 1-chain records")? {
        let t = Tensor1::new(group_from_json(field(r, "a")?)?, group_from_json(field(r, "b")?)?);
        out.add_term(t, int_from_json(field(r, "c")?)?);
    }
    Ok(out)
}

pub fn chain2_to_json(x: &TensorChain2) -> Value {
    Value::Array(
        x.iter()
            .map(|(t, c)| {
                json!({"c": int_to_json(c), "a": group_to_json(&t.a), "b": group_to_json(&t.b), "t": group_to_json(&t.c)})
            })
            .collect(),
    )
}

pub fn chain2_from_json(v: &Value) -> Result<TensorChain2> {
    let mut out = TensorChain2::zero();
    for r in array(v, "list of 2-chain records")? {
        let t = Tensor2::new(
            group_from_json(field(r, "a")?)?,
            group_from_json(field(r, "b")?)?,
            group_from_json(field(r, "t")?)?,
        );
        out.add_term(t, int_from_json(field(r, "c")?)?);
    }
    Ok(out)
}

pub fn matrix_to_json(m: &IntMatrix2) -> Value {
    Value::Array(m.rows.iter().map(|r| Value::Array(r.iter().map(int_to_json).collect())).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix2> {
    let rows = array(v, "[[a,b],[c,d]]")?;
    let [r0, r1] = rows.as_slice() else { return Err(malformed("[[a,b],[c,d]]", v)) };
    let (r0, r1) = (vec2_from_json(r0)?, vec2_from_json(r1)?);
    Ok(IntMatrix2 { rows: [r0, r1] })
}

pub fn endomorphism_from_json(v: &Value) -> Result<Endomorphism> {
    Ok(Endomorphism::new(matrix_from_json(v)?))
}

pub fn chain_map_to_json(f: &ChainMapMatrices) -> Value {
    let row = |r: &[RingElement; 2]| Value::Array(r.iter().map(ring_to_json).collect());
    json!({
        "deg0": ring_to_json(&f.deg0),
        "deg1": [row(&f.deg1[0]), row(&f.deg1[1])],
        "deg2": ring_to_json(&f.deg2),
    })
}

pub fn chain_map_from_json(v: &Value) -> Result<ChainMapMatrices> {
    let d1 = field(v, "deg1")?;
    let rows = array(d1, "2×2 matrix of ℤG elements")?;
    let [r0, r1] = rows.as_slice() else { return Err(malformed("2×2 matrix of ℤG elements", d1)) };
    let row = |r: &Value| -> Result<[RingElement; 2]> {
        match array(r, "row of two ℤG elements")?.as_slice() {
            [a, b] => Ok([ring_from_json(a)?, ring_from_json(b)?]),
            _ => Err(malformed("row of two ℤG elements", r)),
        }
    };
    Ok(ChainMapMatrices {
        deg0: ring_from_json(field(v, "deg0")?)?,
        deg1: [row(r0)?, row(r1)?],
        deg2: ring_from_json(field(v, "deg2")?)?,
    })
}

fn pair_to_json(p: &[RingElement; 2]) -> Value {
    json!({"u": ring_to_json(&p[0]), "v": ring_to_json(&p[1])})
}

fn pair_from_json(v: &Value) -> Result<[RingElement; 2]> {
    Ok([ring_from_json(field(v, "u")?)?, ring_from_json(field(v, "v")?)?])
}

pub fn cellular_to_json(d: &CellularHomotopyData) -> Value {
    json!({
        "D0": pair_to_json(&d.d0),
        "D1": pair_to_json(&d.d1),
        "F0": chain_map_to_json(&d.f0),
        "F1": chain_map_to_json(&d.f1),
        "excluded_classes": Value::Array(d.excluded_classes.iter().map(group_to_json).collect()),
    })
}

pub fn cellular_from_json(v: &Value) -> Result<CellularHomotopyData> {
    let excluded = match v.get("excluded_classes") {
        None | Some(Value::Null) => BTreeSet::new(),
        Some(e) => array(e, "list of [m,n]")?.iter().map(group_from_json).collect::<Result<_>>()?,
    };
    Ok(CellularHomotopyData {
        d0: pair_from_json(field(v, "D0")?)?,
        d1: pair_from_json(field(v, "D1")?)?,
        f0: chain_map_from_json(field(v, "F0")?)?,
        f1: chain_map_from_json(field(v, "F1")?)?,
        excluded_classes: excluded,
    })
}

/// `{"phi": ..., "cellular": ...}`.
pub fn document_to_json(phi: &Endomorphism, data: &CellularHomotopyData) -> Value {
    json!({"phi": matrix_to_json(phi.matrix()), "cellular": cellular_to_json(data)})
}

pub fn document_from_json(v: &Value) -> Result<(Endomorphism, CellularHomotopyData)> {
    Ok((endomorphism_from_json(field(v, "phi")?)?, cellular_from_json(field(v, "cellular")?)?))
}

pub fn verdict_fields(v: &TrivialityVerdict) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("verdict".into(), Value::String(v.label().into()));
    match v {
        TrivialityVerdict::Trivial(c) => m.insert("certificate".into(), chain2_to_json(c)),
        TrivialityVerdict::Nontrivial(i) => m.insert("invariant".into(), vec2_to_json(i)),
        TrivialityVerdict::Unknown(b) => m.insert("support_bound".into(), json!(b)),
    };
    m
}

pub fn theorem_to_json(t: TheoremVerdict) -> Value {
    match t {
        TheoremVerdict::Holds => Value::Bool(true),
        TheoremVerdict::Fails => Value::Bool(false),
        TheoremVerdict::Inconclusive => Value::String("inconclusive".into()),
    }
}

pub fn report_to_json(r: &TraceReport) -> Value {
    let components: Vec<Value> = r
        .components
        .iter()
        .map(|(class, v)| {
            let mut m = verdict_fields(v);
            m.insert("class".into(), group_to_json(&class.rep));
            Value::Object(m)
        })
        .collect();
    json!({
        "R": chain1_to_json(&r.r),
        "components": components,
        "N": r.nielsen,
        "L": vec2_to_json(&r.lefschetz),
        "alpha": r.alpha.as_ref().map(vec2_to_json).unwrap_or(Value::Null),
        "theorem_holds": theorem_to_json(r.theorem),
    })
}

pub fn violation_to_json(v: &Violation) -> Value {
    json!({
        "identity": v.kind.to_string(),
        "degree": v.degree,
        "entry": [v.entry.0, v.entry.1],
        "defect": ring_to_json(&v.defect),
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{tensor1, tensor2};
    use crate::trace::shear_example;

    #[test]
    fn big_integers_round_trip() {
        let x = BigInt::from_str("-123456789012345678901234567890").unwrap();
        let v = int_to_json(&x);
        assert_eq!(v.to_string(), "-123456789012345678901234567890");
        assert_eq!(int_from_json(&v).unwrap(), x);
        assert!(int_from_json(&parse("1.5").unwrap()).is_err());
    }

    #[test]
    fn ring_sorted_by_exponents() {
        let x = RingElement::from_terms([(GroupElement::new(2, -1), 3), (GroupElement::new(-1, 4), -2)]);
        assert_eq!(ring_to_json(&x).to_string(), "[[-2,-1,4],[3,2,-1]]");
        assert_eq!(ring_from_json(&ring_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn chains_round_trip() {
        let g = GroupElement::new;
        let x = tensor1(2, g(1, 0), g(0, 3)) + tensor1(-1, g(0, 0), g(5, 5));
        assert_eq!(chain1_from_json(&chain1_to_json(&x)).unwrap(), x);
        let y = tensor2(-4, g(1, 0), g(0, 3), g(2, 2));
        assert_eq!(chain2_from_json(&chain2_to_json(&y)).unwrap(), y);
        assert_eq!(chain2_to_json(&y).to_string(), r#"[{"a":[1,0],"b":[0,3],"c":-4,"t":[2,2]}]"#);
    }

    #[test]
    fn document_round_trip() {
        let (phi, data) = shear_example();
        let v = document_to_json(&phi, &data);
        let (phi2, data2) = document_from_json(&v).unwrap();
        assert_eq!((phi2, data2), (phi, data));
    }
}
