//! JSON formats for sequences and reference measures.
//!
//! Sequence: `{"lo": int, "hi": int, "values": [...], "backend": "rational"|"float"}`
//! with rational values written as `"num/den"` strings and float values as
//! shortest round-trip numbers. Reference:
//! `{"kind": ..., "params": {...}, "lo": int, "hi": int}`.

use num::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::interval::IntegerInterval;
use crate::reference::{ReferenceKind, ReferenceMeasure};
use crate::scalar::{parse_rational, Backend, Scalar};
use crate::sequence::Sequence;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn sequence_to_json<S: Scalar>(seq: &Sequence<S>) -> Value {
    let values: Vec<Value> = match S::BACKEND {
        Backend::Rational => seq.values().iter().map(|v| Value::String(v.to_text())).collect(),
        Backend::Float => seq.values().iter().map(|v| json!(v.to_f64())).collect(),
    };
    json!({
        "lo": seq.lo(),
        "hi": seq.hi(),
        "values": values,
        "backend": S::BACKEND,
    })
}

fn field_i64(obj: &Map<String, Value>, key: &str) -> Result<i64> {
    obj.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| parse_err(format!("missing integer field '{key}'")))
}

fn scalar_from_value<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => S::parse_text(s),
        // number literals are parsed from their text so rationals stay exact
        Value::Number(n) => S::parse_text(&n.to_string()),
        other => Err(parse_err(format!("expected a number or string, got {other}"))),
    }
}

/// Declared backend of a sequence document, if any.
pub fn declared_backend(v: &Value) -> Result<Option<Backend>> {
    match v.get("backend") {
        None | Some(Value::Null) => Ok(None),
        Some(b) => serde_json::from_value(b.clone())
            .map(Some)
            .map_err(|_| parse_err(format!("unknown backend {b}"))),
    }
}

/// Parses a sequence document into backend `S`, whatever backend it was
/// written in.
pub fn sequence_from_json<S: Scalar>(v: &Value) -> Result<Sequence<S>> {
    let obj = v.as_object().ok_or_else(|| parse_err("sequence must be a JSON object"))?;
    declared_backend(v)?;
    let lo = field_i64(obj, "lo")?;
    let values = obj
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing array field 'values'"))?;
    if let Some(hi) = obj.get("hi") {
        let hi = hi.as_i64().ok_or_else(|| parse_err("'hi' must be an integer"))?;
        if hi - lo + 1 != values.len() as i64 {
            return Err(parse_err(format!("[{lo}, {hi}] does not match {} values", values.len())));
        }
    }
    let values = values.iter().map(scalar_from_value).collect::<Result<Vec<S>>>()?;
    Sequence::new(lo, values)
}

pub fn sequence_from_str<S: Scalar>(s: &str) -> Result<Sequence<S>> {
    let v: Value = serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))?;
    sequence_from_json(&v)
}

pub fn sequence_to_string<S: Scalar>(seq: &Sequence<S>) -> String {
    serde_json::to_string_pretty(&sequence_to_json(seq)).expect("plain JSON")
}

fn rational_text(r: &BigRational) -> Value {
    Value::String(r.to_text())
}

pub fn reference_to_json(gamma: &ReferenceMeasure) -> Value {
    let params = match gamma.kind() {
        ReferenceKind::Counting => json!({}),
        ReferenceKind::Poisson { lambda } => json!({ "lambda": rational_text(lambda) }),
        ReferenceKind::Binomial { m } => json!({ "m": m }),
        ReferenceKind::QGauss { q } => json!({ "q": rational_text(q) }),
        ReferenceKind::Custom { masses } => json!({ "values": masses.iter().map(rational_text).collect::<Vec<_>>() }),
    };
    json!({
        "kind": gamma.kind_name(),
        "params": params,
        "lo": gamma.support().lo(),
        "hi": gamma.support().hi(),
    })
}

pub fn reference_from_json(v: &Value) -> Result<ReferenceMeasure> {
    let obj = v.as_object().ok_or_else(|| parse_err("reference must be a JSON object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("missing string field 'kind'"))?;
    let support = IntegerInterval::new(field_i64(obj, "lo")?, field_i64(obj, "hi")?)?;
    let empty = Map::new();
    let params = match obj.get("params") {
        None | Some(Value::Null) => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => return Err(parse_err("'params' must be an object")),
    };
    let param = |key: &str| params.get(key).ok_or_else(|| parse_err(format!("{kind} reference needs params.{key}")));
    let kind = match kind {
        "counting" => ReferenceKind::Counting,
        "poisson" => ReferenceKind::Poisson {
            lambda: scalar_from_value(param("lambda")?)?,
        },
        "binomial" => {
            let m = param("m")?
                .as_u64()
                .and_then(|m| u32::try_from(m).ok())
                .ok_or_else(|| parse_err("params.m must be a positive integer"))?;
            ReferenceKind::Binomial { m }
        }
        "qgauss" => ReferenceKind::QGauss {
            q: scalar_from_value(param("q")?)?,
        },
        "custom" => {
            let values = param("values")?
                .as_array()
                .ok_or_else(|| parse_err("params.values must be an array"))?;
            ReferenceKind::Custom {
                masses: values.iter().map(scalar_from_value).collect::<Result<_>>()?,
            }
        }
        other => return Err(parse_err(format!("unknown reference kind '{other}'"))),
    };
    ReferenceMeasure::new(kind, support)
}

pub fn reference_from_str(s: &str) -> Result<ReferenceMeasure> {
    let v: Value = serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))?;
    reference_from_json(&v)
}

/// Parses a rational from a JSON string or number without going through
/// `f64`.
pub fn rational_from_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        other => scalar_from_value(other),
    }
}
