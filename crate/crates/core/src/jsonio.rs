//! JSON encodings of the public types.
//!
//! Sequences: `{"head":[...], "tail":{"kind":"zero"|"constant"|"geometric",
//! "c":..., "a":..., "r":...}}`; weights add `"p"` and use tail kinds
//! `"zero"|"powerlaw"|"geometric"`. Numbers are plain JSON numbers when they
//! are exactly representable (integers or binary floats) and
//! `{"num":...,"den":...}` objects otherwise, so that every emitted value
//! reads back bit-exactly.

use crate::certified::{q_from_f64, q_to_f64, CertVal, Extended, Q};
use crate::geometry::{CounterexampleBundle, Outcome, Verdict, Witness};
use crate::norms::SupNorm;
use crate::seqcore::{Sequence, Tail};
use crate::weights::{RegimeReport, WTail, WeightSpec};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

fn err(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

/// Rational to JSON: integer, exact float, or a num/den object.
pub fn real_to_value(q: &Q) -> Value {
    if q.is_integer() {
        if let Some(i) = q.numer().to_i64() {
            return json!(i);
        }
    }
    let f = q_to_f64(q);
    if f.is_finite() {
        if let Some(back) = q_from_f64(f) {
            if back == *q {
                return json!(f);
            }
        }
    }
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(n), Some(d)) => json!({"num": n, "den": d}),
        _ => json!({"num": q.numer().to_string(), "den": q.denom().to_string()}),
    }
}

/// JSON to rational: accepts numbers, num/den objects, and decimal strings
/// for oversized integers.
pub fn real_from_value(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(Q::from_integer(BigInt::from(i)));
            }
            let f = n.as_f64().ok_or_else(|| err("unrepresentable number"))?;
            q_from_f64(f).ok_or_else(|| err("non-finite number"))
        }
        Value::Object(m) => {
            let num = m.get("num").ok_or_else(|| err("missing num"))?;
            let den = m.get("den").ok_or_else(|| err("missing den"))?;
            let parse_int = |v: &Value| -> Result<BigInt> {
                match v {
                    Value::Number(n) => n
                        .as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| err("integer out of range")),
                    Value::String(s) => s.parse().map_err(|_| err("bad integer string")),
                    _ => Err(err("num/den must be integers")),
                }
            };
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Q::new(parse_int(num)?, d))
        }
        _ => Err(err("expected a number or a num/den object")),
    }
}

pub fn sequence_to_value(x: &Sequence) -> Value {
    let head: Vec<Value> = x.head().iter().map(real_to_value).collect();
    let tail = match x.tail() {
        Tail::Zero => json!({"kind": "zero"}),
        Tail::Constant(c) => json!({"kind": "constant", "c": real_to_value(c)}),
        Tail::Geometric { a, r } => {
            json!({"kind": "geometric", "a": real_to_value(a), "r": real_to_value(r)})
        }
    };
    json!({"head": head, "tail": tail})
}

pub fn sequence_from_value(v: &Value) -> Result<Sequence> {
    let obj = v.as_object().ok_or_else(|| err("sequence must be an object"))?;
    let head = match obj.get("head") {
        Some(Value::Array(a)) => a.iter().map(real_from_value).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
        _ => return Err(err("head must be an array")),
    };
    let tail = match obj.get("tail") {
        None => Tail::Zero,
        Some(t) => tail_from_value(t)?,
    };
    Sequence::new(head, tail)
}

fn tail_from_value(t: &Value) -> Result<Tail> {
    let obj = t.as_object().ok_or_else(|| err("tail must be an object"))?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("zero") | None => Ok(Tail::Zero),
        Some("constant") => {
            let c = real_from_value(obj.get("c").ok_or_else(|| err("constant tail needs c"))?)?;
            Ok(Tail::Constant(c))
        }
        Some("geometric") => {
            let a = real_from_value(obj.get("a").ok_or_else(|| err("geometric tail needs a"))?)?;
            let r = real_from_value(obj.get("r").ok_or_else(|| err("geometric tail needs r"))?)?;
            Ok(Tail::Geometric { a, r })
        }
        Some(k) => Err(err(format!("unknown tail kind {k:?}"))),
    }
}

pub fn weight_to_value(w: &WeightSpec) -> Value {
    let head: Vec<Value> = w.head().iter().map(real_to_value).collect();
    let tail = match w.tail() {
        WTail::Zero => json!({"kind": "zero"}),
        WTail::PowerLaw { c, alpha } => {
            json!({"kind": "powerlaw", "c": real_to_value(c), "alpha": real_to_value(alpha)})
        }
        WTail::Geometric { a, r } => {
            json!({"kind": "geometric", "a": real_to_value(a), "r": real_to_value(r)})
        }
    };
    json!({"head": head, "tail": tail, "p": real_to_value(w.p())})
}

pub fn weight_from_value(v: &Value) -> Result<WeightSpec> {
    let obj = v.as_object().ok_or_else(|| err("weights must be an object"))?;
    let head = match obj.get("head") {
        Some(Value::Array(a)) => a.iter().map(real_from_value).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
        _ => return Err(err("head must be an array")),
    };
    let tail = match obj.get("tail") {
        None => WTail::Zero,
        Some(t) => {
            let tobj = t.as_object().ok_or_else(|| err("tail must be an object"))?;
            match tobj.get("kind").and_then(Value::as_str) {
                Some("zero") | None => WTail::Zero,
                Some("powerlaw") => WTail::PowerLaw {
                    c: real_from_value(
                        tobj.get("c").ok_or_else(|| err("powerlaw tail needs c"))?,
                    )?,
                    alpha: real_from_value(
                        tobj.get("alpha")
                            .ok_or_else(|| err("powerlaw tail needs alpha"))?,
                    )?,
                },
                Some("geometric") => WTail::Geometric {
                    a: real_from_value(
                        tobj.get("a").ok_or_else(|| err("geometric tail needs a"))?,
                    )?,
                    r: real_from_value(
                        tobj.get("r").ok_or_else(|| err("geometric tail needs r"))?,
                    )?,
                },
                Some(k) => return Err(err(format!("unknown weight tail kind {k:?}"))),
            }
        }
    };
    let p = match obj.get("p") {
        Some(pv) => real_from_value(pv)?,
        None => Q::one(),
    };
    WeightSpec::new(head, tail, p)
}

pub fn certval_to_value(v: &CertVal) -> Value {
    let mut m = Map::new();
    m.insert("value".into(), json!(v.value()));
    m.insert("error".into(), json!(v.error()));
    m.insert("exact".into(), json!(v.is_exact()));
    if let Some(q) = v.as_exact() {
        m.insert("rational".into(), real_to_value(q));
    }
    Value::Object(m)
}

pub fn extended_to_value(v: &Extended) -> Value {
    match v {
        Extended::Infinite => json!({"infinite": true}),
        Extended::Finite(c) => {
            let mut m = certval_to_value(c);
            m.as_object_mut()
                .expect("object")
                .insert("infinite".into(), json!(false));
            m
        }
    }
}

pub fn supnorm_to_value(n: &SupNorm) -> Value {
    let mut m = certval_to_value(&n.value);
    m.as_object_mut()
        .expect("object")
        .insert("attained_at".into(), json!(n.attained_at));
    m
}

pub fn regime_to_value(r: &RegimeReport) -> Value {
    json!({
        "W_infinite": r.w_infinite,
        "order_continuous": r.order_continuous,
        "strictly_monotone": r.strictly_monotone,
        "strictly_convex": r.strictly_convex,
        "fatou": r.fatou,
        "dual_is_m_psi": r.dual_is_m_psi,
        "predual_is_m_psi0": r.predual_is_m_psi0,
        "all_weights_positive": r.all_weights_positive,
    })
}

pub fn verdict_to_value(v: &Verdict) -> Value {
    let result = match v.outcome {
        Outcome::Holds => json!(true),
        Outcome::Fails => json!(false),
        Outcome::Inconclusive => json!("inconclusive"),
    };
    let witness = v.witness.as_ref().map(witness_to_value);
    json!({
        "result": result,
        "witness": witness,
        "conditions": v
            .conditions
            .iter()
            .map(|c| json!({"name": c.name, "holds": c.holds}))
            .collect::<Vec<_>>(),
    })
}

fn witness_to_value(w: &Witness) -> Value {
    match w {
        Witness::AttainingIndex(n) => json!({"kind": "attaining_index", "n0": n}),
        Witness::ViolatingIndex { index, condition } => {
            json!({"kind": "violating_index", "index": index, "condition": condition})
        }
        Witness::Pair { y, z } => json!({
            "kind": "pair",
            "y": sequence_to_value(y),
            "z": sequence_to_value(z),
        }),
        Witness::Gap(g) => json!({"kind": "gap", "gap": g}),
        Witness::Note(s) => json!({"kind": "note", "note": s}),
    }
}

pub fn bundle_to_value(b: &CounterexampleBundle) -> Value {
    json!({
        "kind": b.kind.as_str(),
        "elements": b
            .elements
            .iter()
            .map(|(k, v)| (k.clone(), sequence_to_value(v)))
            .collect::<Map<String, Value>>(),
        "checks": b
            .checks
            .iter()
            .map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "exact": c.exact,
                "residual": c.residual,
            }))
            .collect::<Vec<_>>(),
        "notes": b.notes,
        "all_passed": b.all_passed(),
    })
}

/// Parse a vector of reals as f64 (used for projection inputs).
pub fn f64_vec_from_value(v: &Value) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| err("expected an array"))?;
    arr.iter()
        .map(|t| Ok(q_to_f64(&real_from_value(t)?)))
        .collect()
}

/// Parse a matrix (array of row arrays) of rationals.
pub fn q_matrix_from_value(v: &Value) -> Result<Vec<Vec<Q>>> {
    let arr = v.as_array().ok_or_else(|| err("expected an array of rows"))?;
    arr.iter()
        .map(|row| {
            let r = row.as_array().ok_or_else(|| err("row must be an array"))?;
            r.iter().map(real_from_value).collect()
        })
        .collect()
}

pub fn f64_matrix_from_value(v: &Value) -> Result<Vec<Vec<f64>>> {
    let arr = v.as_array().ok_or_else(|| err("expected an array of rows"))?;
    arr.iter().map(f64_vec_from_value).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::{q_int, q_ratio};

    #[test]
    fn reals_round_trip() {
        for q in [q_int(3), q_ratio(1, 3), q_ratio(-7, 2), q_from_f64(0.1).unwrap()] {
            let v = real_to_value(&q);
            assert_eq!(real_from_value(&v).unwrap(), q);
            // Emission is canonical: emitting again yields identical bytes.
            let v2 = real_to_value(&real_from_value(&v).unwrap());
            assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&v2).unwrap());
        }
    }

    #[test]
    fn sequences_round_trip() {
        let x = Sequence::new(
            vec![q_ratio(-2, 3), q_int(5)],
            Tail::Geometric {
                a: q_int(1),
                r: q_ratio(1, 2),
            },
        )
        .unwrap();
        let v = sequence_to_value(&x);
        assert_eq!(sequence_from_value(&v).unwrap(), x);
        let parsed = sequence_from_value(
            &serde_json::from_str(r#"{"head":[-2,3,1],"tail":{"kind":"zero"}}"#).unwrap(),
        )
        .unwrap();
        assert_eq!(parsed, Sequence::finite(vec![q_int(-2), q_int(3), q_int(1)]));
    }

    #[test]
    fn weights_round_trip() {
        let w = crate::fixtures::w_b(2);
        let v = weight_to_value(&w);
        assert_eq!(weight_from_value(&v).unwrap(), w);
        let wa = crate::fixtures::w_a();
        assert_eq!(weight_from_value(&weight_to_value(&wa)).unwrap(), wa);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(sequence_from_value(&serde_json::json!({"head": "x"})).is_err());
        assert!(
            sequence_from_value(&serde_json::json!({"head": [], "tail": {"kind": "wat"}}))
                .is_err()
        );
        assert!(real_from_value(&serde_json::json!({"num": 1, "den": 0})).is_err());
        // Trivial weight.
        assert!(weight_from_value(&serde_json::json!({"head": [0], "p": 1})).is_err());
    }
}
