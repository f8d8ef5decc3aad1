//! JSON form of a representation:
//!
//! ```json
//! {"field": "Q", "dim": {"1": 1, "2": 1}, "mats": {"a": [["1"]], "b": [["1/2"]]}}
//! ```
//!
//! Entries are strings (or integers). Arrows missing from `mats` act by zero.

use std::sync::Arc;

use serde_json::{Map, Value};

use super::{QRep, Representation};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::linalg::Matrix;
use crate::quiver::{BoundQuiver, DimVector};

/// A parsed representation over whichever field the payload names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyRepresentation {
    Rational(QRep),
    Modular(Representation<PrimeField>),
}

impl AnyRepresentation {
    pub fn field_tag(&self) -> String {
        match self {
            Self::Rational(m) => m.field().tag(),
            Self::Modular(m) => m.field().tag(),
        }
    }

    pub fn into_rational(self) -> Result<QRep> {
        match self {
            Self::Rational(m) => Ok(m),
            Self::Modular(m) => Err(Error::InvalidInput(format!(
                "expected a representation over Q, got one over {}",
                m.field().tag()
            ))),
        }
    }
}

pub fn to_json<F: Field>(m: &Representation<F>) -> Value {
    let q = m.algebra().quiver();
    let f = m.field();
    let dim: Map<String, Value> = q
        .vertices()
        .iter()
        .zip(&m.dim().0)
        .map(|(v, &d)| (v.clone(), Value::from(d)))
        .collect();
    let mats: Map<String, Value> = q
        .arrows()
        .iter()
        .zip(m.mats())
        .map(|(a, mat)| {
            let rows: Vec<Value> = (0..mat.rows())
                .map(|i| Value::Array(mat.row(i).iter().map(|x| Value::String(f.format(x))).collect()))
                .collect();
            (a.name.clone(), Value::Array(rows))
        })
        .collect();
    let mut out = Map::new();
    out.insert("field".into(), Value::String(f.tag()));
    out.insert("dim".into(), Value::Object(dim));
    out.insert("mats".into(), Value::Object(mats));
    Value::Object(out)
}

pub fn from_json(algebra: Arc<BoundQuiver>, value: &Value) -> Result<AnyRepresentation> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("representation must be a JSON object".into()))?;
    let tag = match obj.get("field") {
        None => "Q",
        Some(Value::String(s)) => s.as_str(),
        Some(other) => return Err(Error::Parse(format!("bad field {other}"))),
    };
    if tag == "Q" {
        return parse_over(algebra, Rationals, obj).map(AnyRepresentation::Rational);
    }
    let p = tag
        .strip_prefix('F')
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| Error::Parse(format!("unknown field '{tag}' (expected Q or F<p>)")))?;
    parse_over(algebra, PrimeField::new(p)?, obj).map(AnyRepresentation::Modular)
}

/// Parses a payload that must be over `Q`.
pub fn rational_from_json(algebra: Arc<BoundQuiver>, value: &Value) -> Result<QRep> {
    from_json(algebra, value)?.into_rational()
}

fn parse_over<F: Field>(
    algebra: Arc<BoundQuiver>,
    field: F,
    obj: &Map<String, Value>,
) -> Result<Representation<F>> {
    let q = algebra.quiver();
    let mut dim = DimVector::zero(q.num_vertices());
    if let Some(d) = obj.get("dim") {
        let d = d
            .as_object()
            .ok_or_else(|| Error::Parse("'dim' must be an object".into()))?;
        for (name, v) in d {
            let x = q.vertex(name)?;
            dim.0[x] = v
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("dimension at {name} must be a nonnegative integer")))?
                as usize;
        }
    }
    let mut mats: Vec<Matrix<F::Elem>> = q
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(&field, dim[a.head], dim[a.tail]))
        .collect();
    if let Some(m) = obj.get("mats") {
        let m = m
            .as_object()
            .ok_or_else(|| Error::Parse("'mats' must be an object".into()))?;
        for (name, rows) in m {
            let a = q.arrow_id(name)?;
            let rows = rows
                .as_array()
                .ok_or_else(|| Error::Parse(format!("matrix of {name} must be an array of rows")))?;
            let cols = dim[q.arrow(a).tail];
            let parsed = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse(format!("row of {name} must be an array")))?
                        .iter()
                        .map(|x| parse_entry(&field, x))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if parsed.len() != dim[q.arrow(a).head] || parsed.iter().any(|r| r.len() != cols) {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {name} needs a {}x{cols} matrix",
                    dim[q.arrow(a).head]
                )));
            }
            mats[a] = Matrix::from_rows(parsed, cols)?;
        }
    }
    Representation::new(algebra, field, dim, mats)
}

fn parse_entry<F: Field>(field: &F, v: &Value) -> Result<F::Elem> {
    match v {
        Value::String(s) => field.parse(s.trim()),
        Value::Number(n) => field.parse(&n.to_string()),
        other => Err(Error::Parse(format!("matrix entry {other} is not a number"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;
    use serde_json::json;

    #[test]
    fn round_trip_over_q() {
        let bq = Arc::new(catalog::kronecker());
        let v = json!({"field": "Q", "dim": {"1": 1, "2": 2}, "mats": {"a": [["1/2"], [3]]}});
        let m = rational_from_json(bq.clone(), &v).unwrap();
        assert!(m.mat(1).is_zero(&Rationals));
        let back = to_json(&m);
        assert_eq!(back["mats"]["a"], json!([["1/2"], ["3"]]));
        assert_eq!(rational_from_json(bq, &back).unwrap(), m);
    }

    #[test]
    fn prime_fields_and_errors() {
        let bq = Arc::new(catalog::kronecker());
        let v = json!({"field": "F5", "dim": {"1": 1, "2": 1}, "mats": {"a": [["7"]]}});
        match from_json(bq.clone(), &v).unwrap() {
            AnyRepresentation::Modular(m) => assert_eq!(m.mat(0).get(0, 0), &2),
            other => panic!("{other:?}"),
        }
        let bad = json!({"dim": {"1": 1, "2": 1}, "mats": {"a": [["1", "2"]]}});
        assert!(matches!(from_json(bq.clone(), &bad), Err(Error::ShapeMismatch(_))));
        assert!(from_json(bq, &json!({"field": "R"})).is_err());
    }
}
