//! JSON polynomial format:
//! `{"mode":"rational"|"complex","coeffs":[...]}`, constant term last,
//! rationals as `"p/q"` strings, complex values as `[re, im]` pairs.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ComplexPoly, Poly, RationalPoly};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, C64};

/// A polynomial in either scalar mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Rational(RationalPoly),
    Complex(ComplexPoly),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub mode: String,
    pub coeffs: Vec<Value>,
}

impl AnyPoly {
    pub fn degree(&self) -> usize {
        match self {
            AnyPoly::Rational(p) => p.degree(),
            AnyPoly::Complex(p) => p.degree(),
        }
    }

    pub fn to_complex(&self) -> ComplexPoly {
        match self {
            AnyPoly::Rational(p) => p.to_complex(),
            AnyPoly::Complex(p) => p.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnyPoly::Rational(_))
    }

    pub fn to_json(&self) -> PolyJson {
        match self {
            AnyPoly::Rational(p) => PolyJson {
                mode: "rational".into(),
                coeffs: p.descending().iter().map(|c| Value::String(format_rational(c))).collect(),
            },
            AnyPoly::Complex(p) => PolyJson {
                mode: "complex".into(),
                coeffs: p.descending().iter().map(|c| complex_value(*c)).collect(),
            },
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        match j.mode.as_str() {
            "rational" => {
                let c = j
                    .coeffs
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => parse_rational(s),
                        Value::Number(n) => n.as_i64().and_then(|i| parse_rational(&i.to_string())),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::invalid("rational coefficients must be \"p/q\" strings"))?;
                Ok(AnyPoly::Rational(Poly::from_descending(c)))
            }
            "complex" => {
                let c = j
                    .coeffs
                    .iter()
                    .map(parse_complex_value)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::invalid("complex coefficients must be [re, im] pairs"))?;
                Ok(AnyPoly::Complex(Poly::from_descending(c)))
            }
            m => Err(Error::invalid(format!("unknown polynomial mode `{m}`"))),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| Error::invalid(format!("polynomial JSON: {e}")))?;
        Self::from_json(&j)
    }
}

impl From<RationalPoly> for AnyPoly {
    fn from(p: RationalPoly) -> Self {
        AnyPoly::Rational(p)
    }
}

impl From<ComplexPoly> for AnyPoly {
    fn from(p: ComplexPoly) -> Self {
        AnyPoly::Complex(p)
    }
}

impl Serialize for AnyPoly {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AnyPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        AnyPoly::from_json(&j).map_err(serde::de::Error::custom)
    }
}

pub fn complex_value(c: C64) -> Value {
    serde_json::json!([c.re, c.im])
}

pub fn parse_complex_value(v: &Value) -> Option<C64> {
    match v {
        Value::Array(a) if a.len() == 2 => Some(C64::new(a[0].as_f64()?, a[1].as_f64()?)),
        Value::Number(n) => Some(C64::new(n.as_f64()?, 0.0)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_constant_term_last() {
        let p = AnyPoly::from_json_str(r#"{"mode":"rational","coeffs":["1","-3/2","2"]}"#).unwrap();
        match &p {
            AnyPoly::Rational(q) => {
                assert_eq!(q.degree(), 2);
                assert_eq!(format_rational(&q.coeff(0)), "2");
                assert_eq!(format_rational(&q.coeff(1)), "-3/2");
            }
            _ => panic!("mode"),
        }
        let back = serde_json::to_string(&p).unwrap();
        assert_eq!(back, r#"{"mode":"rational","coeffs":["1","-3/2","2"]}"#);
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(AnyPoly::from_json_str(r#"{"mode":"exotic","coeffs":[]}"#).is_err());
        assert!(AnyPoly::from_json_str(r#"{"mode":"complex","coeffs":[[1]]}"#).is_err());
        assert!(AnyPoly::from_json_str(r#"{"mode":"rational","coeffs":["1/0"]}"#).is_err());
    }

    proptest! {
        #[test]
        fn complex_roundtrip(c in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..8)) {
            let mut v: Vec<C64> = c.iter().map(|&(a, b)| C64::new(a, b)).collect();
            v[0] = C64::new(1.0, 0.0);
            let p = AnyPoly::Complex(Poly::from_descending(v));
            let s = serde_json::to_string(&p).unwrap();
            let q: AnyPoly = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(p, q);
        }
    }
}
