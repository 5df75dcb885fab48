//! Scalar fields used throughout the crate: exact rationals and complex floats.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;
/// Floating complex scalar.
pub type C64 = Complex64;

/// A field element usable by the polynomial and linear-algebra kernels.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for exact arithmetic (no rounding).
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn to_c64(&self) -> C64;

    /// Modulus as a float, used for pivoting and scaling.
    fn magnitude(&self) -> f64;

    fn to_num(&self) -> Num;

    /// Pivot preference: exact mode prefers the first nonzero entry,
    /// float mode the entry of largest modulus.
    fn pivot_score(&self) -> f64 {
        if Self::EXACT {
            if self.is_zero() {
                0.0
            } else {
                1.0
            }
        } else {
            self.magnitude()
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_c64(&self) -> C64 {
        C64::new(rational_to_f64(self), 0.0)
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn to_num(&self) -> Num {
        Num::Rational(self.clone())
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_num(&self) -> Num {
        Num::Complex(*self)
    }
}

/// Nearest f64 to a big rational, robust to numerators and denominators
/// too large for a direct conversion.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        q / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let v = scaled.numer().to_f64().unwrap_or(0.0) / scaled.denom().to_f64().unwrap_or(1.0);
    v * 2f64.powi(shift as i32)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a decimal integer string.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact square root of a rational when it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// A scalar of either mode, for serialized data; rationals print as
/// `"p/q"` strings and complex values as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Rational(Rational),
    Complex(C64),
}

impl Num {
    pub fn to_c64(&self) -> C64 {
        match self {
            Num::Rational(q) => q.to_c64(),
            Num::Complex(c) => *c,
        }
    }
}

impl From<C64> for Num {
    fn from(c: C64) -> Self {
        Num::Complex(c)
    }
}

impl From<Rational> for Num {
    fn from(q: Rational) -> Self {
        Num::Rational(q)
    }
}

impl serde::Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Rational(q) => s.serialize_str(&format_rational(q)),
            Num::Complex(c) => [c.re, c.im].serialize(s),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde_json::Value;
        let v = Value::deserialize(d)?;
        match &v {
            Value::String(s) => parse_rational(s)
                .map(Num::Rational)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`"))),
            Value::Array(a) if a.len() == 2 => match (a[0].as_f64(), a[1].as_f64()) {
                (Some(re), Some(im)) => Ok(Num::Complex(C64::new(re, im))),
                _ => Err(serde::de::Error::custom("complex value must be [re, im]")),
            },
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(Num::Rational(rat_int(i))),
                None => Ok(Num::Complex(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0))),
            },
            _ => Err(serde::de::Error::custom("expected a scalar")),
        }
    }
}

/// Converts a slice of scalars to complex floats.
pub fn to_c64_vec<S: Scalar>(v: &[S]) -> Vec<C64> {
    v.iter().map(Scalar::to_c64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats_rationals() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(q, rat(-3, 2));
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&rat_int(7)), "7");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 1999usize);
        assert!((rational_to_f64(&big) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_square_detection() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }
}
