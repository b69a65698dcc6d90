//! Dual-mode numbers: exact big rationals or 64-bit floats.
//!
//! Arithmetic between two exact values stays exact; as soon as a float is
//! involved the result is a float. Exact values print and serialize as
//! `"num/den"` strings, floats as JSON numbers in their shortest round-trip
//! form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarMode::Exact => "exact",
            ScalarMode::Float => "float",
        })
    }
}

impl FromStr for ScalarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ScalarMode::Exact),
            "float" => Ok(ScalarMode::Float),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected `exact` or `float`".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn int(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(v.into()))
    }

    pub fn zero(mode: ScalarMode) -> Self {
        match mode {
            ScalarMode::Exact => Scalar::Exact(BigRational::zero()),
            ScalarMode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: ScalarMode) -> Self {
        match mode {
            ScalarMode::Exact => Scalar::Exact(BigRational::one()),
            ScalarMode::Float => Scalar::Float(1.0),
        }
    }

    /// Integer value `v` in the requested mode.
    pub fn from_u64(v: u64, mode: ScalarMode) -> Self {
        match mode {
            ScalarMode::Exact => Scalar::Exact(BigRational::from_integer(v.into())),
            ScalarMode::Float => Scalar::Float(v as f64),
        }
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Exact(_) => ScalarMode::Exact,
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    /// Converts to the requested mode; exact values lose precision when
    /// demoted, floats cannot be promoted.
    pub fn into_mode(self, mode: ScalarMode) -> Result<Self> {
        match (self, mode) {
            (Scalar::Exact(r), ScalarMode::Float) => Ok(Scalar::Float(rational_to_f64(&r))),
            (Scalar::Float(x), ScalarMode::Exact) => Err(Error::NotRational(format!(
                "float value {x} cannot be used in exact mode"
            ))),
            (s, _) => Ok(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn powi(&self, e: u32) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(num_traits::pow(r.clone(), e as usize)),
            Scalar::Float(x) => Scalar::Float(x.powi(e as i32)),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Sum in the given mode. Floats use Neumaier compensation.
    pub fn sum<'a, I>(values: I, mode: ScalarMode) -> Self
    where
        I: IntoIterator<Item = &'a Scalar>,
    {
        match mode {
            ScalarMode::Exact => {
                let mut acc = BigRational::zero();
                let mut float = None;
                for v in values {
                    match v {
                        Scalar::Exact(r) => acc += r,
                        Scalar::Float(x) => *float.get_or_insert(0.0) += x,
                    }
                }
                match float {
                    None => Scalar::Exact(acc),
                    Some(f) => Scalar::Float(rational_to_f64(&acc) + f),
                }
            }
            ScalarMode::Float => Scalar::Float(neumaier_sum(values.into_iter().map(Scalar::to_f64))),
        }
    }
}

/// Neumaier's improved Kahan summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn parse_bigint(s: &str, whole: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            input: whole.to_string(),
            reason: format!("`{t}` is not an integer"),
        });
    }
    t.parse::<BigInt>().map_err(|e| Error::Parse {
        input: whole.to_string(),
        reason: e.to_string(),
    })
}

impl FromStr for Scalar {
    type Err = Error;

    /// `"num/den"` and bare integers parse exactly; anything else is read
    /// as a finite float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_bigint(num, s)?;
            let den = parse_bigint(den, s)?;
            if den.is_zero() {
                return Err(Error::Parse {
                    input: s.to_string(),
                    reason: "zero denominator".into(),
                });
            }
            return Ok(Scalar::Exact(BigRational::new(num, den)));
        }
        if let Ok(i) = parse_bigint(s, s) {
            return Ok(Scalar::Exact(BigRational::from_integer(i)));
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Scalar::Float(x)),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected `num/den`, an integer or a finite decimal".into(),
            }),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => serializer.collect_str(self),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => Ok(Scalar::Float(x)),
            Repr::Str(s) => match s.parse::<Scalar>() {
                Ok(v @ Scalar::Exact(_)) => Ok(v),
                Ok(Scalar::Float(_)) => Err(serde::de::Error::custom(format!(
                    "exact values must be `num/den` strings, got `{s}`"
                ))),
                Err(e) => Err(serde::de::Error::custom(e)),
            },
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                &self $op rhs
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}
