//! Exact nonnegative rational values.
//!
//! All bundle values in this library are exact rationals; verdicts (EFX,
//! class membership, key comparisons) are discrete and must never depend on
//! floating-point rounding, so there is no `f64` anywhere in the core.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact nonnegative rational value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(BigRational);

impl Value {
    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn from_int(n: u64) -> Self {
        Value(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Result<Self> {
        Self::from_ratio(BigRational::from_integer(n))
    }

    /// Wraps a rational, rejecting negative inputs.
    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidValuation(format!("negative value {r}")));
        }
        Ok(Value(r))
    }

    /// `num/den` with `den > 0`.
    pub fn ratio(num: u64, den: u64) -> Self {
        Value(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Signed difference `self - other`.
    pub fn diff(&self, other: &Self) -> BigRational {
        &self.0 - &other.0
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::from_int(n)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl Add<&Value> for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        Value(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Value> for Value {
    fn add_assign(&mut self, rhs: &Value) {
        self.0 += &rhs.0;
    }
}

impl Mul<&Value> for &Value {
    type Output = Value;
    fn mul(self, rhs: &Value) -> Value {
        Value(&self.0 * &rhs.0)
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        let mut acc = BigRational::zero();
        for v in iter {
            acc += v.0;
        }
        Value(acc)
    }
}

/// Parses `"num/den"`, `"num"`, or a decimal integer literal.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

impl FromStr for Value {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Value::from_ratio(parse_ratio(s)?)
    }
}

// JSON encoding for rationals: plain integers stay JSON numbers when they fit
// exactly in every common JSON parser (|n| < 2^53); everything else is a
// `"num/den"` (or `"num"`) string.
const MAX_SAFE_JSON_INT: u64 = (1 << 53) - 1;

pub(crate) fn serialize_ratio<S: Serializer>(
    r: &BigRational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    if r.denom().is_one() {
        let n = r.numer();
        if let Some(i) = n.to_i64() {
            if i.unsigned_abs() <= MAX_SAFE_JSON_INT {
                return serializer.serialize_i64(i);
            }
        }
        return serializer.serialize_str(&n.to_string());
    }
    serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

pub(crate) fn deserialize_ratio<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> std::result::Result<BigRational, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }
    match Repr::deserialize(deserializer)? {
        Repr::Int(i) => Ok(BigRational::from_integer(BigInt::from(i))),
        Repr::Str(s) => parse_ratio(&s).map_err(D::Error::custom),
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_ratio(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = deserialize_ratio(deserializer)?;
        Value::from_ratio(r).map_err(D::Error::custom)
    }
}

/// A signed rational per good, as used by price-perturbed valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceVector(pub Vec<BigRational>);

impl PriceVector {
    pub fn zeros(m: usize) -> Self {
        PriceVector(vec![BigRational::zero(); m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses a comma-separated list of rationals, e.g. `"1,1,2"` or `"-3/2,0,5"`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(PriceVector(Vec::new()));
        }
        s.split(',')
            .map(parse_ratio)
            .collect::<Result<Vec<_>>>()
            .map(PriceVector)
    }
}

impl Serialize for PriceVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for r in &self.0 {
            struct W<'a>(&'a BigRational);
            impl Serialize for W<'_> {
                fn serialize<S2: Serializer>(
                    &self,
                    s: S2,
                ) -> std::result::Result<S2::Ok, S2::Error> {
                    serialize_ratio(self.0, s)
                }
            }
            seq.serialize_element(&W(r))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for PriceVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct W(BigRational);
        impl<'de> Deserialize<'de> for W {
            fn deserialize<D2: Deserializer<'de>>(d: D2) -> std::result::Result<Self, D2::Error> {
                deserialize_ratio(d).map(W)
            }
        }
        let v = Vec::<W>::deserialize(deserializer)?;
        Ok(PriceVector(v.into_iter().map(|w| w.0).collect()))
    }
}
