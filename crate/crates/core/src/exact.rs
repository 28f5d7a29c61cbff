//! Exact rational values and their report encoding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
///
/// Serialized as `{"num": "<int>", "den": "<int>", "approx": <f64>}`. The
/// float is a convenience for plotting and is never read back.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn new(num: i64, den: i64) -> Self {
        Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(value: i64) -> Self {
        Exact(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero() -> Self {
        Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Exact(BigRational::one())
    }

    /// `num / den` for unsigned counts, as produced by graph statistics.
    pub fn ratio(num: usize, den: usize) -> Self {
        Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Exact) -> Exact {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Exact) -> Exact {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Exact {
    type Err = String;

    /// Accepts `a` or `a/b` with integer `a`, nonzero integer `b`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Exact(BigRational::new(num, den)))
    }
}

impl From<BigRational> for Exact {
    fn from(value: BigRational) -> Self {
        Exact(value)
    }
}

impl From<i64> for Exact {
    fn from(value: i64) -> Self {
        Exact::from_int(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                Exact(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Exact> for &'a Exact {
            type Output = Exact;
            fn $method(self, rhs: &'a Exact) -> Exact {
                Exact((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact(-self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct Encoded {
    num: String,
    den: String,
    #[serde(default, skip_deserializing)]
    approx: f64,
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Encoded {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
            approx: self.to_f64(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let enc = Encoded::deserialize(deserializer)?;
        let num: BigInt = enc.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = enc.den.parse().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Exact(BigRational::new(num, den)))
    }
}

/// Compares `a/b` with `c/d` for nonnegative integers and positive denominators.
pub fn cmp_fractions(a: u64, b: u64, c: u64, d: u64) -> Ordering {
    (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
}
