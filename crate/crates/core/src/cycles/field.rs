use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coefficient field for cycle spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("invalid field {0:?}: expected Q or F<p> with p prime")]
pub struct FieldError(pub String);

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError(format!("F{p}")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" || t == "q" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t.strip_prefix('F').or_else(|| t.strip_prefix('f')).ok_or_else(|| FieldError(t.into()))?;
        let p: u64 = digits.parse().map_err(|_| FieldError(t.into()))?;
        FieldSpec::prime(p).map_err(|_| FieldError(t.into()))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
