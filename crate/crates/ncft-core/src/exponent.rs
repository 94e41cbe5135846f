use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{NcftError, Result};

/// A Lebesgue/Schatten exponent in [1, ∞], with ∞ represented exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);
    pub const INF: Exponent = Exponent::Infinity;

    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(NcftError::InvalidExponent(format!("{p}")));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Conjugate exponent: 1 ↦ ∞, ∞ ↦ 1, otherwise p/(p−1).
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if *p <= 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    /// Exponent r with 1/lo = 1/hi + 1/r, for lo < hi. Returns ∞ when lo = hi.
    pub fn holder_complement(lo: Exponent, hi: Exponent) -> Exponent {
        match (lo, hi) {
            (Exponent::Finite(p), Exponent::Infinity) => Exponent::Finite(p),
            (Exponent::Finite(p), Exponent::Finite(q)) => {
                if (q - p).abs() < 1e-14 {
                    Exponent::Infinity
                } else {
                    Exponent::Finite(p * q / (q - p))
                }
            }
            (Exponent::Infinity, _) => Exponent::Infinity,
        }
    }

    pub fn approx_eq(&self, other: &Exponent) -> bool {
        match (self, other) {
            (Exponent::Infinity, Exponent::Infinity) => true,
            (Exponent::Finite(a), Exponent::Finite(b)) => (a - b).abs() < 1e-12,
            _ => false,
        }
    }

    /// ℓ^p norm of a slice of nonnegative reals under uniform weights `w`.
    pub fn weighted_sum_norm(&self, terms: &[(f64, f64)]) -> f64 {
        match self {
            Exponent::Infinity => terms.iter().map(|(_, v)| *v).fold(0.0, f64::max),
            Exponent::Finite(p) => terms
                .iter()
                .map(|(w, v)| w * v.powf(*p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }

    pub fn parse(s: &str) -> Result<Exponent> {
        match s {
            "inf" | "Inf" | "infinity" | "oo" => Ok(Exponent::Infinity),
            _ => {
                // allow simple fractions like 4/3
                if let Some((num, den)) = s.split_once('/') {
                    let n: f64 = num
                        .trim()
                        .parse()
                        .map_err(|_| NcftError::InvalidExponent(s.into()))?;
                    let d: f64 = den
                        .trim()
                        .parse()
                        .map_err(|_| NcftError::InvalidExponent(s.into()))?;
                    Exponent::new(n / d)
                } else {
                    let p: f64 = s
                        .trim()
                        .parse()
                        .map_err(|_| NcftError::InvalidExponent(s.into()))?;
                    Exponent::new(p)
                }
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p).map_err(D::Error::custom),
            Raw::Str(s) => Exponent::parse(&s).map_err(D::Error::custom),
        }
    }
}
