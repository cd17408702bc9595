//! Exact rational probabilities.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// A probability held as a reduced fraction of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    /// `numerator / denominator`, reduced. Fails unless the value is in `[0, 1]`.
    pub fn new(numerator: impl Into<BigUint>, denominator: impl Into<BigUint>) -> Result<Self> {
        let den: BigUint = denominator.into();
        if den.is_zero() {
            return Err(domain("probability with zero denominator"));
        }
        let num: BigUint = numerator.into();
        if num > den {
            return Err(domain(format!("{num}/{den} exceeds one")));
        }
        Ok(ExactProb(BigRational::new(
            BigInt::from_biguint(Sign::Plus, num),
            BigInt::from_biguint(Sign::Plus, den),
        )))
    }

    /// `1 / denominator`.
    pub fn reciprocal(denominator: impl Into<BigUint>) -> Result<Self> {
        Self::new(1u32, denominator)
    }

    pub(crate) fn from_rational(value: BigRational) -> Result<Self> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(Error::Internal(format!("{value} is not a probability")));
        }
        Ok(ExactProb(value))
    }

    pub fn numerator(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denominator(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Approximate decimal value, for display only.
    pub fn approx(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactProb {
    type Err = Error;

    /// Parses `a/b` or a bare integer (`0` or `1`).
    fn from_str(s: &str) -> Result<Self> {
        let parse = |part: &str| {
            part.trim()
                .parse::<BigUint>()
                .map_err(|_| domain(format!("not a probability: {s:?}")))
        };
        match s.split_once('/') {
            Some((num, den)) => ExactProb::new(parse(num)?, parse(den)?),
            None => ExactProb::new(parse(s)?, 1u32),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
}

impl Serialize for ExactProb {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            num: self.numerator().to_string(),
            den: self.denominator().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactProb {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        let num: BigUint = wire.num.parse().map_err(D::Error::custom)?;
        let den: BigUint = wire.den.parse().map_err(D::Error::custom)?;
        ExactProb::new(num, den).map_err(D::Error::custom)
    }
}
