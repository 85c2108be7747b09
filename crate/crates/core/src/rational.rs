//! Arbitrary-precision rationals with a string wire format.
//!
//! [`Q`] wraps [`BigRational`] so that it can serialize as `"n/d"` (or `"n"`
//! for integers) instead of the digit-vector encoding that `num-rational`
//! uses. Every exact computation in this crate goes through this type.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(pub BigRational);

impl Q {
    /// `num/den`, normalized. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Q(BigRational::zero())
    }

    pub fn one() -> Self {
        Q(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Q {
        Q(self.0.abs())
    }

    pub fn recip(&self) -> Q {
        Q(self.0.recip())
    }

    pub fn half(&self) -> Q {
        self / &Q::int(2)
    }

    pub fn min(self, other: Q) -> Q {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Q) -> Q {
        std::cmp::max(self, other)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseQError(pub String);

impl FromStr for Q {
    type Err = ParseQError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseQError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Q(BigRational::new(n, d)))
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q::int(n)
    }
}

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Self {
        Q(r)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl schemars::JsonSchema for Q {
    fn schema_name() -> String {
        "Rational".to_string()
    }

    fn json_schema(_gen: &mut schemars::gen::SchemaGenerator) -> schemars::schema::Schema {
        use schemars::schema::{InstanceType, SchemaObject, StringValidation};
        SchemaObject {
            instance_type: Some(InstanceType::String.into()),
            string: Some(Box::new(StringValidation {
                pattern: Some(r"^-?[0-9]+(/[0-9]+)?$".to_string()),
                ..Default::default()
            })),
            ..Default::default()
        }
        .into()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Q> for &Q {
            type Output = Q;
            fn $method(self, rhs: &Q) -> Q {
                Q($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Q> for Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                Q($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Q> for Q {
            type Output = Q;
            fn $method(self, rhs: &Q) -> Q {
                Q($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Q> for &Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                Q($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-&self.0)
    }
}

/// Shorthand for `Q::new(num, den)`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(num, den)
}
