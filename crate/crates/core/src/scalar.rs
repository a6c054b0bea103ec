//! Scalar types used for evaluating L-polynomials, zeta values and Euler
//! sums.
//!
//! Identity checks run over [`Rational`](crate::Rational); asymptotic
//! comparisons use `f64`. Code that only needs field operations is written
//! once against [`Scalar`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync {
    /// `num / den`, rounded when the type is inexact.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(&BigInt::from(n), &BigInt::from(1))
    }

    fn to_real(&self) -> f64;

    /// `q^e` for any integer exponent.
    fn power_of(q: u32, e: i64) -> Self {
        let base = Self::from_int(q as i64);
        let p = num_traits::pow(base, e.unsigned_abs() as usize);
        if e < 0 {
            Self::one() / p
        } else {
            p
        }
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn to_real(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
                ToPrimitive::to_f64(&BigRational::new(num.clone(), den.clone()))
                    .unwrap_or(f64::NAN) as $t
            }

            fn from_int(n: i64) -> Self {
                n as $t
            }

            fn to_real(&self) -> f64 {
                *self as f64
            }

            fn power_of(q: u32, e: i64) -> Self {
                (q as $t).powi(e as i32)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// An exact rational as decimal numerator and denominator strings.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExactValue {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for ExactValue {
    fn from(r: &BigRational) -> Self {
        ExactValue {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl ExactValue {
    pub fn to_rational(&self) -> Option<BigRational> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den == BigInt::from(0) {
            return None;
        }
        Some(BigRational::new(num, den))
    }
}

pub fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Round to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}
