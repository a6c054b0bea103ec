//! Exact arithmetic for quadratic Dirichlet L-functions over F_q(T) and the
//! orders of the K2 groups they determine.

pub mod asymptotics;
pub mod character;
pub mod enumerate;
pub mod error;
pub mod experiment;
pub mod factor;
pub mod field;
pub mod k2;
pub mod lfunction;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use poly::Poly;
pub use scalar::Scalar;

/// Arbitrary-precision rational used by every exact check.
pub type Rational = num_rational::BigRational;
/// Floating scalar used for asymptotic comparisons.
pub type Real = f64;
