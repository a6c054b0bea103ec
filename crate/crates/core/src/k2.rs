//! Orders of `K_2(O_m)` from `L(2, chi_m)`.
//!
//! For odd `M = deg m`: `#K_2 = q^(3(M-1)/2) L(2, chi_m)`.
//! For `m = gamma D` with `D` of even degree `2g + 2`:
//! `#K_2 = q^(3g+2) (q+1) / (q^2+1) L(2, chi_{gamma D})`.
//! Only integer powers of `q` are ever formed.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::character::Discriminant;
use crate::error::{Error, Result};
use crate::lfunction::{l_polynomial, LPolynomial};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum K2Parity {
    Odd,
    EvenTwisted,
}

/// A group order: a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K2Size {
    #[serde(serialize_with = "crate::scalar::serialize_bigint")]
    pub value: BigInt,
    pub m_degree: usize,
    pub parity: K2Parity,
}

/// The rational factor multiplying `L(2, chi)` for a discriminant.
pub fn k2_scale(disc: &Discriminant) -> Result<Rational> {
    let q = disc.field().q();
    let m = disc.degree();
    if m % 2 == 1 {
        if disc.is_twisted() {
            return Err(Error::InvalidArgument(format!(
                "odd-degree {} is only used untwisted",
                disc.poly()
            )));
        }
        return Ok(Rational::power_of(q, 3 * (m as i64 - 1) / 2));
    }
    if !disc.is_twisted() || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "even-degree {} needs the twisted character and positive degree",
            disc.poly()
        )));
    }
    let g = (m / 2 - 1) as i64;
    let q_big = BigInt::from(q);
    Ok(Rational::power_of(q, 3 * g + 2)
        * Rational::new(&q_big + 1u32, &q_big * &q_big + 1u32))
}

/// `#K_2` from an already computed raw L-polynomial.
pub fn k2_size_from_l(l: &LPolynomial) -> Result<K2Size> {
    let disc = l.source();
    let exact = k2_scale(disc)? * l.value_at_two();
    let parity = if disc.degree() % 2 == 1 {
        K2Parity::Odd
    } else {
        K2Parity::EvenTwisted
    };
    if !exact.is_integer() || !exact.is_positive() {
        return Err(Error::Inconsistent(format!(
            "K2 order of {} (twisted = {}) came out as {exact}, L-coefficients {:?}",
            disc.poly(),
            disc.is_twisted(),
            l.coeffs()
        )));
    }
    Ok(K2Size {
        value: exact.to_integer(),
        m_degree: disc.degree(),
        parity,
    })
}

/// `#K_2(O_m)` for monic square-free `m` of odd degree.
pub fn k2_size_odd(m: &Poly) -> Result<K2Size> {
    let disc = Discriminant::untwisted(m.clone())?;
    if disc.degree() % 2 == 0 {
        return Err(Error::InvalidArgument(format!("{m} has even degree")));
    }
    k2_size_from_l(&l_polynomial(&disc))
}

/// `#K_2(O_{gamma D})` for `D` in `H_{2g+2}`, with `gamma` taken from the
/// polynomial's field.
pub fn k2_size_even_twisted(d: &Poly) -> Result<K2Size> {
    let disc = Discriminant::twisted(d.clone())?;
    if disc.degree() % 2 == 1 || disc.degree() == 0 {
        return Err(Error::InvalidArgument(format!(
            "{d} must have positive even degree"
        )));
    }
    k2_size_from_l(&l_polynomial(&disc))
}

/// `log_q(#K_2) - 3 deg(m) / 2`.
pub fn k2_log_excess(size: &K2Size, q: u32) -> f64 {
    let v = Rational::from_integer(size.value.clone()).to_real();
    v.ln() / (q as f64).ln() - 1.5 * size.m_degree as f64
}

/// Convenience for code that only needs the number.
pub fn k2_value(size: &K2Size) -> Rational {
    Rational::from_integer(size.value.clone())
}

impl K2Size {
    pub fn is_trivial(&self) -> bool {
        self.value.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::squarefree_monic;
    use crate::field::FieldSpec;

    fn field(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn linear_modulus_is_trivial() {
        for q in [5, 7] {
            let k = k2_size_odd(&Poly::t(field(q))).unwrap();
            assert!(k.is_trivial());
            assert_eq!(k.parity, K2Parity::Odd);
        }
    }

    #[test]
    fn quadratic_collapse() {
        for q in [5u64, 7, 11] {
            for d in squarefree_monic(field(q), 2) {
                let k = k2_size_even_twisted(&d).unwrap();
                assert_eq!(k.value, BigInt::from(q + 1), "q={q} D={d}");
            }
        }
    }

    #[test]
    fn integral_on_small_grid() {
        let f = field(5);
        for d in squarefree_monic(f, 3) {
            let k = k2_size_odd(&d).unwrap();
            assert!(k.value.is_positive());
            assert!(k2_log_excess(&k, 5).abs() < 3.0);
        }
        for d in squarefree_monic(f, 4) {
            k2_size_even_twisted(&d).unwrap();
        }
    }

    #[test]
    fn generator_choice_does_not_matter() {
        let a = FieldSpec::new(5).unwrap().with_gamma(2).unwrap();
        let b = FieldSpec::new(5).unwrap().with_gamma(3).unwrap();
        for n in [2, 4] {
            for d in squarefree_monic(a, n) {
                let other = Poly::from_elements(b, d.coeffs().to_vec());
                assert_eq!(
                    k2_size_even_twisted(&d).unwrap(),
                    k2_size_even_twisted(&other).unwrap()
                );
            }
        }
    }

    #[test]
    fn wrong_parity_rejected() {
        let f = field(5);
        assert!(k2_size_odd(&Poly::from_coeffs(f, &[0, 1, 1])).is_err());
        assert!(k2_size_even_twisted(&Poly::t(f)).is_err());
        assert!(k2_size_odd(&Poly::from_coeffs(f, &[0, 0, 0, 1])).is_err());
        let tampered = LPolynomial::from_coeffs(
            Discriminant::twisted(Poly::from_coeffs(f, &[1, 0, 0, 0, 1])).unwrap(),
            vec![1, 0, 0, 1],
            crate::lfunction::LKind::Raw,
        );
        assert!(matches!(k2_size_from_l(&tampered), Err(Error::Inconsistent(_))));
    }
}
