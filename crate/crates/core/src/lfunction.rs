//! L-polynomials of quadratic characters, their completion at the trivial
//! zero `u = -1`, and exact evaluation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::asymptotics::zeta_a;
use crate::character::{character_sums, raw, sigma_vector, Discriminant, SymbolEngine};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LKind {
    /// `sum sigma_n u^n` for `n < deg D`.
    Raw,
    /// The raw polynomial divided by `1 + u` (twisted, even degree only).
    Completed,
}

impl LKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LKind::Raw => "raw",
            LKind::Completed => "completed",
        }
    }
}

/// Integer coefficients of an L-polynomial in `u = q^-s`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    coeffs: Vec<i64>,
    kind: LKind,
    source: Discriminant,
}

/// The raw L-polynomial, every coefficient computed by enumeration.
pub fn l_polynomial(disc: &Discriminant) -> LPolynomial {
    LPolynomial {
        coeffs: sigma_vector(disc).values,
        kind: LKind::Raw,
        source: disc.clone(),
    }
}

impl LPolynomial {
    /// Wraps precomputed coefficients without checking them. Used to feed
    /// the identity checks with data from elsewhere (or deliberately wrong).
    pub fn from_coeffs(source: Discriminant, coeffs: Vec<i64>, kind: LKind) -> Self {
        LPolynomial {
            coeffs,
            kind,
            source,
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn kind(&self) -> LKind {
        self.kind
    }

    pub fn source(&self) -> &Discriminant {
        &self.source
    }

    pub fn q(&self) -> u32 {
        self.source.field().q()
    }

    /// `g` with `deg D = 2g + 2` for a twisted even-degree source.
    fn twisted_genus(&self) -> Result<usize> {
        let n = self.source.degree();
        if !self.source.is_twisted() || n % 2 == 1 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "completion needs a twisted discriminant of positive even degree, got {} (twisted = {})",
                self.source.poly(),
                self.source.is_twisted()
            )));
        }
        Ok(n / 2 - 1)
    }

    /// Divides out the trivial factor `1 + u`.
    ///
    /// The quotient is computed twice, by long division from the top and by
    /// the alternating partial sums `sum_{i<=n} (-1)^(n-i) sigma_i`; a nonzero
    /// remainder or any disagreement is an internal error.
    pub fn complete(&self) -> Result<LPolynomial> {
        if self.kind != LKind::Raw {
            return Err(Error::InvalidArgument("already completed".into()));
        }
        let g = self.twisted_genus()?;
        let c = &self.coeffs;
        if c.len() != 2 * g + 2 {
            return Err(Error::Inconsistent(format!(
                "raw L-polynomial of {} has {} coefficients, expected {}",
                self.source.poly(),
                c.len(),
                2 * g + 2
            )));
        }
        let top = 2 * g;
        let mut by_division = vec![0i64; top + 1];
        by_division[top] = c[top + 1];
        for k in (1..=top).rev() {
            by_division[k - 1] = c[k] - by_division[k];
        }
        let remainder = c[0] - by_division[0];
        if remainder != 0 {
            return Err(Error::Inconsistent(format!(
                "1 + u does not divide the L-polynomial of gamma*({}): remainder {remainder}",
                self.source.poly()
            )));
        }
        let by_sums: Vec<i64> = (0..=top)
            .map(|n| {
                (0..=n)
                    .map(|i| if (n - i) % 2 == 0 { c[i] } else { -c[i] })
                    .sum()
            })
            .collect();
        if by_sums != by_division {
            return Err(Error::Inconsistent(format!(
                "completed coefficients disagree: {by_division:?} by division, {by_sums:?} by alternating sums"
            )));
        }
        Ok(LPolynomial {
            coeffs: by_division,
            kind: LKind::Completed,
            source: self.source.clone(),
        })
    }

    /// Horner evaluation at `u`.
    pub fn eval<S: Scalar>(&self, u: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, &c| acc * u.clone() + S::from_int(c))
    }

    /// Value at `u = q^-s`.
    pub fn eval_at_power<S: Scalar>(&self, s: i64) -> S {
        self.eval(&S::power_of(self.q(), -s))
    }

    /// `L(2, chi)`, the value at `u = q^-2`, exactly.
    pub fn value_at_two(&self) -> Rational {
        self.eval_at_power(2)
    }

    /// For a completed polynomial of degree `2g`: whether
    /// `sigma*_m = q^(m-g) sigma*_(2g-m)` for every `m`.
    pub fn functional_equation_check(&self) -> Result<bool> {
        if self.kind != LKind::Completed {
            return Err(Error::InvalidArgument(
                "functional equation applies to completed L-polynomials".into(),
            ));
        }
        let c = &self.coeffs;
        if c.len() % 2 == 0 {
            return Ok(false);
        }
        let g = (c.len() - 1) / 2;
        let q = BigInt::from(self.q());
        let qg = q.pow(g as u32);
        Ok((0..c.len()).all(|m| {
            BigInt::from(c[m]) * &qg == BigInt::from(c[2 * g - m]) * q.pow(m as u32)
        }))
    }
}

impl Serialize for LPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LPolynomial", 5)?;
        st.serialize_field("q", &self.q())?;
        st.serialize_field("D", &self.source.poly().to_string())?;
        st.serialize_field("twisted", &self.source.is_twisted())?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.serialize_field("kind", self.kind.as_str())?;
        st.end()
    }
}

/// Requires `D` monic square-free of positive even degree; returns `g` with
/// `deg D = 2g + 2`.
fn even_genus(d: &Discriminant) -> Result<usize> {
    let n = d.degree();
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "{} must have positive even degree",
            d.poly()
        )));
    }
    Ok(n / 2 - 1)
}

/// The twisted value `L(q^-2, chi_{gamma D})` written through the UNTWISTED
/// character of `D`:
///
/// `sum_{f monic, deg f <= 2g} (-1)^deg f chi_D(f) / |f|^2
///   + q^(-4g-2) sum_{f monic, deg f <= 2g} chi_D(f)`.
pub fn twisted_value_via_untwisted_sums(d: &Discriminant) -> Result<Rational> {
    let g = even_genus(d)?;
    let field = d.field();
    let q = field.q();
    let mut engine = SymbolEngine::new(field);
    let per_degree = character_sums(&mut engine, &raw(d.poly()), q, 2 * g + 1);
    let mut weighted = Rational::zero();
    let mut plain = BigInt::zero();
    for (n, &s) in per_degree.iter().enumerate() {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        weighted += Rational::from_int(sign * s) * Rational::power_of(q, -2 * n as i64);
        plain += s;
    }
    Ok(weighted + Rational::from_integer(plain) * Rational::power_of(q, -(4 * g as i64) - 2))
}

/// For monic `D` of even degree, whether `L(1, chi_D) = sum sigma_n(D) = 0`.
pub fn untwisted_unit_zero_check(d: &Discriminant) -> Result<bool> {
    even_genus(d)?;
    if d.is_twisted() {
        return Err(Error::InvalidArgument(
            "unit zero check applies to the untwisted character".into(),
        ));
    }
    Ok(l_polynomial(d).eval(&Rational::one()).is_zero())
}

/// `zeta_A(s) L(s, chi_D)`, the zeta function of the integral closure.
pub fn zeta_o_eval(d: &Discriminant, s: i64) -> Result<Rational> {
    let z: Rational = zeta_a(s, d.field())?;
    Ok(z * l_polynomial(d).eval_at_power::<Rational>(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::squarefree_monic;
    use crate::{FieldSpec, Poly};

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(f5(), coeffs)
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn raw_polynomial_examples() {
        let d = Discriminant::untwisted(p(&[0, 1])).unwrap();
        assert_eq!(l_polynomial(&d).coeffs(), &[1]);
        let d = Discriminant::untwisted(p(&[0, 1, 1])).unwrap();
        assert_eq!(l_polynomial(&d).coeffs(), &[1, -1]);
        assert_eq!(l_polynomial(&d.with_twist(true)).coeffs(), &[1, 1]);
    }

    #[test]
    fn completion_examples() {
        let d = Discriminant::twisted(p(&[0, 1, 1])).unwrap();
        let c = l_polynomial(&d).complete().unwrap();
        assert_eq!(c.coeffs(), &[1]);
        assert_eq!(c.kind(), LKind::Completed);
        // untwisted and odd-degree sources are rejected
        assert!(l_polynomial(&d.with_twist(false)).complete().is_err());
        let odd = Discriminant::twisted(p(&[0, 1])).unwrap();
        assert!(l_polynomial(&odd).complete().is_err());
        assert!(c.complete().is_err());
    }

    #[test]
    fn tampered_coefficients_fail_completion() {
        let d = Discriminant::twisted(p(&[0, 1, 1])).unwrap();
        let bad = LPolynomial::from_coeffs(d, vec![1, 2], LKind::Raw);
        assert!(matches!(bad.complete(), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn every_quartic_completes_to_degree_two() {
        for d in squarefree_monic(f5(), 4) {
            let disc = Discriminant::twisted(d).unwrap();
            let c = l_polynomial(&disc).complete().unwrap();
            assert_eq!(c.coeffs().len(), 3);
            assert_eq!(c.coeffs()[0], 1);
            assert!(c.functional_equation_check().unwrap());
        }
    }

    #[test]
    fn evaluation() {
        let d = Discriminant::twisted(p(&[0, 1, 1])).unwrap();
        let l = LPolynomial::from_coeffs(d.clone(), vec![1, 1], LKind::Raw);
        assert_eq!(l.eval(&r(1, 25)), r(26, 25));
        assert_eq!(l.eval(&r(-1, 1)), r(0, 1));
        let one = LPolynomial::from_coeffs(d, vec![1], LKind::Raw);
        assert_eq!(one.eval(&r(7, 3)), r(1, 1));
        assert!((l.eval(&0.04f64) - 1.04).abs() < 1e-15);
    }

    #[test]
    fn untwisted_sum_form_examples() {
        let d = Discriminant::untwisted(p(&[0, 1, 1])).unwrap();
        assert_eq!(twisted_value_via_untwisted_sums(&d).unwrap(), r(26, 25));
        assert_eq!(
            l_polynomial(&d.with_twist(true)).value_at_two(),
            twisted_value_via_untwisted_sums(&d).unwrap()
        );
        assert!(untwisted_unit_zero_check(&d).unwrap());
        assert!(untwisted_unit_zero_check(&Discriminant::untwisted(p(&[0, 1])).unwrap()).is_err());
    }

    #[test]
    fn zeta_of_integral_closure() {
        let d = Discriminant::untwisted(p(&[0, 1])).unwrap();
        assert_eq!(zeta_o_eval(&d, 2).unwrap(), r(5, 4));
        let dt = Discriminant::twisted(p(&[0, 1, 1])).unwrap();
        assert_eq!(zeta_o_eval(&dt, 2).unwrap(), r(13, 10));
        assert_eq!(zeta_o_eval(&d, 1), Err(Error::Pole(1)));
    }

    #[test]
    fn functional_equation_examples() {
        let d = Discriminant::twisted(p(&[0, 1, 1])).unwrap();
        let trivial = LPolynomial::from_coeffs(d.clone(), vec![1], LKind::Completed);
        assert!(trivial.functional_equation_check().unwrap());
        let fake = LPolynomial::from_coeffs(d.clone(), vec![1, 0, 7], LKind::Completed);
        assert!(!fake.functional_equation_check().unwrap());
        let good = LPolynomial::from_coeffs(d, vec![1, 3, 5], LKind::Completed);
        assert!(good.functional_equation_check().unwrap());
    }

    #[test]
    fn json_shape() {
        let d = Discriminant::twisted(p(&[0, 1, 1])).unwrap();
        let v = serde_json::to_value(l_polynomial(&d)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"q": 5, "D": "0+1*T+1*T^2", "twisted": true, "coeffs": [1, 1], "kind": "raw"})
        );
    }
}
