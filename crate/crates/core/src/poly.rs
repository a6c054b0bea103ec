//! Dense univariate polynomials over F_q.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A polynomial in F_q[T], coefficients lowest degree first.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector and its degree is `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
    field: FieldSpec,
}

impl Poly {
    pub fn zero(field: FieldSpec) -> Self {
        Poly {
            coeffs: Vec::new(),
            field,
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(field, FieldElement::ONE)
    }

    /// The indeterminate `T`.
    pub fn t(field: FieldSpec) -> Self {
        Self::from_elements(field, vec![FieldElement::ZERO, FieldElement::ONE])
    }

    pub fn constant(field: FieldSpec, c: FieldElement) -> Self {
        Self::from_elements(field, vec![c])
    }

    /// `T^n`.
    pub fn monomial(field: FieldSpec, n: usize) -> Self {
        let mut c = vec![FieldElement::ZERO; n + 1];
        c[n] = FieldElement::ONE;
        Self::from_elements(field, c)
    }

    /// Builds from integer coefficients (any sign), lowest degree first.
    pub fn from_coeffs(field: FieldSpec, coeffs: &[i64]) -> Self {
        Self::from_elements(field, coeffs.iter().map(|&c| field.element_i64(c)).collect())
    }

    pub fn from_elements(field: FieldSpec, coeffs: Vec<FieldElement>) -> Self {
        let mut p = Poly { coeffs, field };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// The monic polynomial of degree `n` whose lower coefficients are the
    /// base-q digits of `index`, least significant digit first.
    pub fn monic_from_index(field: FieldSpec, n: usize, mut index: u64) -> Self {
        let q = field.q() as u64;
        let mut c = Vec::with_capacity(n + 1);
        for _ in 0..n {
            c.push(FieldElement::from_reduced((index % q) as u32));
            index /= q;
        }
        c.push(FieldElement::ONE);
        Poly { coeffs: c, field }
    }

    /// Position of this polynomial's lower coefficients in base-q order.
    pub fn coefficient_index(&self) -> u64 {
        let q = self.field.q() as u64;
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n]
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * q + c.value() as u64)
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `T^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0. Only for callers that
    /// have already excluded zero.
    #[inline]
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElement::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    /// |f| = q^deg f, and 0 for the zero polynomial.
    pub fn norm(&self) -> BigUint {
        match self.degree() {
            None => BigUint::zero(),
            Some(d) => BigUint::from(self.field.q()).pow(d as u32),
        }
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field.q() != other.field.q() {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    fn assert_field(&self, other: &Poly) {
        assert!(
            self.field.q() == other.field.q(),
            "polynomials over different fields"
        );
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let f = self.field;
        Poly::from_elements(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn make_monic(&self) -> Poly {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Euclidean division, `self = quot * b + rem` with deg rem < deg b.
    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(b)?;
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let f = self.field;
        let inv_lead = f.inv(b.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[i - db] = c;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[i - db + j] = f.sub(rem[i - db + j], f.mul(c, bj));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_elements(f, quot), Poly::from_elements(f, rem)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(b)?.1)
    }

    /// Exact quotient; panics if `b` does not divide `self`.
    pub(crate) fn exact_div(&self, b: &Poly) -> Poly {
        let (quot, rem) = self.divrem(b).expect("nonzero divisor");
        debug_assert!(rem.is_zero(), "inexact division");
        quot
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, b: &Poly) -> Result<Poly> {
        self.check_field(b)?;
        let mut a = self.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.element(i as u64)))
            .collect();
        Poly::from_elements(f, c)
    }

    /// For `self` in F_q[T^q], the unique `h` with `h^q = self`.
    ///
    /// Uses that Frobenius is the identity on the prime field.
    pub fn qth_root(&self) -> Poly {
        let q = self.field.q() as usize;
        debug_assert!(self
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % q == 0 || c.is_zero()));
        Poly::from_elements(self.field, self.coeffs.iter().step_by(q).copied().collect())
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let base = self.rem(m)?;
        let mut acc = Poly::one(self.field).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem(m)?;
            if e.bit(i) {
                acc = (&acc * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a field element.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Parses the canonical text form, also accepting omitted coefficients
    /// (`T^2+4`), omitted zero terms and terms in any order.
    pub fn parse(field: FieldSpec, input: &str) -> Result<Poly> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        let mut coeffs: Vec<u64> = Vec::new();
        for term in s.split('+') {
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, power) = match term.find('T') {
                None => (term, 0usize),
                Some(pos) => {
                    let coef = match &term[..pos] {
                        "" => "1",
                        c => c.strip_suffix('*').ok_or_else(|| err("expected '*' before T"))?,
                    };
                    let power = match &term[pos + 1..] {
                        "" => 1,
                        p => p
                            .strip_prefix('^')
                            .ok_or_else(|| err("expected '^' after T"))?
                            .parse()
                            .map_err(|_| err("bad exponent"))?,
                    };
                    (coef, power)
                }
            };
            let c: u64 = coef.parse().map_err(|_| err("bad coefficient"))?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = (coeffs[power] + c % field.q() as u64) % field.q() as u64;
        }
        Ok(Poly::from_elements(
            field,
            coeffs.into_iter().map(|c| field.element(c)).collect(),
        ))
    }
}

/// Canonical text form: every coefficient written out, `c0+c1*T+c2*T^2+...`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*T")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[q={}]({})", self.field.q(), self)
    }
}

/// Canonical ordering: by degree, then by base-q coefficient index.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| {
                self.coeffs
                    .iter()
                    .rev()
                    .map(|c| c.value())
                    .cmp(other.coeffs.iter().rev().map(|c| c.value()))
            })
            .then_with(|| self.field.q().cmp(&other.field.q()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_elements(
            f,
            (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_elements(
            f,
            (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let q = f.q() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a.value() as u64 * b.value() as u64) % q;
            }
        }
        Poly::from_elements(f, acc.into_iter().map(|c| f.element(c)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_elements(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(f5(), coeffs)
    }

    #[test]
    fn schoolbook_product() {
        // (T+1)(T+4) = T^2 + 5T + 4 = T^2 + 4 over F_5
        assert_eq!(&p(&[1, 1]) * &p(&[4, 1]), p(&[4, 0, 1]));
    }

    #[test]
    fn gcd_and_division() {
        assert_eq!(p(&[4, 0, 1]).gcd(&p(&[1, 1])).unwrap(), p(&[1, 1]));
        let (q, r) = p(&[0, 0, 0, 1]).divrem(&p(&[0, 1])).unwrap();
        assert_eq!(q, p(&[0, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[1, 1]).divrem(&Poly::zero(f5())), Err(Error::DivisionByZero));
        // gcd is monic
        assert_eq!(p(&[2, 2]).gcd(&p(&[3, 3])).unwrap(), p(&[1, 1]));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = Poly::t(FieldSpec::new(7).unwrap());
        assert_eq!(a.gcd(&Poly::t(f5())), Err(Error::FieldMismatch(7, 5)));
    }

    #[test]
    fn norms() {
        assert_eq!(p(&[1, 0, 1]).norm(), BigUint::from(25u32));
        assert_eq!(p(&[3]).norm(), BigUint::from(1u32));
        assert_eq!(Poly::zero(f5()).norm(), BigUint::zero());
        assert_eq!(Poly::zero(f5()).degree(), None);
    }

    #[test]
    fn derivatives() {
        assert!(Poly::monomial(f5(), 5).derivative().is_zero());
        assert_eq!(p(&[0, 1, 1]).derivative(), p(&[1, 2]));
        assert!(p(&[3]).derivative().is_zero());
    }

    #[test]
    fn text_form() {
        let f = p(&[4, 0, 1]);
        assert_eq!(f.to_string(), "4+0*T+1*T^2");
        assert_eq!(Poly::parse(f5(), "4+0*T+1*T^2").unwrap(), f);
        assert_eq!(Poly::parse(f5(), "T^2 + 4").unwrap(), f);
        assert_eq!(Poly::parse(f5(), "9+T").unwrap(), p(&[4, 1]));
        assert_eq!(Poly::zero(f5()).to_string(), "0");
        assert!(Poly::parse(f5(), "0").unwrap().is_zero());
        assert!(Poly::parse(f5(), "2T").is_err());
        assert!(Poly::parse(f5(), "x+1").is_err());
        assert!(Poly::parse(f5(), "").is_err());
    }

    #[test]
    fn monic_index_round_trip() {
        let f = f5();
        for k in 0..125 {
            let m = Poly::monic_from_index(f, 3, k);
            assert!(m.is_monic());
            assert_eq!(m.deg(), 3);
            assert_eq!(m.coefficient_index(), k);
        }
        assert!(Poly::monic_from_index(f, 0, 0).is_one());
    }

    #[test]
    fn pow_mod_matches_repeated_product() {
        let m = p(&[2, 0, 1, 1]);
        let a = p(&[1, 3]);
        let e = 13u32;
        let direct = a.pow(e).rem(&m).unwrap();
        assert_eq!(a.pow_mod(&BigUint::from(e), &m).unwrap(), direct);
    }

    #[test]
    fn qth_root_inverts_frobenius() {
        let h = p(&[2, 1, 3]);
        assert_eq!(h.pow(5).qth_root(), h);
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![p(&[0, 0, 1]), p(&[1, 1]), p(&[0, 1]), p(&[4, 0, 1])];
        v.sort();
        assert_eq!(v, vec![p(&[0, 1]), p(&[1, 1]), p(&[0, 0, 1]), p(&[4, 0, 1])]);
    }
}
