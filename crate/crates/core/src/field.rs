//! The prime field F_q and its canonical multiplicative generator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue in `[0, q)`. Arithmetic goes through the owning [`FieldSpec`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    /// Wraps a value already known to lie in `[0, q)`.
    #[inline]
    pub(crate) fn from_reduced(v: u32) -> Self {
        FieldElement(v)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An odd prime field F_q with q > 3, together with a fixed generator
/// `gamma` of its multiplicative group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    q: u32,
    gamma: FieldElement,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// Builds F_q with the smallest generator of F_q^* as `gamma`.
    pub fn new(q: u64) -> Result<Self> {
        if q <= 3 {
            return Err(Error::FieldTooSmall(q));
        }
        if q % 2 == 0 {
            return Err(Error::FieldEven(q));
        }
        if !is_prime(q) || q > u32::MAX as u64 {
            return Err(Error::FieldNotPrime(q));
        }
        let mut field = FieldSpec {
            q: q as u32,
            gamma: FieldElement::ONE,
        };
        let gamma = (2..q)
            .map(|v| field.element(v))
            .find(|&g| field.is_generator(g))
            .expect("F_q^* is cyclic");
        field.gamma = gamma;
        Ok(field)
    }

    /// Replaces the generator. Fails unless `value` has order exactly q-1.
    pub fn with_gamma(self, value: u64) -> Result<Self> {
        let g = self.element(value);
        if (value % self.q as u64) == 0 || !self.is_generator(g) {
            return Err(Error::NotAGenerator { value, q: self.q });
        }
        Ok(FieldSpec { gamma: g, ..self })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn gamma(&self) -> FieldElement {
        self.gamma
    }

    /// All generators of F_q^*, ascending.
    pub fn generators(&self) -> Vec<FieldElement> {
        (1..self.q as u64)
            .map(|v| self.element(v))
            .filter(|&g| self.is_generator(g))
            .collect()
    }

    pub fn is_generator(&self, a: FieldElement) -> bool {
        if a.is_zero() {
            return false;
        }
        let order = self.q as u64 - 1;
        prime_divisors(order)
            .into_iter()
            .all(|p| self.pow(a, order / p) != FieldElement::ONE)
    }

    #[inline]
    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement((v % self.q as u64) as u32)
    }

    #[inline]
    pub fn element_i64(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.q as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 as u64 + b.0 as u64;
        FieldElement((s % self.q as u64) as u32)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 as u64 + self.q as u64 - b.0 as u64;
        FieldElement((s % self.q as u64) as u32)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.q - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(((a.0 as u64 * b.0 as u64) % self.q as u64) as u32)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.q as u64 - 2))
        }
    }

    /// Quadratic character of a constant: 0, 1 or -1.
    pub fn legendre(&self, a: FieldElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.pow(a, (self.q as u64 - 1) / 2) == FieldElement::ONE {
            1
        } else {
            -1
        }
    }

    /// `legendre` for every residue, indexed by value.
    pub fn legendre_table(&self) -> Vec<i8> {
        (0..self.q as u64)
            .map(|v| self.legendre(self.element(v)))
            .collect()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (gamma = {})", self.q, self.gamma)
    }
}
