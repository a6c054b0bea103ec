//! Deterministic enumeration of monic polynomials, square-free monic
//! polynomials and monic irreducibles.
//!
//! Monic polynomials of degree `n` are indexed by the base-q number formed
//! from their lower coefficients (constant term least significant), and
//! streams always run in increasing index order. Ranges of indices can be
//! handed to independent workers.

use std::ops::Range;

use crate::factor::{is_irreducible, is_squarefree};
use crate::field::FieldSpec;
use crate::poly::Poly;

/// `q^n`, the number of monic polynomials of degree `n`.
pub fn monic_count(q: u32, n: usize) -> u64 {
    (q as u64).pow(n as u32)
}

/// `#H_n`: `q^n - q^(n-1)` for `n >= 2`, `q^n` otherwise.
pub fn squarefree_count(q: u32, n: usize) -> u64 {
    if n < 2 {
        monic_count(q, n)
    } else {
        monic_count(q, n) - monic_count(q, n - 1)
    }
}

/// Number of monic irreducibles of degree `n`: `(1/n) sum_{d|n} mu(d) q^(n/d)`.
pub fn irreducible_count(q: u32, n: usize) -> u128 {
    assert!(n >= 1);
    let mut total: i128 = 0;
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mu = integer_mobius(d);
        if mu != 0 {
            total += mu as i128 * (q as i128).pow((n / d) as u32);
        }
    }
    (total / n as i128) as u128
}

pub(crate) fn integer_mobius(mut n: usize) -> i8 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Iterator over monic polynomials of one degree, over an index range.
#[derive(Clone, Debug)]
pub struct MonicPolys {
    field: FieldSpec,
    degree: usize,
    range: Range<u64>,
}

impl Iterator for MonicPolys {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let k = self.range.next()?;
        Some(Poly::monic_from_index(self.field, self.degree, k))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.range.size_hint()
    }
}

impl ExactSizeIterator for MonicPolys {}

/// All `q^n` monic polynomials of degree `n`.
pub fn monic(field: FieldSpec, n: usize) -> MonicPolys {
    monic_range(field, n, 0..monic_count(field.q(), n))
}

/// Monic polynomials of degree `n` whose index lies in `range`.
pub fn monic_range(field: FieldSpec, n: usize, range: Range<u64>) -> MonicPolys {
    let end = range.end.min(monic_count(field.q(), n));
    MonicPolys {
        field,
        degree: n,
        range: range.start.min(end)..end,
    }
}

/// Monic polynomials of every degree `0..=max_degree`, by degree then index.
pub fn monic_up_to(field: FieldSpec, max_degree: usize) -> impl Iterator<Item = Poly> {
    (0..=max_degree).flat_map(move |n| monic(field, n))
}

/// `H_n`: monic square-free polynomials of degree `n`.
pub fn squarefree_monic(field: FieldSpec, n: usize) -> impl Iterator<Item = Poly> {
    squarefree_monic_range(field, n, 0..monic_count(field.q(), n))
}

pub fn squarefree_monic_range(
    field: FieldSpec,
    n: usize,
    range: Range<u64>,
) -> impl Iterator<Item = Poly> {
    monic_range(field, n, range).filter(|f| is_squarefree(f).expect("monic is nonzero"))
}

/// Monic irreducibles of degree `n`, in index order.
pub fn irreducibles(field: FieldSpec, n: usize) -> impl Iterator<Item = Poly> {
    monic(field, n).filter(is_irreducible)
}

/// Splits `0..total` into `parts` contiguous ranges of nearly equal size.
pub fn split_range(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = parts.max(1) as u64;
    (0..parts)
        .map(|i| (total * i / parts)..(total * (i + 1) / parts))
        .filter(|r| !r.is_empty())
        .collect()
}
