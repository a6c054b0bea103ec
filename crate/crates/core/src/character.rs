//! Quadratic residue symbols in F_q[T], the characters chi_D and chi_{gamma D},
//! and their coefficient sums over monic polynomials.

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{monic_count, monic_up_to, squarefree_monic};
use crate::error::{Error, Result};
use crate::factor::{factor, is_irreducible, is_perfect_square, is_squarefree};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::Poly;

/// A monic square-free `D`, optionally twisted by the field's generator so
/// that the character is that of `gamma * D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discriminant {
    d: Poly,
    twisted: bool,
}

impl Discriminant {
    pub fn new(d: Poly, twisted: bool) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !d.is_monic() {
            return Err(Error::NotMonic(d.to_string()));
        }
        if !is_squarefree(&d)? {
            return Err(Error::NotSquarefree(d.to_string()));
        }
        Ok(Discriminant { d, twisted })
    }

    pub fn untwisted(d: Poly) -> Result<Self> {
        Self::new(d, false)
    }

    pub fn twisted(d: Poly) -> Result<Self> {
        Self::new(d, true)
    }

    /// Same `D` with the twist flag replaced; skips re-validation.
    pub fn with_twist(&self, twisted: bool) -> Self {
        Discriminant {
            d: self.d.clone(),
            twisted,
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.d
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn field(&self) -> FieldSpec {
        self.d.field()
    }

    pub fn degree(&self) -> usize {
        self.d.deg()
    }

    /// The polynomial whose symbol defines the character: `D` or `gamma D`.
    pub fn effective(&self) -> Poly {
        if self.twisted {
            self.d.scale(self.d.field().gamma())
        } else {
            self.d.clone()
        }
    }
}

/// `a^((|P|-1)/2) mod P`, read as 0 or +-1.
pub fn residue_symbol(a: &Poly, p: &Poly) -> Result<i8> {
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_string()));
    }
    if !is_irreducible(p) {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    let a = a.rem(p)?;
    if a.is_zero() {
        return Ok(0);
    }
    let e = (p.norm() - 1u32) / 2u32;
    let r = a.pow_mod(&e, p)?;
    let field = p.field();
    if r.is_one() {
        Ok(1)
    } else if r == Poly::constant(field, field.neg(FieldElement::ONE)) {
        Ok(-1)
    } else {
        Err(Error::Inconsistent(format!(
            "Euler criterion gave {r} for ({a} / {p})"
        )))
    }
}

/// chi_D(f), the product of residue symbols over the factorization of `f`.
pub fn kronecker(disc: &Discriminant, f: &Poly) -> Result<i8> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let num = disc.effective();
    let mut out = 1i8;
    for (p, e) in factor(f)?.factors {
        let s = residue_symbol(&num, &p)?;
        if s == 0 {
            return Ok(0);
        }
        if e % 2 == 1 {
            out *= s;
        }
    }
    Ok(out)
}

/// chi_D(f) by the Euclidean algorithm and quadratic reciprocity, without
/// factoring anything.
pub fn kronecker_fast(disc: &Discriminant, f: &Poly) -> Result<i8> {
    jacobi(&disc.effective(), f)
}

/// The Jacobi symbol `(a / b)` for monic `b`; `a` may be any polynomial.
pub fn jacobi(a: &Poly, b: &Poly) -> Result<i8> {
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !b.is_monic() {
        return Err(Error::NotMonic(b.to_string()));
    }
    let mut engine = SymbolEngine::new(b.field());
    Ok(engine.symbol(&raw(a), &raw(b)))
}

pub(crate) fn raw(p: &Poly) -> Vec<u32> {
    p.coeffs().iter().map(|c| c.value()).collect()
}

/// Reusable scratch space for evaluating many Jacobi symbols over one field.
pub(crate) struct SymbolEngine {
    q: u64,
    /// `(q-1)/2` is odd, i.e. q = 3 mod 4.
    flip_on_odd_degrees: bool,
    legendre: Vec<i8>,
    inverse: Vec<u32>,
    a: Vec<u32>,
    b: Vec<u32>,
}

impl SymbolEngine {
    pub(crate) fn new(field: FieldSpec) -> Self {
        let q = field.q();
        SymbolEngine {
            q: q as u64,
            flip_on_odd_degrees: (q - 1) / 2 % 2 == 1,
            legendre: field.legendre_table(),
            inverse: (0..q)
                .map(|v| field.inv(field.element(v as u64)).map_or(0, |x| x.value()))
                .collect(),
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    /// `x <- x mod m` for monic `m`, trimming trailing zeros.
    fn reduce(q: u64, x: &mut Vec<u32>, m: &[u32]) {
        let dm = m.len() - 1;
        if x.len() > dm {
            for i in (dm..x.len()).rev() {
                let c = x[i] as u64;
                if c == 0 {
                    continue;
                }
                let base = i - dm;
                for (j, &mj) in m[..dm].iter().enumerate() {
                    let t = x[base + j] as u64 + q * q - c * mj as u64;
                    x[base + j] = (t % q) as u32;
                }
                x[i] = 0;
            }
            x.truncate(dm);
        }
        while x.last() == Some(&0) {
            x.pop();
        }
    }

    /// `(num / den)` with `den` monic and both without trailing zeros.
    pub(crate) fn symbol(&mut self, num: &[u32], den: &[u32]) -> i8 {
        let q = self.q;
        let mut a = std::mem::take(&mut self.a);
        let mut b = std::mem::take(&mut self.b);
        a.clear();
        a.extend_from_slice(num);
        b.clear();
        b.extend_from_slice(den);
        Self::reduce(q, &mut a, &b);
        let mut sign = 1i8;
        let result = loop {
            let db = b.len() - 1;
            if db == 0 {
                break sign;
            }
            if a.is_empty() {
                break 0;
            }
            let lead = *a.last().unwrap() as usize;
            if lead != 1 {
                // (c / b) = legendre(c)^deg b
                if db % 2 == 1 && self.legendre[lead] < 0 {
                    sign = -sign;
                }
                let inv = self.inverse[lead] as u64;
                for c in a.iter_mut() {
                    *c = (*c as u64 * inv % q) as u32;
                }
            }
            let da = a.len() - 1;
            if self.flip_on_odd_degrees && da % 2 == 1 && db % 2 == 1 {
                sign = -sign;
            }
            Self::reduce(q, &mut b, &a);
            std::mem::swap(&mut a, &mut b);
        };
        self.a = a;
        self.b = b;
        result
    }
}

/// Steps through monic coefficient vectors of one degree in index order.
pub(crate) struct MonicOdometer {
    q: u32,
    coeffs: Vec<u32>,
    started: bool,
}

impl MonicOdometer {
    pub(crate) fn new(q: u32, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = 1;
        MonicOdometer {
            q,
            coeffs,
            started: false,
        }
    }

    /// Advances and returns the next polynomial, `None` when exhausted.
    pub(crate) fn next_poly(&mut self) -> Option<&[u32]> {
        if !self.started {
            self.started = true;
            return Some(&self.coeffs);
        }
        let n = self.coeffs.len() - 1;
        for i in 0..n {
            self.coeffs[i] += 1;
            if self.coeffs[i] < self.q {
                return Some(&self.coeffs);
            }
            self.coeffs[i] = 0;
        }
        None
    }
}

/// `sigma_n` for each `n` in `0..count`, by enumerating every monic `f`.
pub(crate) fn character_sums(engine: &mut SymbolEngine, num: &[u32], q: u32, count: usize) -> Vec<i64> {
    (0..count)
        .map(|n| {
            let mut odo = MonicOdometer::new(q, n);
            let mut total = 0i64;
            while let Some(f) = odo.next_poly() {
                total += engine.symbol(num, f) as i64;
            }
            total
        })
        .collect()
}

/// The exact sums `sigma_n(D) = sum over monic f of degree n of chi_D(f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaVector {
    pub values: Vec<i64>,
}

impl SigmaVector {
    /// Checks `sigma_0 = 1` and `|sigma_n| <= q^n`.
    pub fn check_bounds(&self, q: u32) -> bool {
        self.values.first() == Some(&1)
            && self
                .values
                .iter()
                .enumerate()
                .all(|(n, v)| v.unsigned_abs() <= monic_count(q, n))
    }
}

/// `sigma_n(D)` by direct enumeration of the `q^n` monic `f` of degree `n`.
pub fn sigma(disc: &Discriminant, n: usize) -> i64 {
    let field = disc.field();
    let mut engine = SymbolEngine::new(field);
    let num = raw(&disc.effective());
    let mut odo = MonicOdometer::new(field.q(), n);
    let mut total = 0;
    while let Some(f) = odo.next_poly() {
        total += engine.symbol(&num, f) as i64;
    }
    total
}

/// `sigma_0 .. sigma_{deg D - 1}`.
pub fn sigma_vector(disc: &Discriminant) -> SigmaVector {
    let field = disc.field();
    let mut engine = SymbolEngine::new(field);
    SigmaVector {
        values: character_sums(&mut engine, &raw(&disc.effective()), field.q(), disc.degree()),
    }
}

/// Whether `sigma_n(gamma D) = (-1)^n sigma_n(D)` for even-degree `D`.
pub fn twist_relation_check(d: &Poly, n: usize) -> Result<bool> {
    let disc = Discriminant::untwisted(d.clone())?;
    if disc.degree() % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "{d} has odd degree; the twist relation needs even degree"
        )));
    }
    let plain = sigma(&disc, n);
    let twisted = sigma(&disc.with_twist(true), n);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Ok(twisted == sign * plain)
}

/// One non-square modulus `f` and its sum over all discriminants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharSumRow {
    pub f: String,
    pub degree: usize,
    /// `sum over D in H_{2g+2} of (D / f)`
    pub sum: i64,
    /// `|sum| / (q^(g+1) q^(deg f / 4))`
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharSumTable {
    pub q: u32,
    pub g: usize,
    pub max_f_degree: usize,
    pub rows: Vec<CharSumRow>,
    pub max_ratio: f64,
    /// Row achieving `max_ratio` (first in enumeration order on ties).
    pub argmax: Option<usize>,
}

/// `sum over D in ds of (D / f)` for each modulus `f`, exactly.
pub fn modulus_sums(field: FieldSpec, ds: &[Poly], moduli: &[Poly]) -> Vec<i64> {
    let q = field.q();
    let ds: Vec<Vec<u32>> = ds.iter().map(raw).collect();
    moduli
        .par_iter()
        .map(|f| {
            let fr = raw(f);
            let n = f.deg();
            // (D / f) only depends on D mod f.
            let mut engine = SymbolEngine::new(field);
            let mut table = Vec::with_capacity(monic_count(q, n) as usize);
            let mut residue = vec![0u32; n];
            for k in 0..monic_count(q, n) {
                let mut k2 = k;
                for c in residue.iter_mut() {
                    *c = (k2 % q as u64) as u32;
                    k2 /= q as u64;
                }
                let mut r = residue.clone();
                while r.last() == Some(&0) {
                    r.pop();
                }
                table.push(engine.symbol(&r, &fr));
            }
            let mut sum = 0i64;
            let mut buf = Vec::new();
            for d in &ds {
                buf.clear();
                buf.extend_from_slice(d);
                SymbolEngine::reduce(q as u64, &mut buf, &fr);
                let idx = buf.iter().rev().fold(0u64, |acc, &c| acc * q as u64 + c as u64);
                sum += table[idx as usize] as i64;
            }
            sum
        })
        .collect()
}

/// Exact sums of `(D / f)` over `D` in `H_{2g+2}`, for every monic non-square
/// `f` of degree at most `max_f_degree`, scaled by `|D|^(1/2) |f|^(1/4)`.
pub fn nonsquare_charsum_stat(field: FieldSpec, g: usize, max_f_degree: usize) -> Result<CharSumTable> {
    let ds: Vec<Poly> = squarefree_monic(field, 2 * g + 2).collect();
    nonsquare_charsum_stat_over(field, g, max_f_degree, &ds)
}

/// As [`nonsquare_charsum_stat`], summing over the given discriminants only.
pub fn nonsquare_charsum_stat_over(
    field: FieldSpec,
    g: usize,
    max_f_degree: usize,
    ds: &[Poly],
) -> Result<CharSumTable> {
    if max_f_degree > 2 * g {
        return Err(Error::InvalidArgument(format!(
            "f degree {max_f_degree} exceeds 2g = {}",
            2 * g
        )));
    }
    let q = field.q();
    let moduli: Vec<Poly> = monic_up_to(field, max_f_degree)
        .filter(|f| !is_perfect_square(f).expect("monic is nonzero"))
        .collect();
    let sums = modulus_sums(field, ds, &moduli);
    let scale = (q as f64).powi(g as i32 + 1);
    let rows: Vec<CharSumRow> = moduli
        .iter()
        .zip(sums)
        .map(|(f, sum)| {
            let n = f.deg();
            CharSumRow {
                f: f.to_string(),
                degree: n,
                sum,
                ratio: sum.unsigned_abs() as f64 / (scale * (q as f64).powf(n as f64 / 4.0)),
            }
        })
        .collect();
    let mut argmax = None;
    let mut max_ratio = 0.0;
    for (i, row) in rows.iter().enumerate() {
        if argmax.is_none() || row.ratio > max_ratio {
            max_ratio = row.ratio;
            argmax = Some(i);
        }
    }
    Ok(CharSumTable {
        q,
        g,
        max_f_degree,
        rows,
        max_ratio,
        argmax,
    })
}
