//! Factorization in F_q[T]: square-free decomposition, distinct-degree and
//! equal-degree (Cantor-Zassenhaus) splitting, plus the predicates built on
//! them.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::Poly;

/// Seed used by [`factor`] for the equal-degree splitting step.
pub const DEFAULT_SPLIT_SEED: u64 = 0x6b32_6c61_625f_6366;

/// `unit * prod(P^e)` with monic irreducible `P`, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self, field: crate::FieldSpec) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (p, e)| {
                &acc * &p.pow(*e)
            })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// The distinct monic prime divisors.
    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }
}

/// Square-free decomposition of a monic polynomial: pairwise coprime
/// square-free factors `a_i` with `f = prod a_i^{m_i}`.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    debug_assert!(f.is_monic());
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let q = f.field().q();
    let mut c = f.gcd(&f.derivative()).expect("same field");
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("same field");
        let fac = w.exact_div(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.exact_div(&y);
        w = y;
        i += 1;
    }
    if !c.is_one() {
        // What is left has every multiplicity divisible by q.
        for (fac, m) in squarefree_decomposition(&c.qth_root()) {
            out.push((fac, m * q));
        }
    }
    out
}

/// `h^(q^k) mod m`, by repeated q-th powering.
fn frobenius(h: &Poly, m: &Poly, k: usize) -> Poly {
    let q = BigUint::from(h.field().q());
    let mut r = h.rem(m).expect("nonzero modulus");
    for _ in 0..k {
        r = r.pow_mod(&q, m).expect("nonzero modulus");
    }
    r
}

/// Splits a monic square-free polynomial into products of irreducibles of
/// equal degree: `(d, product of all degree-d factors)`.
pub fn distinct_degree_factorization(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field();
    let t = Poly::t(field);
    let mut rest = f.clone();
    let mut h = t.rem(&rest).unwrap_or_else(|_| Poly::zero(field));
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = frobenius(&h, &rest, 1);
        let g = (&h - &t).gcd(&rest).expect("same field");
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest).expect("nonzero modulus");
            out.push((d, g));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        out.push((rest.deg(), rest));
    }
    out
}

/// Cantor-Zassenhaus splitting of a monic square-free `f` all of whose
/// irreducible factors have degree `d`.
pub fn equal_degree_factorization<R: Rng>(f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.q() as u64;
    let exponent = (BigUint::from(field.q()).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = Poly::from_elements(
            field,
            (0..n).map(|_| field.element(rng.random_range(0..q))).collect(),
        );
        if a.is_constant() {
            continue;
        }
        let mut g = a.gcd(f).expect("same field");
        if g.is_one() {
            let b = a.pow_mod(&exponent, f).expect("nonzero modulus");
            g = (&b - &Poly::one(field)).gcd(f).expect("same field");
        }
        if !g.is_one() && g.deg() < n {
            let other = f.exact_div(&g);
            let mut out = equal_degree_factorization(&g, d, rng);
            out.extend(equal_degree_factorization(&other, d, rng));
            return out;
        }
    }
}

/// Complete factorization with the default splitting seed.
pub fn factor(f: &Poly) -> Result<Factorization> {
    factor_with_seed(f, DEFAULT_SPLIT_SEED)
}

/// Complete factorization. The output does not depend on `seed`; only the
/// work done to find it does.
pub fn factor_with_seed(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = f.leading();
    let monic = f.make_monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic) {
        for (d, block) in distinct_degree_factorization(&part) {
            for p in equal_degree_factorization(&block, d, &mut rng) {
                factors.push((p, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

fn distinct_prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test. Constants (including zero) are not irreducible.
pub fn is_irreducible(f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let f = f.make_monic();
    let t = Poly::t(f.field());
    if frobenius(&t, &f, n) != t.rem(&f).expect("nonzero modulus") {
        return false;
    }
    distinct_prime_divisors(n).into_iter().all(|r| {
        let h = frobenius(&t, &f, n / r);
        (&h - &t).gcd(&f).expect("same field").is_one()
    })
}

/// True iff no irreducible `P` has `P^2 | f`.
pub fn is_squarefree(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() == 0 {
        return Ok(true);
    }
    let df = f.derivative();
    if df.is_zero() {
        // f is a q-th power
        return Ok(false);
    }
    Ok(f.gcd(&df)?.is_one())
}

/// The Möbius function of F_q[T].
pub fn mobius(f: &Poly) -> Result<i8> {
    let fac = factor(f)?;
    if !fac.is_squarefree() {
        return Ok(0);
    }
    Ok(if fac.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// The monic `h` with `h^2 = f`, if there is one.
///
/// Only monic `f` can qualify: a non-monic square `c h^2` is not counted,
/// matching sums that run over monic polynomials.
pub fn square_root(f: &Poly) -> Result<Option<Poly>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() || f.deg() % 2 == 1 {
        return Ok(None);
    }
    let mut root = Poly::one(f.field());
    for (part, mult) in squarefree_decomposition(f) {
        if mult % 2 == 1 {
            return Ok(None);
        }
        root = &root * &part.pow(mult / 2);
    }
    Ok(Some(root))
}

pub fn is_perfect_square(f: &Poly) -> Result<bool> {
    Ok(square_root(f)?.is_some())
}
