//! Zeta values of F_q[T], the Euler product
//! `P(s) = prod_P (1 - 1/(|P|^s (|P|+1)))` by two independent routes, and
//! the exact and empirical checks on Möbius-weighted sums and square-free
//! counts that the mean-value main terms are assembled from.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Float, One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{integer_mobius, monic_count, monic_range, split_range, squarefree_monic};
use crate::error::{Error, Result};
use crate::character::{raw, SymbolEngine};
use crate::factor::factor;
use crate::field::FieldSpec;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::Rational;

/// `zeta_A(s) = (1 - q^(1-s))^-1` for integer `s >= 2`.
pub fn zeta_a<S: Scalar>(s: i64, field: FieldSpec) -> Result<S> {
    if s < 2 {
        return Err(Error::Pole(s));
    }
    Ok(S::one() / (S::one() - S::power_of(field.q(), 1 - s)))
}

/// Monic irreducible count of degree `n` as a float (exact while it fits).
fn irreducible_count_f64(q: u32, n: usize) -> f64 {
    let mut total = 0.0;
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mu = integer_mobius(d);
        if mu != 0 {
            total += mu as f64 * (q as f64).powi((n / d) as i32);
        }
    }
    total / n as f64
}

/// Partial Euler product over all primes of degree `<= max_degree`, exact.
///
/// Each factor depends on `P` only through `deg P`, so the degree-`n`
/// primes contribute one factor raised to their count.
pub fn euler_product_exact(s: u32, field: FieldSpec, max_degree: usize) -> Rational {
    let q = field.q();
    (1..=max_degree).fold(Rational::one(), |acc, n| {
        let norm = BigInt::from(q).pow(n as u32);
        let x = Rational::new(BigInt::one(), norm.pow(s) * (&norm + 1u32));
        let count = crate::enumerate::irreducible_count(q, n);
        acc * num_traits::pow(Rational::one() - x, count as usize)
    })
}

/// Partial Euler product in floating point, summed in log space.
pub fn euler_product_float<F: Float>(s: u32, field: FieldSpec, max_degree: usize) -> F {
    let q = F::from(field.q()).unwrap();
    let mut log = F::zero();
    for n in 1..=max_degree {
        let norm = q.powi(n as i32);
        let x = F::one() / (norm.powi(s as i32) * (norm + F::one()));
        let count = F::from(irreducible_count_f64(field.q(), n)).unwrap();
        log = log + count * (-x).ln_1p();
    }
    log.exp()
}

/// Rigorous bound on `P_B(s) - P(s) >= 0` from `#{primes of degree n} <= q^n / n`:
/// the omitted factors multiply to at least `1 - sum_{n>B} q^(-ns)/n`.
pub fn euler_tail_bound(s: u32, q: u32, max_degree: usize) -> f64 {
    let b1 = (max_degree + 1) as f64;
    let qs = (q as f64).powi(-(s as i32));
    qs.powf(b1) / (b1 * (1.0 - qs))
}

/// Largest truncation degree tried when meeting a tolerance.
pub const MAX_EULER_DEGREE: usize = 256;

/// The product route for `P(s)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerProduct {
    pub s: u32,
    pub value: f64,
    /// Tail bound plus floating-point roundoff.
    pub error_bound: f64,
    pub truncation_degree: usize,
}

/// `P(s)` to within `tol`, choosing the smallest adequate truncation degree.
pub fn euler_product_p(s: u32, field: FieldSpec, tol: f64) -> Result<EulerProduct> {
    if s == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need s >= 1 and tol > 0, got s = {s}, tol = {tol}"
        )));
    }
    let q = field.q();
    let degree = (1..=MAX_EULER_DEGREE)
        .find(|&b| euler_tail_bound(s, q, b) < tol)
        .ok_or_else(|| Error::InvalidArgument(format!("tolerance {tol} unreachable for s = {s}")))?;
    let value = euler_product_float::<f64>(s, field, degree);
    let roundoff = 4.0 * (degree as f64 + 2.0) * f64::EPSILON;
    Ok(EulerProduct {
        s,
        value,
        error_bound: euler_tail_bound(s, q, degree) + roundoff,
        truncation_degree: degree,
    })
}

/// For each monic polynomial, the multiset of degrees of its distinct prime
/// divisors, and whether it is square-free. Weighted sums over `d | ...`
/// products depend on nothing else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ProfileKind {
    squarefree: bool,
}

/// Counts of monic polynomials by degree and prime-degree profile, built by
/// factoring every monic polynomial up to a degree.
#[derive(Clone, Debug)]
pub struct RadicalCensus {
    field: FieldSpec,
    /// `by_degree[n][(squarefree, sorted distinct prime degrees)] = count`
    by_degree: Vec<BTreeMap<(ProfileKind, Vec<u16>), u64>>,
}

fn profile(f: &Poly) -> (ProfileKind, Vec<u16>) {
    let fac = factor(f).expect("monic is nonzero");
    let squarefree = fac.is_squarefree();
    let mut degrees: Vec<u16> = fac.primes().map(|p| p.deg() as u16).collect();
    degrees.sort_unstable();
    (ProfileKind { squarefree }, degrees)
}

impl RadicalCensus {
    pub fn build(field: FieldSpec, max_degree: usize) -> Self {
        let by_degree = (0..=max_degree)
            .map(|n| {
                let total = monic_count(field.q(), n);
                split_range(total, rayon::current_num_threads() * 4)
                    .into_par_iter()
                    .map(|r| {
                        let mut m: BTreeMap<(ProfileKind, Vec<u16>), u64> = BTreeMap::new();
                        for f in monic_range(field, n, r) {
                            *m.entry(profile(&f)).or_default() += 1;
                        }
                        m
                    })
                    .reduce(BTreeMap::new, |mut a, b| {
                        for (k, v) in b {
                            *a.entry(k).or_default() += v;
                        }
                        a
                    })
            })
            .collect();
        RadicalCensus { field, by_degree }
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    fn check(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree() {
            return Err(Error::InvalidArgument(format!(
                "census covers degree <= {}, asked for {degree}",
                self.max_degree()
            )));
        }
        Ok(())
    }

    /// `sum_{d monic, deg d <= g} mu(d) / |d|^s prod_{P | d} 1/(|P|+1)`.
    pub fn mobius_sum<S: Scalar>(&self, s: u32, g: usize) -> Result<S> {
        self.check(g)?;
        let q = self.field.q();
        let mut total = S::zero();
        for (n, classes) in self.by_degree.iter().enumerate().take(g + 1) {
            for ((kind, degrees), &count) in classes {
                if !kind.squarefree {
                    continue;
                }
                let mut den = BigInt::from(q).pow(s * n as u32);
                for &e in degrees {
                    den *= BigInt::from(q).pow(e as u32) + 1u32;
                }
                let sign = if degrees.len() % 2 == 0 { 1 } else { -1 };
                total = total + S::from_ratio(&BigInt::from(sign * count as i64), &den);
            }
        }
        Ok(total)
    }

    /// `sum_{l monic, deg l = m} prod_{P | l} |P|/(|P|+1)`.
    pub fn radical_weight_sum(&self, m: usize) -> Result<Rational> {
        self.check(m)?;
        let q = self.field.q();
        let mut total = Rational::zero();
        for ((_, degrees), &count) in &self.by_degree[m] {
            let mut num = BigInt::from(count);
            let mut den = BigInt::one();
            for &e in degrees {
                let norm = BigInt::from(q).pow(e as u32);
                den *= &norm + 1u32;
                num *= norm;
            }
            total += Rational::new(num, den);
        }
        Ok(total)
    }
}

/// `mobius_sum` computed from a fresh census.
pub fn mobius_sum_p<S: Scalar>(s: u32, g: usize, field: FieldSpec) -> Result<S> {
    RadicalCensus::build(field, g).mobius_sum(s, g)
}

/// Both routes to `P(s)` side by side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerConstant {
    pub s: u32,
    pub value_product: f64,
    pub product_error_bound: f64,
    pub truncation_degree: usize,
    #[serde(skip)]
    pub value_mobius: Rational,
    pub mobius_degree: usize,
}

impl EulerConstant {
    pub fn build(s: u32, field: FieldSpec, tol: f64, mobius_degree: usize) -> Result<Self> {
        let product = euler_product_p(s, field, tol)?;
        Ok(EulerConstant {
            s,
            value_product: product.value,
            product_error_bound: product.error_bound,
            truncation_degree: product.truncation_degree,
            value_mobius: mobius_sum_p(s, mobius_degree, field)?,
            mobius_degree,
        })
    }

    pub fn discrepancy(&self) -> f64 {
        (self.value_product - self.value_mobius.to_real()).abs()
    }
}

/// Signed Möbius sum `sum_{deg d <= g} mu(d) prod_{P|d} 1/(|P|+1)` and whether
/// it stays below `g + 1`, both as signed value and in absolute value.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusBound {
    pub g: usize,
    pub value: Rational,
    pub signed_ok: bool,
    pub abs_ok: bool,
}

pub fn mobius_bound_check(g: usize, field: FieldSpec) -> Result<MobiusBound> {
    mobius_bound_from(&RadicalCensus::build(field, g), g)
}

pub fn mobius_bound_from(census: &RadicalCensus, g: usize) -> Result<MobiusBound> {
    let value: Rational = census.mobius_sum(0, g)?;
    let limit = Rational::from_int(g as i64 + 1);
    Ok(MobiusBound {
        g,
        signed_ok: value <= limit,
        abs_ok: value.abs() <= limit,
        value,
    })
}

/// Both sides of
/// `sum_{l in A_m^+} prod_{P|l} |P|/(|P|+1) = q^m sum_{deg d <= m} mu(d)/|d| prod_{P|d} 1/(|P|+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalIdentity {
    pub m: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

pub fn radical_weight_identity(m: usize, field: FieldSpec) -> Result<RadicalIdentity> {
    radical_weight_identity_from(&RadicalCensus::build(field, m), m)
}

pub fn radical_weight_identity_from(census: &RadicalCensus, m: usize) -> Result<RadicalIdentity> {
    let lhs = census.radical_weight_sum(m)?;
    let rhs = Rational::power_of(census.field.q(), m as i64) * census.mobius_sum::<Rational>(1, m)?;
    Ok(RadicalIdentity {
        m,
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Square-free discriminants of degree `2g + 2` coprime to `l`, against
/// `q^(2g+2)/zeta_A(2) prod_{P|l} |P|/(|P|+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoprimeCount {
    pub count: u64,
    pub main: Rational,
    pub rel_err: f64,
}

impl CoprimeCount {
    /// `|count - main| / q^(g+1)`, the constant in an `O(|D|^(1/2))` error.
    pub fn scaled_error(&self, q: u32, g: usize) -> Rational {
        (Rational::from_int(self.count as i64) - &self.main).abs()
            / Rational::power_of(q, g as i64 + 1)
    }
}

fn coprime_main_term(g: usize, l: &Poly) -> Result<Rational> {
    let field = l.field();
    let q = field.q();
    let mut main = Rational::power_of(q, 2 * g as i64 + 2) / zeta_a::<Rational>(2, field)?;
    for p in factor(l)?.primes() {
        let norm = Rational::power_of(q, p.deg() as i64);
        main = main * &norm / (norm + Rational::one());
    }
    Ok(main)
}

pub fn squarefree_coprime_count(g: usize, l: &Poly) -> Result<CoprimeCount> {
    if l.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = l.field();
    let count = squarefree_monic(field, 2 * g + 2)
        .filter(|d| d.gcd(l).map(|c| c.is_one()).unwrap_or(false))
        .count() as u64;
    let main = coprime_main_term(g, l)?;
    let rel_err = ((Rational::from_int(count as i64) - &main).abs() / &main).to_real();
    Ok(CoprimeCount {
        count,
        main,
        rel_err,
    })
}

/// `squarefree_coprime_count` for many `l` sharing one pass over `H_{2g+2}`.
/// Coprimality is read off the Jacobi symbol, which vanishes exactly when
/// `gcd(D, l) != 1`.
pub fn squarefree_coprime_counts(g: usize, ls: &[Poly], field: FieldSpec) -> Result<Vec<CoprimeCount>> {
    if ls.iter().any(Poly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let ds: Vec<Vec<u32>> = squarefree_monic(field, 2 * g + 2).map(|d| raw(&d)).collect();
    ls.par_iter()
        .map(|l| {
            let lr = raw(&l.make_monic());
            let mut engine = SymbolEngine::new(field);
            let count = ds.iter().filter(|d| engine.symbol(d, &lr) != 0).count() as u64;
            let main = coprime_main_term(g, l)?;
            let rel_err = ((Rational::from_int(count as i64) - &main).abs() / &main).to_real();
            Ok(CoprimeCount {
                count,
                main,
                rel_err,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{irreducibles, monic};
    use crate::factor::mobius;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Möbius sum by direct enumeration and factorization, no census.
    fn mobius_sum_direct(s: u32, g: usize, field: FieldSpec) -> Rational {
        let q = field.q();
        let mut total = Rational::zero();
        for n in 0..=g {
            for d in monic(field, n) {
                let mu = mobius(&d).unwrap();
                if mu == 0 {
                    continue;
                }
                let mut term = Rational::from_int(mu as i64) * Rational::power_of(q, -(s as i64 * n as i64));
                for p in factor(&d).unwrap().primes() {
                    term = term / (Rational::power_of(q, p.deg() as i64) + Rational::one());
                }
                total += term;
            }
        }
        total
    }

    #[test]
    fn zeta_values() {
        let f = f5();
        assert_eq!(zeta_a::<Rational>(2, f).unwrap(), r(5, 4));
        assert_eq!(zeta_a::<Rational>(4, f).unwrap(), r(125, 124));
        assert_eq!(zeta_a::<Rational>(5, f).unwrap(), r(625, 624));
        assert_eq!(zeta_a::<f64>(1, f), Err(Error::Pole(1)));
        assert!((zeta_a::<f64>(2, f).unwrap() - 1.25).abs() < 1e-15);
        for q in [5u64, 7, 11] {
            let f = FieldSpec::new(q).unwrap();
            let z: Rational = zeta_a(2, f).unwrap();
            assert_eq!(z * (Rational::one() - r(1, q as i64)), Rational::one());
        }
    }

    #[test]
    fn euler_product_examples() {
        let f = f5();
        let big = euler_product_p(12, f, 1e-12).unwrap();
        assert!(big.value > 0.9999 && big.value < 1.0);
        let p4 = euler_product_p(4, f, 1e-10).unwrap();
        assert!(p4.value > 0.99 && p4.value < 1.0);
        assert!(p4.error_bound < 1e-10);
        assert_eq!(p4, euler_product_p(4, f, 1e-10).unwrap());
        assert!(euler_product_p(4, f, 0.0).is_err());
        assert!(euler_product_p(0, f, 1e-3).is_err());
    }

    #[test]
    fn product_by_counts_matches_product_over_enumerated_primes() {
        let f = f5();
        let mut direct = Rational::one();
        for n in 1..=3 {
            for p in irreducibles(f, n) {
                let norm = Rational::power_of(5, p.deg() as i64);
                direct *= Rational::one()
                    - Rational::one() / (num_traits::pow(norm.clone(), 4) * (norm + Rational::one()));
            }
        }
        assert_eq!(direct, euler_product_exact(4, f, 3));
        let float = euler_product_float::<f64>(4, f, 3);
        assert!((float - direct.to_real()).abs() < 1e-15);
        let single = euler_product_float::<f32>(4, f, 3);
        assert!((single as f64 - float).abs() < 1e-6);
    }

    #[test]
    fn tail_bound_is_rigorous_for_exact_partial_products() {
        let f = f5();
        let deep = euler_product_exact(1, f, 6);
        for b in 1..=4 {
            let shallow = euler_product_exact(1, f, b);
            let gap = (shallow - &deep).to_real();
            assert!(gap >= 0.0);
            assert!(gap <= euler_tail_bound(1, 5, b), "b={b}");
        }
    }

    #[test]
    fn mobius_sum_examples() {
        let f = f5();
        assert_eq!(mobius_sum_p::<Rational>(4, 0, f).unwrap(), Rational::one());
        assert_eq!(mobius_sum_p::<Rational>(4, 1, f).unwrap(), r(749, 750));
        for g in 0..=3 {
            assert_eq!(mobius_sum_p::<Rational>(1, g, f).unwrap(), mobius_sum_direct(1, g, f));
            assert_eq!(mobius_sum_p::<Rational>(4, g, f).unwrap(), mobius_sum_direct(4, g, f));
        }
        let approx: f64 = mobius_sum_p(4, 2, f).unwrap();
        assert!((approx - mobius_sum_direct(4, 2, f).to_real()).abs() < 1e-15);
    }

    #[test]
    fn mobius_bound_examples() {
        let f = f5();
        let b0 = mobius_bound_check(0, f).unwrap();
        assert_eq!(b0.value, Rational::one());
        assert!(b0.signed_ok && b0.abs_ok);
        let b1 = mobius_bound_check(1, f).unwrap();
        assert_eq!(b1.value, r(1, 6));
        let census = RadicalCensus::build(f, 5);
        for g in 0..=5 {
            let b = mobius_bound_from(&census, g).unwrap();
            assert!(b.signed_ok && b.abs_ok, "g={g}");
        }
    }

    #[test]
    fn radical_identity_examples() {
        let f = f5();
        let m0 = radical_weight_identity(0, f).unwrap();
        assert_eq!((m0.lhs.clone(), m0.equal), (Rational::one(), true));
        let m1 = radical_weight_identity(1, f).unwrap();
        assert_eq!(m1.lhs, r(25, 6));
        assert_eq!(m1.rhs, r(25, 6));
        assert!(radical_weight_identity(4, f).unwrap().equal);
        let census = RadicalCensus::build(f, 2);
        assert!(radical_weight_identity_from(&census, 3).is_err());
    }

    #[test]
    fn coprime_count_examples() {
        let f = f5();
        let one = squarefree_coprime_count(1, &Poly::one(f)).unwrap();
        assert_eq!(one.count, 500);
        assert_eq!(one.main, r(500, 1));
        assert_eq!(one.rel_err, 0.0);
        let t = squarefree_coprime_count(0, &Poly::t(f)).unwrap();
        assert_eq!(t.count, 16);
        assert_eq!(t.main, r(50, 3));
        let batch = squarefree_coprime_counts(0, &[Poly::one(f), Poly::t(f)], f).unwrap();
        assert_eq!(batch[1], t);
        assert!(squarefree_coprime_count(0, &Poly::zero(f)).is_err());
    }
}
