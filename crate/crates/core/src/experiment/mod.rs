//! Experiments over families of discriminants: averages of K2 orders, the
//! total of `L(2, chi_{gamma D})` over `H_{2g+2}` and its split by square and
//! non-square moduli, exact identity sweeps, and bound statistics checked
//! against pinned fixtures.

mod fixtures;
mod report;

pub use fixtures::{FixtureEntry, FixtureValue, Fixtures, PINNED_JSON};
pub use report::{Empirical, ExperimentReport, Meta, ResultRow, RowKind, DISPLAY_DIGITS};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::asymptotics::{
    euler_product_p, mobius_bound_from, radical_weight_identity_from, squarefree_coprime_counts,
    zeta_a, RadicalCensus,
};
use crate::character::{modulus_sums, nonsquare_charsum_stat_over, Discriminant};
use crate::enumerate::{monic_count, monic_up_to, squarefree_count, squarefree_monic};
use crate::error::{Error, Result};
use crate::factor::{is_perfect_square, is_squarefree};
use crate::field::FieldSpec;
use crate::k2::{k2_size_even_twisted, k2_size_from_l, k2_size_odd};
use crate::lfunction::{l_polynomial, twisted_value_via_untwisted_sums, LPolynomial};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::Rational;

pub const DEFAULT_BUDGET: u64 = 20_000;
pub const DEFAULT_SAMPLE: usize = 500;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_EPSILON: f64 = 0.1;
/// Tolerance used for `P(s)` inside main terms.
pub const P_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    AvgOdd,
    AvgEven,
    SumL,
    Identities,
    Bounds,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::AvgOdd, Mode::AvgEven, Mode::SumL, Mode::Identities, Mode::Bounds];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::AvgOdd => "avg-odd",
            Mode::AvgEven => "avg-even",
            Mode::SumL => "sum-l",
            Mode::Identities => "identities",
            Mode::Bounds => "bounds",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Parse {
                input: s.into(),
                reason: "unknown experiment".into(),
            })
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub field: FieldSpec,
    pub g: usize,
    pub mode: Mode,
    /// Sample this many discriminants per degree instead of enumerating all.
    pub sample: Option<usize>,
    pub seed: u64,
    pub epsilon: f64,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Largest `q^deg` enumerated exhaustively without a sample size.
    pub budget: u64,
}

impl Config {
    pub fn new(field: FieldSpec, g: usize, mode: Mode) -> Self {
        Config {
            field,
            g,
            mode,
            sample: None,
            seed: DEFAULT_SEED,
            epsilon: DEFAULT_EPSILON,
            threads: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Discriminants of one degree chosen for an experiment.
#[derive(Clone, Debug)]
pub struct Selection {
    pub degree: usize,
    pub polys: Vec<Poly>,
    /// `#H_degree`
    pub population: u64,
    pub exhaustive: bool,
}

impl Selection {
    /// `#H / n`: turns a total over the selection into an estimate of the
    /// total over all of `H`.
    pub fn weight(&self) -> Rational {
        Rational::new(BigInt::from(self.population), BigInt::from(self.polys.len()))
    }

    pub fn grid(&self, seed: u64) -> String {
        if self.exhaustive {
            "exhaustive".into()
        } else {
            format!("sample={},seed={seed}", self.polys.len())
        }
    }
}

/// All of `H_degree` when `q^degree <= budget` and no sample is requested,
/// otherwise `sample` distinct members drawn uniformly with a seeded
/// generator and returned in enumeration order.
pub fn select_discriminants(
    field: FieldSpec,
    degree: usize,
    sample: Option<usize>,
    seed: u64,
    budget: u64,
) -> Result<Selection> {
    let q = field.q();
    let total = monic_count(q, degree);
    let population = squarefree_count(q, degree);
    let exhaustive = |polys: Vec<Poly>| Selection {
        degree,
        polys,
        population,
        exhaustive: true,
    };
    match sample {
        None => {
            if total > budget {
                return Err(Error::BudgetExceeded {
                    needed: total,
                    budget,
                });
            }
            Ok(exhaustive(squarefree_monic(field, degree).collect()))
        }
        Some(0) => Err(Error::InvalidArgument("sample size must be positive".into())),
        Some(n) if n as u64 >= population => Ok(exhaustive(squarefree_monic(field, degree).collect())),
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(degree as u64);
            let mut chosen = BTreeSet::new();
            while chosen.len() < n {
                let k = rng.random_range(0..total);
                if !chosen.contains(&k)
                    && is_squarefree(&Poly::monic_from_index(field, degree, k)).expect("monic is nonzero")
                {
                    chosen.insert(k);
                }
            }
            Ok(Selection {
                degree,
                polys: chosen
                    .into_iter()
                    .map(|k| Poly::monic_from_index(field, degree, k))
                    .collect(),
                population,
                exhaustive: false,
            })
        }
    }
}

fn select(config: &Config, degree: usize) -> Result<Selection> {
    select_discriminants(config.field, degree, config.sample, config.seed, config.budget)
}

struct Constants {
    zeta2: f64,
    zeta4: f64,
    zeta5: f64,
    p4: f64,
}

fn constants(field: FieldSpec) -> Result<Constants> {
    Ok(Constants {
        zeta2: zeta_a(2, field)?,
        zeta4: zeta_a(4, field)?,
        zeta5: zeta_a(5, field)?,
        p4: euler_product_p(4, field, P_TOLERANCE)?.value,
    })
}

/// `q^(2g+2) zeta_A(4) P(4) / zeta_A(2)`, the main term of the total of
/// `L(2, chi_{gamma D})` over `H_{2g+2}`.
pub fn l_sum_main_term(field: FieldSpec, g: usize) -> Result<f64> {
    let c = constants(field)?;
    Ok((field.q() as f64).powi(2 * g as i32 + 2) / c.zeta2 * c.zeta4 * c.p4)
}

/// `q^(3(2g+1)/2) zeta_A(2) zeta_A(4) P(4) / zeta_A(5)`, the stated
/// candidate for the even-degree average.
pub fn stated_main_term(field: FieldSpec, g: usize) -> Result<f64> {
    let c = constants(field)?;
    Ok((field.q() as f64).powf(1.5 * (2 * g + 1) as f64) * c.zeta2 * c.zeta4 * c.p4 / c.zeta5)
}

/// `q^(3g+2) (q+1)/(q^2+1) zeta_A(4) P(4)`: the L-sum main term divided by
/// `#H_{2g+2}` and multiplied by the K2 scale factor.
pub fn l_sum_derived_main_term(field: FieldSpec, g: usize) -> Result<f64> {
    let c = constants(field)?;
    let q = field.q() as f64;
    Ok(q.powi(3 * g as i32 + 2) * (q + 1.0) / (q * q + 1.0) * c.zeta4 * c.p4)
}

/// `q^(3g) zeta_A(4) P(4)`, the odd-degree average main term over `H_{2g+1}`.
pub fn odd_main_term(field: FieldSpec, g: usize) -> Result<f64> {
    let c = constants(field)?;
    Ok((field.q() as f64).powi(3 * g as i32) * c.zeta4 * c.p4)
}

/// The total of `L(2, chi_{gamma D})` over a set of `D` in `H_{2g+2}`, split
/// four ways by whether the modulus `f` is a square and by which of the two
/// sums over `f` it comes from.
#[derive(Clone, Debug, PartialEq)]
pub struct SumDecomposition {
    /// `sum_D sum_{f square} (-1)^deg f chi_D(f) / |f|^2`
    pub piece_sq_main: Rational,
    pub piece_nonsq_main: Rational,
    /// `q^(-4g-2) sum_D sum_{f square} chi_D(f)`
    pub piece_sq_dual: Rational,
    pub piece_nonsq_dual: Rational,
    pub total: Rational,
    /// The same total from each `D`'s own twisted L-polynomial.
    pub per_discriminant_total: Rational,
}

impl SumDecomposition {
    pub fn dual(&self) -> Rational {
        &self.piece_sq_dual + &self.piece_nonsq_dual
    }

    pub fn consistent(&self) -> bool {
        let pieces =
            &self.piece_sq_main + &self.piece_nonsq_main + &self.piece_sq_dual + &self.piece_nonsq_dual;
        pieces == self.total && self.total == self.per_discriminant_total
    }

    pub fn scaled(&self, w: &Rational) -> Self {
        SumDecomposition {
            piece_sq_main: &self.piece_sq_main * w,
            piece_nonsq_main: &self.piece_nonsq_main * w,
            piece_sq_dual: &self.piece_sq_dual * w,
            piece_nonsq_dual: &self.piece_nonsq_dual * w,
            total: &self.total * w,
            per_discriminant_total: &self.per_discriminant_total * w,
        }
    }
}

struct ModulusPieces {
    sq_main: Rational,
    nonsq_main: Rational,
    sq_dual: Rational,
    nonsq_dual: Rational,
}

/// The four pieces from the exact sums `sum_D (D / f)` over every monic `f`
/// of degree `<= 2g`.
fn modulus_pieces(field: FieldSpec, g: usize, ds: &[Poly]) -> Result<ModulusPieces> {
    let q = field.q();
    let moduli: Vec<Poly> = monic_up_to(field, 2 * g).collect();
    let sums = modulus_sums(field, ds, &moduli);
    let (mut sq_main, mut nonsq_main) = (Rational::zero(), Rational::zero());
    let (mut sq_dual, mut nonsq_dual) = (BigInt::zero(), BigInt::zero());
    for (f, s) in moduli.iter().zip(sums) {
        let n = f.deg() as i64;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let main = Rational::from_int(sign * s) * Rational::power_of(q, -2 * n);
        if is_perfect_square(f)? {
            sq_main += main;
            sq_dual += s;
        } else {
            nonsq_main += main;
            nonsq_dual += s;
        }
    }
    let dual_scale = Rational::power_of(q, -4 * g as i64 - 2);
    Ok(ModulusPieces {
        sq_main,
        nonsq_main,
        sq_dual: Rational::from_integer(sq_dual) * &dual_scale,
        nonsq_dual: Rational::from_integer(nonsq_dual) * dual_scale,
    })
}

fn check_degree(ds: &[Poly], degree: usize) -> Result<()> {
    match ds.iter().find(|d| d.degree() != Some(degree)) {
        Some(d) => Err(Error::InvalidArgument(format!("{d} does not have degree {degree}"))),
        None => Ok(()),
    }
}

/// Exact decomposition over the given discriminants (all of degree `2g+2`).
pub fn decompose_sum_l(field: FieldSpec, g: usize, ds: &[Poly]) -> Result<SumDecomposition> {
    check_degree(ds, 2 * g + 2)?;
    let pieces = modulus_pieces(field, g, ds)?;
    let coeff_totals = ds
        .par_iter()
        .map(|d| Ok(l_polynomial(&Discriminant::twisted(d.clone())?).coeffs().to_vec()))
        .try_reduce(
            || vec![0i64; 2 * g + 2],
            |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect()),
        )?;
    let per_discriminant_total = coeff_totals
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, &c| {
            acc * Rational::power_of(field.q(), -2) + Rational::from_int(c)
        });
    let total = &pieces.sq_main + &pieces.nonsq_main + &pieces.sq_dual + &pieces.nonsq_dual;
    Ok(SumDecomposition {
        piece_sq_main: pieces.sq_main,
        piece_nonsq_main: pieces.nonsq_main,
        piece_sq_dual: pieces.sq_dual,
        piece_nonsq_dual: pieces.nonsq_dual,
        total,
        per_discriminant_total,
    })
}

fn envelope(q: u32, g: usize, epsilon: f64) -> f64 {
    (q as f64).powf(g as f64 * (1.0 + epsilon))
}

/// The square-modulus main piece against `q^(2g+2) zeta_A(4) P(4) / zeta_A(2)`,
/// with the discrepancy scaled by `q^(g(1+eps))`.
pub fn square_main_piece_check(
    d: &SumDecomposition,
    field: FieldSpec,
    g: usize,
    epsilon: f64,
) -> Result<ResultRow> {
    let main = l_sum_main_term(field, g)?;
    let observed = d.piece_sq_main.to_real();
    Ok(ResultRow::statistic("square_main_piece", Empirical::exact(&d.piece_sq_main))
        .candidate("main_term", main)
        .rel_error("relative", (observed - main).abs() / main)
        .rel_error("scaled_error", (observed - main).abs() / envelope(field.q(), g, epsilon)))
}

/// `q^g |dual piece|`, where the dual piece is
/// `q^(-4g-2) sum_D sum_{deg f <= 2g} chi_D(f)`.
pub fn dual_piece_check(d: &SumDecomposition, field: FieldSpec, g: usize) -> ResultRow {
    let dual = d.dual();
    let scaled = dual.abs() * Rational::power_of(field.q(), g as i64);
    ResultRow::statistic("dual_piece", Empirical::exact(&dual)).rel_error("scaled", scaled.to_real())
}

fn run_sum_l(config: &Config) -> Result<(Vec<ResultRow>, Vec<String>)> {
    let (field, g) = (config.field, config.g);
    let sel = select(config, 2 * g + 2)?;
    let d = decompose_sum_l(field, g, &sel.polys)?.scaled(&sel.weight());
    let main = l_sum_main_term(field, g)?;
    let total = d.total.to_real();
    let mut rows = vec![
        ResultRow::identity(
            "sum_decomposition",
            sel.polys.len(),
            &if d.consistent() {
                vec![]
            } else {
                vec![format!(
                    "pieces total {} vs per-discriminant {}",
                    d.total, d.per_discriminant_total
                )]
            },
        )
        .candidate("piece_sq_main", d.piece_sq_main.to_real())
        .candidate("piece_nonsq_main", d.piece_nonsq_main.to_real())
        .candidate("piece_sq_dual", d.piece_sq_dual.to_real())
        .candidate("piece_nonsq_dual", d.piece_nonsq_dual.to_real()),
        ResultRow::statistic("l_sum_main_term", Empirical::exact(&d.total))
            .candidate("main_term", main)
            .rel_error("relative", (total - main).abs() / main)
            .rel_error(
                "scaled_error",
                (total - main).abs() / envelope(field.q(), g, config.epsilon),
            ),
    ];
    rows.push(square_main_piece_check(&d, field, g, config.epsilon)?);
    rows.push(dual_piece_check(&d, field, g));
    let mut notes = vec![
        "square_main_piece compares the square-modulus main piece alone; the square dual piece is part of dual_piece".into(),
    ];
    if !sel.exhaustive {
        notes.push(format!(
            "totals are sample totals scaled by #H/n = {}",
            sel.weight()
        ));
    }
    Ok((rows, notes))
}

fn nearest(candidates: &[(&str, f64)], observed: f64) -> String {
    candidates
        .iter()
        .min_by(|a, b| (a.1 - observed).abs().total_cmp(&(b.1 - observed).abs()))
        .map(|c| c.0.to_string())
        .unwrap_or_default()
}

fn average_k2<F>(polys: &[Poly], size: F) -> (Rational, Vec<String>)
where
    F: Fn(&Poly) -> Result<crate::k2::K2Size> + Sync,
{
    let (sum, count, failures) = polys
        .par_iter()
        .map(|d| match size(d) {
            Ok(k) => (k.value, 1usize, vec![]),
            Err(e) => (BigInt::zero(), 0, vec![format!("{d}: {e}")]),
        })
        .reduce(
            || (BigInt::zero(), 0, vec![]),
            |mut a, b| {
                a.2.extend(b.2);
                (a.0 + b.0, a.1 + b.1, a.2)
            },
        );
    let mean = if count == 0 {
        Rational::zero()
    } else {
        Rational::new(sum, BigInt::from(count))
    };
    (mean, failures)
}

fn run_average_even(config: &Config) -> Result<(Vec<ResultRow>, Vec<String>)> {
    let (field, g) = (config.field, config.g);
    let sel = select(config, 2 * g + 2)?;
    let (mean, failures) = average_k2(&sel.polys, k2_size_even_twisted);
    let observed = mean.to_real();
    let candidates = [
        ("stated_main_term", stated_main_term(field, g)?),
        ("l_sum_derived_main_term", l_sum_derived_main_term(field, g)?),
    ];
    let mut row = ResultRow::statistic("k2_average_even", Empirical::exact(&mean));
    for (name, value) in candidates {
        row = row
            .candidate(name, value)
            .rel_error(name, (observed - value).abs() / value);
    }
    let row = row.with_detail(format!("nearest: {}", nearest(&candidates, observed)));
    Ok((
        vec![ResultRow::identity("k2_integrality", sel.polys.len(), &failures), row],
        vec![],
    ))
}

fn run_average_odd(config: &Config) -> Result<(Vec<ResultRow>, Vec<String>)> {
    let (field, g) = (config.field, config.g);
    let sel = select(config, 2 * g + 1)?;
    let (mean, failures) = average_k2(&sel.polys, k2_size_odd);
    let observed = mean.to_real();
    let main = odd_main_term(field, g)?;
    let rel = (observed - main).abs() / main;
    let allowed = odd_envelope(field, g, config.epsilon)?;
    let row = ResultRow::statistic("k2_average_odd", Empirical::exact(&mean))
        .candidate("odd_main_term", main)
        .candidate("relative_envelope", allowed)
        .rel_error("odd_main_term", rel)
        .with_pass(rel <= allowed);
    Ok((
        vec![ResultRow::identity("k2_integrality", sel.polys.len(), &failures), row],
        vec![],
    ))
}

/// `q^((2g+1)(1+eps))` relative to the odd main term.
pub fn odd_envelope(field: FieldSpec, g: usize, epsilon: f64) -> Result<f64> {
    Ok((field.q() as f64).powf((2 * g + 1) as f64 * (1.0 + epsilon)) / odd_main_term(field, g)?)
}

/// Outcome of every exact identity for one even-degree `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    /// `sigma_n(gamma D) = (-1)^n sigma_n(D)`
    pub twist_relation: bool,
    /// `L(-1, chi_{gamma D}) = 0`
    pub trivial_zero: bool,
    /// Division by `1 + u` is exact and matches the alternating sums.
    pub completion: bool,
    /// `L(q^-2, chi_{gamma D})` equals its form through untwisted sums.
    pub untwisted_sum_form: bool,
    /// `L(1, chi_D) = 0`
    pub unit_zero: bool,
    pub functional_equation: bool,
    pub l_value_positive: bool,
    pub k2_integral: bool,
}

impl IdentityOutcome {
    pub const NAMES: [&'static str; 8] = [
        "twist_relation",
        "trivial_zero",
        "completion",
        "untwisted_sum_form",
        "unit_zero",
        "functional_equation",
        "l_value_positive",
        "k2_integral",
    ];

    pub fn flags(&self) -> [bool; 8] {
        [
            self.twist_relation,
            self.trivial_zero,
            self.completion,
            self.untwisted_sum_form,
            self.unit_zero,
            self.functional_equation,
            self.l_value_positive,
            self.k2_integral,
        ]
    }

    pub fn all(&self) -> bool {
        self.flags().iter().all(|&b| b)
    }
}

/// Runs every identity on the raw L-polynomials of `chi_D` and
/// `chi_{gamma D}`. Only the untwisted-sum form recomputes anything from `D`.
pub fn check_identities(untwisted: &LPolynomial, twisted: &LPolynomial) -> Result<IdentityOutcome> {
    let d = untwisted.source();
    let plain = untwisted.coeffs();
    let tw = twisted.coeffs();
    let twist_relation = plain.len() == tw.len()
        && plain
            .iter()
            .zip(tw)
            .enumerate()
            .all(|(n, (a, b))| if n % 2 == 0 { a == b } else { *a == -b });
    let completed = twisted.complete().ok();
    let functional_equation = match &completed {
        Some(c) => c.functional_equation_check()?,
        None => false,
    };
    let value = twisted.value_at_two();
    Ok(IdentityOutcome {
        twist_relation,
        trivial_zero: twisted.eval(&-Rational::one()).is_zero(),
        completion: completed.is_some(),
        untwisted_sum_form: value == twisted_value_via_untwisted_sums(d)?,
        unit_zero: untwisted.eval(&Rational::one()).is_zero(),
        functional_equation,
        l_value_positive: value.is_positive(),
        k2_integral: k2_size_from_l(twisted).is_ok(),
    })
}

/// Degree `m` up to which the radical-weight identity is swept.
fn radical_degree(config: &Config) -> usize {
    let mut m = (2 * config.g + 2).min(6);
    while m > 0 && monic_count(config.field.q(), m) > config.budget {
        m -= 1;
    }
    m
}

fn run_identities(config: &Config) -> Result<(Vec<ResultRow>, Vec<String>)> {
    let field = config.field;
    let mut checked = 0usize;
    let mut failures: Vec<Vec<String>> = vec![vec![]; IdentityOutcome::NAMES.len()];
    for k in 0..=config.g {
        let sel = select(config, 2 * k + 2)?;
        checked += sel.polys.len();
        let outcomes: Vec<(String, IdentityOutcome)> = sel
            .polys
            .par_iter()
            .map(|d| {
                let disc = Discriminant::untwisted(d.clone())?;
                let outcome =
                    check_identities(&l_polynomial(&disc), &l_polynomial(&disc.with_twist(true)))?;
                Ok((d.to_string(), outcome))
            })
            .collect::<Result<_>>()?;
        for (d, outcome) in outcomes {
            for (i, ok) in outcome.flags().into_iter().enumerate() {
                if !ok {
                    failures[i].push(d.clone());
                }
            }
        }
    }
    let mut rows: Vec<ResultRow> = IdentityOutcome::NAMES
        .iter()
        .zip(&failures)
        .map(|(name, f)| ResultRow::identity(name, checked, f))
        .collect();

    let mut odd_checked = 0;
    let mut odd_failures = vec![];
    for k in 0..=config.g {
        let sel = select(config, 2 * k + 1)?;
        odd_checked += sel.polys.len();
        odd_failures.extend(average_k2(&sel.polys, k2_size_odd).1);
    }
    rows.push(ResultRow::identity("k2_odd_integral", odd_checked, &odd_failures));

    let top = radical_degree(config);
    let census = RadicalCensus::build(field, top);
    let mut radical_failures = vec![];
    for m in 0..=top {
        let id = radical_weight_identity_from(&census, m)?;
        if !id.equal {
            radical_failures.push(format!("m={m}: {} vs {}", id.lhs, id.rhs));
        }
    }
    rows.push(ResultRow::identity("radical_weight_identity", top + 1, &radical_failures));
    Ok((rows, vec![format!("radical_weight_identity swept m <= {top}")]))
}

/// One bound statistic at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundStatistic {
    pub name: &'static str,
    pub g: usize,
    pub grid: String,
    pub value: FixtureValue,
    /// Whether a stated inequality held, for statistics that have one.
    pub bound_ok: Option<bool>,
}

/// Degree bound on the moduli `l` in the coprime-count statistic.
pub const COPRIME_L_DEGREE: usize = 2;

/// Every bound statistic at `(q, g)`. Coprime counts and Möbius sums are
/// always exhaustive; character sums over `H_{2g+2}` honour the budget and
/// fall back to a seeded sample of `sample` discriminants.
pub fn bound_statistics(
    field: FieldSpec,
    g: usize,
    budget: u64,
    sample: usize,
    seed: u64,
) -> Result<Vec<BoundStatistic>> {
    let q = field.q();
    let mut out = vec![];

    let ls: Vec<Poly> = monic_up_to(field, COPRIME_L_DEGREE).collect();
    let counts = squarefree_coprime_counts(g, &ls, field)?;
    let worst = counts
        .iter()
        .map(|c| c.scaled_error(q, g))
        .max()
        .expect("at least one l");
    out.push(BoundStatistic {
        name: "squarefree_coprime_error",
        g,
        grid: format!("exhaustive,deg l<={COPRIME_L_DEGREE}"),
        value: FixtureValue::exact(&worst),
        bound_ok: None,
    });

    let census = RadicalCensus::build(field, g);
    let bound = mobius_bound_from(&census, g)?;
    out.push(BoundStatistic {
        name: "mobius_partial_sum",
        g,
        grid: "exhaustive".into(),
        value: FixtureValue::exact(&bound.value),
        bound_ok: Some(bound.signed_ok && bound.abs_ok),
    });
    for (name, s) in [("mobius_tail_s1", 1u32), ("mobius_tail_s4", 4)] {
        let p = euler_product_p(s, field, P_TOLERANCE)?.value;
        let partial: f64 = census.mobius_sum(s, g)?;
        out.push(BoundStatistic {
            name,
            g,
            grid: "exhaustive".into(),
            value: FixtureValue::real((partial - p).abs() * (q as f64).powi((s as usize * g) as i32)),
            bound_ok: None,
        });
    }

    let chosen = if monic_count(q, 2 * g + 2) <= budget { None } else { Some(sample) };
    let sel = select_discriminants(field, 2 * g + 2, chosen, seed, budget)?;
    let grid = sel.grid(seed);
    if g >= 1 {
        let table = nonsquare_charsum_stat_over(field, g, 2 * g, &sel.polys)?;
        out.push(BoundStatistic {
            name: "nonsquare_charsum_ratio",
            g,
            grid: grid.clone(),
            value: FixtureValue::real(table.max_ratio),
            bound_ok: None,
        });
    }
    let pieces = modulus_pieces(field, g, &sel.polys)?;
    let dual = (pieces.sq_dual + pieces.nonsq_dual) * sel.weight();
    out.push(BoundStatistic {
        name: "dual_piece_scaled",
        g,
        grid,
        value: FixtureValue::exact(&(dual.abs() * Rational::power_of(q, g as i64))),
        bound_ok: None,
    });
    Ok(out)
}

fn run_bounds(config: &Config) -> Result<(Vec<ResultRow>, Vec<String>)> {
    let fixtures = Fixtures::pinned()?;
    let q = config.field.q();
    let mut rows = vec![];
    for g in 0..=config.g {
        for stat in bound_statistics(
            config.field,
            g,
            config.budget,
            config.sample.unwrap_or(DEFAULT_SAMPLE),
            config.seed,
        )? {
            let empirical = match &stat.value {
                FixtureValue::Exact(e) => Empirical::Exact(e.clone()),
                FixtureValue::Real(x) => Empirical::Real(*x),
            };
            let mut row = ResultRow::statistic(&format!("{}@g={g}", stat.name), empirical)
                .with_detail(stat.grid.clone());
            let pinned = fixtures.find_grid(stat.name, q, g, &stat.grid);
            let matches = pinned.map(|e| e.constant == stat.value);
            if let Some(e) = pinned {
                let drift = (e.constant.to_real() - stat.value.to_real()).abs();
                row = row.candidate("fixture", e.constant.to_real()).rel_error("drift", drift);
            }
            row.pass = match (matches, stat.bound_ok) {
                (Some(m), Some(b)) => Some(m && b),
                (Some(m), None) => Some(m),
                (None, b) => b,
            };
            rows.push(row);
        }
    }
    Ok((rows, vec![format!("fixtures version {}", fixtures.version)]))
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

/// Runs one experiment on its own thread pool.
pub fn run(config: &Config) -> Result<ExperimentReport> {
    if config.epsilon.is_nan() || config.epsilon < 0.0 {
        return Err(Error::InvalidArgument(format!("epsilon must be >= 0, got {}", config.epsilon)));
    }
    let start = Instant::now();
    let (results, notes) = pool(config.threads)?.install(|| match config.mode {
        Mode::AvgOdd => run_average_odd(config),
        Mode::AvgEven => run_average_even(config),
        Mode::SumL => run_sum_l(config),
        Mode::Identities => run_identities(config),
        Mode::Bounds => run_bounds(config),
    })?;
    Ok(ExperimentReport {
        meta: Meta {
            q: config.field.q(),
            g: config.g,
            gamma: config.field.gamma().value(),
            mode: config.mode.to_string(),
            seed: config.seed,
            sample_size: config.sample.unwrap_or(0),
            epsilon: config.epsilon,
            version: env!("CARGO_PKG_VERSION").into(),
            notes,
        },
        results,
        fixtures_version: Fixtures::pinned()?.version,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

/// The command recorded in every generated fixture.
pub const FIXTURES_COMMAND: &str =
    "cargo run --release -p k2lab-cli -- --experiment fixtures --out crates/core/fixtures/constants.json";

/// Grid of the pinned bound statistics.
pub const FIXTURE_QS: [u64; 2] = [5, 7];
pub const FIXTURE_MAX_G: usize = 2;

/// Regenerates every pinned constant.
pub fn generate_fixtures(threads: Option<usize>) -> Result<Fixtures> {
    pool(threads)?.install(|| {
        let mut entries = vec![];
        let mut push = |statistic: &str, q: u32, g: usize, grid: String, constant: FixtureValue| {
            entries.push(FixtureEntry {
                statistic: statistic.into(),
                q,
                g,
                grid,
                constant,
                command: FIXTURES_COMMAND.into(),
            })
        };
        for q in FIXTURE_QS {
            let field = FieldSpec::new(q)?;
            for g in 0..=FIXTURE_MAX_G {
                for s in bound_statistics(field, g, DEFAULT_BUDGET, DEFAULT_SAMPLE, DEFAULT_SEED)? {
                    push(s.name, field.q(), g, s.grid, s.value);
                }
            }
        }
        let field = FieldSpec::new(5)?;
        let trend = |sample: Option<usize>, g: usize| -> Result<(String, f64)> {
            let mut config = Config::new(field, g, Mode::SumL);
            config.sample = sample;
            let grid = select(&config, 2 * g + 2)?.grid(DEFAULT_SEED);
            let (rows, _) = run_sum_l(&config)?;
            let stat = rows
                .iter()
                .find(|r| r.name == "l_sum_main_term")
                .and_then(|r| r.rel_errors.get("scaled_error").copied())
                .expect("sum-l reports its scaled error");
            Ok((grid, stat))
        };
        for g in 0..=2 {
            let (grid, stat) = trend(None, g)?;
            push("l_sum_scaled_error", 5, g, grid, FixtureValue::real(stat));
        }
        let (grid, stat) = trend(Some(DEFAULT_SAMPLE), 2)?;
        push("l_sum_scaled_error", 5, 2, grid, FixtureValue::real(stat));
        let config = Config::new(field, 1, Mode::AvgOdd);
        let (rows, _) = run_average_odd(&config)?;
        let rel = rows[1].rel_errors["odd_main_term"];
        push("odd_average_rel_error", 5, 1, "exhaustive".into(), FixtureValue::real(rel));
        push(
            "odd_average_envelope",
            5,
            1,
            format!("epsilon={DEFAULT_EPSILON}"),
            FixtureValue::real(odd_envelope(field, 1, DEFAULT_EPSILON)?),
        );
        Ok(Fixtures {
            version: env!("CARGO_PKG_VERSION").into(),
            entries,
        })
    })
}
