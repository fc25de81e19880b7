//! Exact moments of the Gaussian beta-ensemble for integer `beta`, the
//! truncated partition function and its Virasoro and cubic constraints.
//!
//! Expectations are normalized by the `t = 0` integral, so the Gaussian
//! and Selberg-type constants cancel and every number is rational:
//! `<f> = int f |Delta|^{2 beta} e^{-|x|^2/2} / int |Delta|^{2 beta} e^{-|x|^2/2}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{self, Operator};
use crate::partition::{self, Partition};
use crate::rational::{factorial, frac, q, qu, sqrt_exact, Q};
use crate::report::{Check, Report};
use crate::symfun::SymFun;

pub const MAX_N: usize = 4;
pub const MAX_TOTAL_DEGREE: usize = 40;

/// Ensemble parameters: `N` eigenvalues and Vandermonde exponent `2 beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ensemble {
    pub n: usize,
    pub beta: usize,
}

type Poly = BTreeMap<Vec<u32>, BigInt>;

impl Ensemble {
    pub fn new(n: usize, beta: usize) -> Result<Self> {
        if !(1..=3).contains(&beta) {
            return Err(Error::InvalidParameter(format!(
                "beta must be 1, 2 or 3 for exact moments, got {beta}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        if n > MAX_N {
            return Err(Error::CapExceeded {
                what: "N",
                value: n,
                cap: MAX_N,
            });
        }
        Ok(Ensemble { n, beta })
    }

    /// Accepts `beta` given as a rational, rejecting non-integers.
    pub fn from_rational(n: usize, beta: &Q) -> Result<Self> {
        if !beta.is_integer() || *beta < Q::one() {
            return Err(Error::InvalidParameter(format!(
                "beta must be a positive integer for exact moments, got {beta}"
            )));
        }
        let b: usize = beta
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidParameter(format!("beta out of range: {beta}")))?;
        Ensemble::new(n, b)
    }

    pub fn beta_q(&self) -> Q {
        qu(self.beta)
    }

    pub fn n_q(&self) -> Q {
        qu(self.n)
    }

    fn vandermonde_degree(&self) -> usize {
        self.beta * self.n * (self.n - 1)
    }

    fn check_degree(&self, weight: usize) -> Result<()> {
        let total = self.vandermonde_degree() + weight;
        if total > MAX_TOTAL_DEGREE {
            return Err(Error::CapExceeded {
                what: "total monomial degree",
                value: total,
                cap: MAX_TOTAL_DEGREE,
            });
        }
        Ok(())
    }
}

/// `prod_{i<j} (x_i - x_j)^{2 beta}` expanded into monomials.
fn vandermonde_power(e: &Ensemble) -> Poly {
    let mut poly: Poly = BTreeMap::from([(vec![0; e.n], BigInt::one())]);
    for i in 0..e.n {
        for j in i + 1..e.n {
            for _ in 0..2 * e.beta {
                let mut next = Poly::new();
                for (exp, c) in &poly {
                    let mut a = exp.clone();
                    a[i] += 1;
                    *next.entry(a).or_insert_with(BigInt::zero) += c;
                    let mut b = exp.clone();
                    b[j] += 1;
                    *next.entry(b).or_insert_with(BigInt::zero) -= c;
                }
                next.retain(|_, c| !c.is_zero());
                poly = next;
            }
        }
    }
    poly
}

/// `(m - 1)!!` for even `m`, the standard Gaussian moment of `x^m`.
fn gaussian_1d(m: u32) -> BigInt {
    if m % 2 == 1 {
        return BigInt::zero();
    }
    (1..m).step_by(2).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Moment engine holding the expanded Vandermonde factor and a cache of
/// weighted monomial integrals keyed by sorted exponent vectors.
pub struct MomentEngine {
    ensemble: Ensemble,
    vandermonde: Poly,
    norm: BigInt,
    cache: BTreeMap<Vec<u32>, BigInt>,
}

impl MomentEngine {
    pub fn new(ensemble: Ensemble) -> Self {
        let vandermonde = vandermonde_power(&ensemble);
        let mut engine = MomentEngine {
            ensemble,
            vandermonde,
            norm: BigInt::one(),
            cache: BTreeMap::new(),
        };
        engine.norm = engine.weighted_integral(vec![0; ensemble.n]);
        engine
    }

    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    /// Unnormalized `int x^a |Delta|^{2 beta} dgamma`; the weight is
    /// symmetric, so the exponent vector may be sorted first.
    fn weighted_integral(&mut self, mut a: Vec<u32>) -> BigInt {
        a.sort_unstable();
        if let Some(v) = self.cache.get(&a) {
            return v.clone();
        }
        let total: BigInt = self
            .vandermonde
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(&a)
                    .fold(c.clone(), |acc, (x, y)| acc * gaussian_1d(x + y))
            })
            .sum();
        self.cache.insert(a, total.clone());
        total
    }

    /// `<p_mu>` exactly.
    pub fn moment(&mut self, mu: &Partition) -> Result<Q> {
        self.ensemble.check_degree(mu.size())?;
        if mu.size() % 2 == 1 {
            return Ok(Q::zero());
        }
        // expand p_mu over the N variables
        let n = self.ensemble.n;
        let mut expansion: BTreeMap<Vec<u32>, BigInt> =
            BTreeMap::from([(vec![0; n], BigInt::one())]);
        for &part in mu.parts() {
            let mut next = BTreeMap::new();
            for (e, c) in &expansion {
                for i in 0..n {
                    let mut a = e.clone();
                    a[i] += part as u32;
                    *next.entry(a).or_insert_with(BigInt::zero) += c;
                }
            }
            expansion = next;
        }
        let mut total = BigInt::zero();
        for (a, c) in expansion {
            total += c * self.weighted_integral(a);
        }
        Ok(Q::new(total, self.norm.clone()))
    }

    /// Moments of every `p_mu` with `|mu| <= d`.
    pub fn table(&mut self, d: usize) -> Result<MomentTable> {
        let mut moments = BTreeMap::new();
        for w in 0..=d {
            for mu in partition::enumerate(w) {
                let m = self.moment(&mu)?;
                moments.insert(mu, m);
            }
        }
        Ok(MomentTable {
            ensemble: self.ensemble,
            max_weight: d,
            moments,
        })
    }
}

/// Single expectation `<p_mu>`.
pub fn gaussian_moment(mu: &Partition, ensemble: Ensemble) -> Result<Q> {
    MomentEngine::new(ensemble).moment(mu)
}

#[derive(Clone, Debug)]
pub struct MomentTable {
    pub ensemble: Ensemble,
    pub max_weight: usize,
    pub moments: BTreeMap<Partition, Q>,
}

impl MomentTable {
    pub fn get(&self, mu: &Partition) -> Option<&Q> {
        self.moments.get(mu)
    }

    /// Formal partition function `Z(t) = <exp(sum_k t_k p_k(x))>`, truncated
    /// at weight `d`: the coefficient of `prod_i t_{mu_i}` is
    /// `<p_mu> / prod_k m_k(mu)!`.
    pub fn series(&self) -> TruncatedSeries {
        let coeffs = self
            .moments
            .iter()
            .map(|(mu, m)| {
                let aut: BigInt = mu
                    .multiplicities()
                    .into_iter()
                    .map(|(_, c)| factorial(c))
                    .product();
                (mu.clone(), m / Q::from_integer(aut))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TruncatedSeries {
            max_weight: self.max_weight,
            coeffs,
        }
    }

    /// The same function in power sums: `Z = sum_mu <p_mu> p_mu / z_mu`.
    pub fn p_series(&self) -> SymFun {
        SymFun::from_terms(
            self.moments
                .iter()
                .map(|(mu, m)| (mu.clone(), m / Q::from_integer(mu.z_factor()))),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.ensemble.n,
            "beta": self.ensemble.beta,
            "max_weight": self.max_weight,
            "moments": self.moments.iter().map(|(mu, m)| serde_json::json!({
                "partition": mu,
                "moment": m.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Build `Z` for the given ensemble up to weight `d`.
pub fn build_z_series(ensemble: Ensemble, d: usize) -> Result<TruncatedSeries> {
    Ok(MomentEngine::new(ensemble).table(d)?.series())
}

/// A power series in the times `t_1, t_2, ...`, keyed by the multiset of
/// indices of each monomial and truncated at total weight `max_weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub max_weight: usize,
    pub coeffs: BTreeMap<Partition, Q>,
}

impl TruncatedSeries {
    pub fn coeff(&self, mu: &Partition) -> Q {
        self.coeffs.get(mu).cloned().unwrap_or_else(Q::zero)
    }

    /// `d/dt_k` on every stored monomial.
    fn derive(&self, k: usize) -> BTreeMap<Partition, Q> {
        self.coeffs
            .iter()
            .filter_map(|(mu, c)| {
                let m = mu.multiplicity(k);
                (m > 0).then(|| (mu.without_part(k).expect("part present"), c * qu(m)))
            })
            .collect()
    }
}

fn accumulate(out: &mut BTreeMap<Partition, Q>, terms: BTreeMap<Partition, Q>, scale: &Q, times: Option<usize>) {
    for (mu, c) in terms {
        let key = match times {
            Some(k) => mu.with_part(k),
            None => mu,
        };
        *out.entry(key).or_insert_with(Q::zero) += c * scale;
    }
}

/// Result of applying a constraint: the coefficients that are fully
/// determined by the truncated input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintImage {
    /// Largest output weight whose coefficients are exact.
    pub exact_weight: Option<usize>,
    pub coeffs: BTreeMap<Partition, Q>,
}

impl ConstraintImage {
    pub fn nonzero(&self) -> Vec<(Partition, Q)> {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (p.clone(), c.clone()))
            .collect()
    }
}

/// Applies `L_n` directly in the times:
/// `sum_k k t_k d_{k+n} + beta sum_{a+b=n} d_a d_b
///  + ((1-beta)(n+1) + 2 beta N) d_n` with `d_0 = N`, plus `-d_{n+2}` when
/// `shifted`.
pub fn apply_ln_to_series(
    n: i64,
    beta: &Q,
    big_n: &Q,
    series: &TruncatedSeries,
    shifted: bool,
) -> Result<ConstraintImage> {
    if n < -1 {
        return Err(Error::InvalidParameter(format!(
            "Virasoro index must be >= -1, got {n}"
        )));
    }
    let one = Q::one();
    let d = series.max_weight as i64;
    let reach = if shifted { n + 2 } else { n.max(0) };
    let exact = d - reach;
    let mut out: BTreeMap<Partition, Q> = BTreeMap::new();
    let max_k = series.max_weight + 1;
    for k in 1..=max_k {
        let target = k as i64 + n;
        if target >= 1 {
            accumulate(&mut out, series.derive(target as usize), &qu(k), Some(k));
        } else if target == 0 {
            accumulate(&mut out, series.coeffs.clone(), &(qu(k) * big_n), Some(k));
        }
    }
    if n >= 2 {
        for a in 1..n as usize {
            let b = n as usize - a;
            let inner = TruncatedSeries {
                max_weight: series.max_weight,
                coeffs: series.derive(a),
            };
            accumulate(&mut out, inner.derive(b), beta, None);
        }
    }
    let linear = (&one - beta) * q(n + 1) + q(2) * beta * big_n;
    match n {
        -1 => {}
        0 => {
            let c = beta * big_n * big_n + (&one - beta) * big_n;
            accumulate(&mut out, series.coeffs.clone(), &c, None);
        }
        _ => accumulate(&mut out, series.derive(n as usize), &linear, None),
    }
    if shifted {
        accumulate(&mut out, series.derive((n + 2) as usize), &-one, None);
    }
    let exact_weight = (exact >= 0).then_some(exact as usize);
    out.retain(|mu, c| !c.is_zero() && exact_weight.is_some_and(|w| mu.size() <= w));
    Ok(ConstraintImage {
        exact_weight,
        coeffs: out,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintCheck {
    pub label: String,
    pub exact_weight: Option<usize>,
    pub passed: bool,
    /// Nonzero coefficients, as `(monomial, value)` pairs.
    pub witnesses: Vec<(Partition, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    pub ensemble: Ensemble,
    pub max_weight: usize,
    pub shifted: bool,
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn into_report(self, suite: &str) -> Report {
        let mut r = Report::new(suite)
            .param("N", self.ensemble.n)
            .param("beta", self.ensemble.beta)
            .param("d", self.max_weight)
            .param("shifted", self.shifted);
        for c in self.checks {
            let label = match c.exact_weight {
                Some(w) => format!("{} (weights <= {w})", c.label),
                None => format!("{} (no computable weights)", c.label),
            };
            if c.passed {
                r.push(Check::pass(label));
            } else {
                let witnesses: Vec<String> =
                    c.witnesses.iter().map(|(p, v)| format!("{p}: {v}")).collect();
                r.push(Check::fail(label, "0", witnesses.join("; ")));
            }
        }
        r
    }
}

fn check_from_image(label: String, image: ConstraintImage) -> ConstraintCheck {
    let witnesses: Vec<(Partition, String)> = image
        .nonzero()
        .into_iter()
        .map(|(p, c)| (p, c.to_string()))
        .collect();
    ConstraintCheck {
        label,
        exact_weight: image.exact_weight,
        passed: witnesses.is_empty(),
        witnesses,
    }
}

/// Checks `L_n Z = 0` on every computable coefficient for `n` in `range`.
pub fn verify_virasoro(
    ensemble: Ensemble,
    d: usize,
    range: std::ops::RangeInclusive<i64>,
    shifted: bool,
) -> Result<ConstraintReport> {
    let series = build_z_series(ensemble, d)?;
    let (beta, big_n) = (ensemble.beta_q(), ensemble.n_q());
    let mut checks = Vec::new();
    for n in range {
        let image = apply_ln_to_series(n, &beta, &big_n, &series, shifted)?;
        checks.push(check_from_image(format!("L{n}"), image));
    }
    Ok(ConstraintReport {
        ensemble,
        max_weight: d,
        shifted,
        checks,
    })
}

/// `1/2 sum_{n>=1} p_n L_n`, reading the prefactor `n p_n` as `n t_n`,
/// exact on inputs up to `window`.
pub fn w0_from_virasoro(beta: &Q, big_n: &Q, shifted: bool, window: usize) -> Result<Operator> {
    let mut acc = Operator::zero();
    for n in 1..=window + 2 {
        let l = ops::virasoro(n as i64, beta, big_n, shifted)?;
        let pn = Operator::multiply_by(Partition::single(n));
        let term = ops::compose(&pn, &l, window)?;
        acc = acc.combine(&Q::one(), &term, &frac(1, 2));
    }
    Ok(acc.with_name("1/2 sum p_n L_n"))
}

/// Applies the cubic operator to `Z` written in power sums and checks that
/// every computable coefficient vanishes; additionally compares it term by
/// term with `1/2 sum p_n L_n`.
pub fn verify_w0_constraint(ensemble: Ensemble, d: usize, shifted: bool) -> Result<ConstraintReport> {
    let table = MomentEngine::new(ensemble).table(d)?;
    let z = table.p_series();
    let (beta, big_n) = (ensemble.beta_q(), ensemble.n_q());
    let w0 = ops::w0_beta(&beta, &big_n, shifted);
    let image = w0.apply(&z)?;
    let exact = if shifted { d.checked_sub(2) } else { Some(d) };
    let coeffs = image
        .into_terms()
        .into_iter()
        .filter(|(mu, _)| exact.is_some_and(|w| mu.size() <= w))
        .collect();
    let mut checks = vec![check_from_image(
        "W0 Z".into(),
        ConstraintImage {
            exact_weight: exact,
            coeffs,
        },
    )];

    let window = d.min(6);
    let from_l = w0_from_virasoro(&beta, &big_n, shifted, window)?;
    let diff = w0.truncate(window).minus(&from_l);
    let witnesses: Vec<(Partition, String)> = diff
        .instantiate(window)
        .into_iter()
        .map(|t| {
            (
                t.create.clone(),
                format!("{}*d{}", t.coeff, t.annihilate),
            )
        })
        .collect();
    checks.push(ConstraintCheck {
        label: "W0 = 1/2 sum p_n L_n".into(),
        exact_weight: Some(window),
        passed: witnesses.is_empty(),
        witnesses,
    });
    Ok(ConstraintReport {
        ensemble,
        max_weight: d,
        shifted,
        checks,
    })
}

/// Same check for the closed form of `1/2 sum p_n L_n`, which differs from
/// the cubic operator above unless `beta = 1`.
pub fn verify_ward_cubic(ensemble: Ensemble, d: usize, shifted: bool) -> Result<ConstraintReport> {
    let z = MomentEngine::new(ensemble).table(d)?.p_series();
    let (beta, big_n) = (ensemble.beta_q(), ensemble.n_q());
    let image = ops::w0_from_ward(&beta, &big_n, shifted).apply(&z)?;
    let exact = if shifted { d.checked_sub(2) } else { Some(d) };
    let coeffs = image
        .into_terms()
        .into_iter()
        .filter(|(mu, _)| exact.is_some_and(|w| mu.size() <= w))
        .collect();
    let checks = vec![check_from_image(
        "1/2 sum p_n L_n Z".into(),
        ConstraintImage {
            exact_weight: exact,
            coeffs,
        },
    )];
    Ok(ConstraintReport {
        ensemble,
        max_weight: d,
        shifted,
        checks,
    })
}

/// Background charge `Q_b = (b - 1/b) / 2` with `b = sqrt(beta)`, defined
/// when `beta` is the square of a rational.
pub fn background_charge(beta: &Q) -> Result<Q> {
    let b = sqrt_exact(beta).ok_or_else(|| {
        Error::InvalidParameter(format!("beta = {beta} is not a rational square"))
    })?;
    if b.is_zero() {
        return Err(Error::InvalidParameter("beta must be nonzero".into()));
    }
    Ok((&b - b.recip()) / q(2))
}

/// Checks `(1 - beta)/2 = -sqrt(beta) Q_b` exactly.
pub fn check_background_charge(beta: &Q) -> Result<bool> {
    let qb = background_charge(beta)?;
    let b = sqrt_exact(beta).expect("checked above");
    Ok((Q::one() - beta) / q(2) == -b * qb)
}

/// Central charge `1 - 12 Q_b^2`.
pub fn central_charge(beta: &Q) -> Result<Q> {
    let qb = background_charge(beta)?;
    Ok(Q::one() - q(12) * &qb * &qb)
}
