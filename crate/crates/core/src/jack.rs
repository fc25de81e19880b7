//! Jack symmetric functions `P_lambda^(alpha)` by Gram-Schmidt on monomial
//! symmetric functions, and the eigen-diagonality of the deformed
//! cut-and-join operator on them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ops::{grading, w0_beta};
use crate::partition::{self, Partition};
use crate::rational::{qu, Q};
use crate::report::{Check, Report};
use crate::symfun::{hall_inner, power_monomial_matrix, SymFun};

/// Largest degree accepted by the diagonality suite.
pub const MAX_DIAGONALITY_N: usize = 6;

/// Linear extensions of dominance used to order Gram-Schmidt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refinement {
    /// Lexicographic order, smallest first.
    Lexicographic,
    /// By `n(lambda)` descending, ties broken reverse-lexicographically.
    NStatistic,
}

impl Refinement {
    fn order(self, n: usize) -> Vec<Partition> {
        // enumerate() is reverse-lex, so reversing gives lex increasing
        let mut parts: Vec<Partition> = partition::enumerate(n).into_iter().rev().collect();
        if self == Refinement::NStatistic {
            parts.reverse();
            parts.sort_by_key(|p| std::cmp::Reverse(p.n_statistic()));
        }
        parts
    }
}

/// Monomial symmetric functions of degree `n` in power sums.
pub fn monomials_in_power_sums(n: usize) -> Result<BTreeMap<Partition, SymFun>> {
    let basis = partition::enumerate(n);
    let inv = power_monomial_matrix(n).inverse()?;
    Ok(basis
        .iter()
        .enumerate()
        .map(|(i, lambda)| {
            let f = SymFun::from_terms(
                basis
                    .iter()
                    .enumerate()
                    .map(|(j, mu)| (mu.clone(), inv[(i, j)].clone())),
            );
            (lambda.clone(), f)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct JackBasis {
    n: usize,
    alpha: Q,
    vectors: BTreeMap<Partition, SymFun>,
}

impl JackBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &Q {
        &self.alpha
    }

    pub fn get(&self, lambda: &Partition) -> Option<&SymFun> {
        self.vectors.get(lambda)
    }

    pub fn vectors(&self) -> &BTreeMap<Partition, SymFun> {
        &self.vectors
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vectors: Vec<_> = self
            .vectors
            .iter()
            .map(|(lambda, f)| {
                serde_json::json!({
                    "partition": lambda,
                    "power_sum": f.to_json(),
                })
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "alpha": self.alpha.to_string(),
            "vectors": vectors,
        })
    }
}

pub fn build_jack(n: usize, alpha: &Q) -> Result<JackBasis> {
    build_jack_with(n, alpha, Refinement::Lexicographic)
}

/// Gram-Schmidt of `m_lambda` against every earlier `P_mu` in the given
/// refinement of dominance, under `<,>_alpha`.
pub fn build_jack_with(n: usize, alpha: &Q, order: Refinement) -> Result<JackBasis> {
    if alpha.is_zero() {
        return Err(Error::Singular("Jack parameter alpha = 0".into()));
    }
    let monomials = monomials_in_power_sums(n)?;
    let mut done: Vec<(Partition, SymFun, Q)> = Vec::new();
    for lambda in order.order(n) {
        let m = &monomials[&lambda];
        let mut f = m.clone();
        for (_, g, norm) in &done {
            let c = hall_inner(m, g, alpha)? / norm;
            if !c.is_zero() {
                f = &f - &g.scale(&c);
            }
        }
        let norm = hall_inner(&f, &f, alpha)?;
        if norm.is_zero() {
            return Err(Error::Singular(format!(
                "Gram-Schmidt pivot <P{lambda}, P{lambda}> vanishes at alpha = {alpha}"
            )));
        }
        done.push((lambda, f, norm));
    }
    Ok(JackBasis {
        n,
        alpha: alpha.clone(),
        vectors: done.into_iter().map(|(l, f, _)| (l, f)).collect(),
    })
}

/// `prod_s (alpha a + l + alpha) / (alpha a + l + 1)`, the squared norm of
/// `P_lambda` under `<,>_alpha`.
pub fn jack_norm(lambda: &Partition, alpha: &Q) -> Q {
    lambda
        .boxes()
        .map(|(i, j)| {
            let (a, l) = lambda.arm_leg(i, j).expect("box of lambda");
            let aa = alpha * qu(a);
            (&aa + qu(l) + alpha) / (aa + qu(l) + Q::one())
        })
        .product()
}

/// Checks that `beta C + J + (1-beta)/2 D` is diagonal on the Jack basis at
/// `alpha = 1/beta`; the eigenvalues go into the report data. At `beta = 1`
/// they are also compared against content sums.
pub fn verify_jack_diagonality(n: usize, beta: &Q) -> Result<Report> {
    if n > MAX_DIAGONALITY_N {
        return Err(Error::CapExceeded {
            what: "Jack diagonality degree n",
            value: n,
            cap: MAX_DIAGONALITY_N,
        });
    }
    if beta.is_zero() {
        return Err(Error::InvalidParameter("beta must be nonzero".into()));
    }
    let alpha = beta.recip();
    let basis = build_jack(n, &alpha)?;
    let op = w0_beta(beta, &Q::zero(), false);
    let e = grading();
    let mut report = Report::new("jack")
        .param("n", n)
        .param("beta", beta)
        .param("alpha", &alpha);
    let mut table = Vec::new();
    for (lambda, p) in basis.vectors() {
        let image = op.apply(p)?;
        let eigen = image
            .to_monomial_basis()
            .map(|c| c.get(lambda).cloned().unwrap_or_else(Q::zero))
            .unwrap_or_else(|_| Q::zero());
        report.push(Check::compare(
            format!("P{lambda} is an eigenvector"),
            &p.scale(&eigen),
            &image,
        ));
        report.push(Check::compare(
            format!("E P{lambda} = {n} P{lambda}"),
            &p.scale(&qu(n)),
            &e.apply(p)?,
        ));
        if beta.is_one() {
            report.push(Check::compare(
                format!("eigenvalue of P{lambda} is its content sum"),
                &Q::from_integer(lambda.content_sum().into()),
                &eigen,
            ));
        }
        table.push(serde_json::json!({"partition": lambda, "eigenvalue": eigen.to_string()}));
    }
    report.data = Some(serde_json::json!({ "eigenvalues": table }));
    Ok(report)
}
