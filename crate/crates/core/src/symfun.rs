//! Symmetric functions as sparse exact combinations of power-sum
//! monomials `p_lambda`.
//!
//! Terms are kept in a `BTreeMap` keyed by the canonical partition order,
//! so iteration, printing and serialization are deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::partition::{self, Partition};
use crate::rational::{parse_q, pow, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymFun {
    terms: BTreeMap<Partition, Q>,
}

impl SymFun {
    pub fn zero() -> Self {
        SymFun::default()
    }

    pub fn one() -> Self {
        SymFun::p(Partition::empty())
    }

    /// The power-sum monomial `p_lambda`.
    pub fn p(lambda: Partition) -> Self {
        SymFun::monomial(lambda, Q::one())
    }

    /// The normalized basis vector `v_lambda = p_lambda / z_lambda`.
    pub fn v(lambda: Partition) -> Self {
        let z = Q::from_integer(lambda.z_factor());
        SymFun::monomial(lambda, z.recip())
    }

    pub fn monomial(lambda: Partition, c: Q) -> Self {
        let mut f = SymFun::zero();
        f.add_term(lambda, c);
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Partition, Q)>) -> Self {
        let mut f = SymFun::zero();
        for (l, c) in terms {
            f.add_term(l, c);
        }
        f
    }

    /// Adds `c * p_lambda`, dropping the entry if it cancels.
    pub fn add_term(&mut self, lambda: Partition, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(lambda) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Partition, Q> {
        self.terms
    }

    pub fn coeff(&self, lambda: &Partition) -> Q {
        self.terms.get(lambda).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q) -> SymFun {
        if c.is_zero() {
            return SymFun::zero();
        }
        SymFun {
            terms: self.terms.iter().map(|(l, x)| (l.clone(), x * c)).collect(),
        }
    }

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Partition::size).collect();
        d.dedup();
        d
    }

    /// The single degree of a homogeneous function; zero counts as degree 0.
    pub fn homogeneous_degree(&self) -> Result<usize> {
        match self.degrees().as_slice() {
            [] => Ok(0),
            [d] => Ok(*d),
            ds => Err(Error::Inhomogeneous(ds.to_vec())),
        }
    }

    pub fn component(&self, n: usize) -> SymFun {
        SymFun {
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.size() == n)
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coordinates in the basis `v_lambda = p_lambda / z_lambda`.
    pub fn normalized_basis_coords(&self) -> BTreeMap<Partition, Q> {
        self.terms
            .iter()
            .map(|(l, c)| (l.clone(), c * Q::from_integer(l.z_factor())))
            .collect()
    }

    pub fn from_normalized_coords(coords: &BTreeMap<Partition, Q>) -> SymFun {
        SymFun::from_terms(
            coords
                .iter()
                .map(|(l, c)| (l.clone(), c / Q::from_integer(l.z_factor()))),
        )
    }

    /// Coordinates in the monomial symmetric basis `m_lambda`.
    pub fn to_monomial_basis(&self) -> Result<BTreeMap<Partition, Q>> {
        let n = self.homogeneous_degree()?;
        let mut out: BTreeMap<Partition, Q> = BTreeMap::new();
        for (mu, c) in &self.terms {
            for lambda in partition::enumerate(n) {
                let r = power_to_monomial(mu, &lambda);
                if r > 0 {
                    *out.entry(lambda).or_insert_with(Q::zero) += c * Q::from(num_bigint::BigInt::from(r));
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Inverse of [`SymFun::to_monomial_basis`] on degree `n`.
    pub fn from_monomial_basis(n: usize, coords: &BTreeMap<Partition, Q>) -> Result<SymFun> {
        if let Some(bad) = coords.keys().find(|l| l.size() != n) {
            return Err(Error::Inhomogeneous(vec![n, bad.size()]));
        }
        let basis = partition::enumerate(n);
        let inv = power_monomial_matrix(n).inverse()?;
        // row mu of the transition matrix holds p_mu in monomial coordinates,
        // so monomial row vector x maps to power-sum row vector x * inv
        let x: Vec<Q> = basis
            .iter()
            .map(|l| coords.get(l).cloned().unwrap_or_else(Q::zero))
            .collect();
        let mut f = SymFun::zero();
        for (j, mu) in basis.iter().enumerate() {
            let c: Q = x.iter().enumerate().map(|(i, xi)| xi * &inv[(i, j)]).sum();
            f.add_term(mu.clone(), c);
        }
        Ok(f)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(l, c)| TermJson {
                partition: l.clone(),
                coeff: c.to_string(),
            })
            .collect();
        serde_json::to_value(list).expect("symfun serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SymFun> {
        let list: Vec<TermJson> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut f = SymFun::zero();
        for t in list {
            f.add_term(t.partition, parse_q(&t.coeff)?);
        }
        Ok(f)
    }

    /// Renders the function in the `v` basis, e.g. `3*v[3,1] + 2*v[2,2]`.
    pub fn display_v(&self) -> String {
        format_terms(&self.normalized_basis_coords(), 'v')
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    partition: Partition,
    coeff: String,
}

/// Number of maps `f` from the parts of `mu` to the rows of `lambda` whose
/// fibres sum to the row lengths: the coefficient of `m_lambda` in `p_mu`.
pub fn power_to_monomial(mu: &Partition, lambda: &Partition) -> u64 {
    fn rec(parts: &[usize], remaining: &mut [usize]) -> u64 {
        let Some((&first, rest)) = parts.split_first() else {
            return u64::from(remaining.iter().all(|&r| r == 0));
        };
        let mut total = 0;
        for i in 0..remaining.len() {
            if remaining[i] >= first {
                remaining[i] -= first;
                total += rec(rest, remaining);
                remaining[i] += first;
            }
        }
        total
    }
    if mu.size() != lambda.size() {
        return 0;
    }
    let mut remaining = lambda.parts().to_vec();
    rec(mu.parts(), &mut remaining)
}

/// Transition matrix with rows `p_mu` and columns `m_lambda`, both in
/// canonical order.
pub fn power_monomial_matrix(n: usize) -> Matrix {
    let basis = partition::enumerate(n);
    Matrix::from_rows(
        basis
            .iter()
            .map(|mu| {
                basis
                    .iter()
                    .map(|l| Q::from(num_bigint::BigInt::from(power_to_monomial(mu, l))))
                    .collect()
            })
            .collect(),
    )
}

/// Deformed Hall pairing `<p_lambda, p_mu> = delta z_lambda alpha^len`.
pub fn hall_inner(f: &SymFun, g: &SymFun, alpha: &Q) -> Result<Q> {
    if alpha.is_zero() {
        return Err(Error::InvalidParameter("hall_inner requires alpha != 0".into()));
    }
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    Ok(small
        .terms
        .iter()
        .filter_map(|(l, a)| {
            large.terms.get(l).map(|b| {
                a * b * Q::from_integer(l.z_factor()) * pow(alpha, l.len() as i64)
            })
        })
        .sum())
}

impl Add for &SymFun {
    type Output = SymFun;
    fn add(self, rhs: &SymFun) -> SymFun {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }
}

impl Add for SymFun {
    type Output = SymFun;
    fn add(self, rhs: SymFun) -> SymFun {
        &self + &rhs
    }
}

impl Sub for &SymFun {
    type Output = SymFun;
    fn sub(self, rhs: &SymFun) -> SymFun {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), -c.clone());
        }
        out
    }
}

impl Sub for SymFun {
    type Output = SymFun;
    fn sub(self, rhs: SymFun) -> SymFun {
        &self - &rhs
    }
}

impl Neg for &SymFun {
    type Output = SymFun;
    fn neg(self) -> SymFun {
        self.scale(&-Q::one())
    }
}

impl Mul for &SymFun {
    type Output = SymFun;
    fn mul(self, rhs: &SymFun) -> SymFun {
        let mut out = SymFun::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.union(b), x * y);
            }
        }
        out
    }
}

impl Mul for SymFun {
    type Output = SymFun;
    fn mul(self, rhs: SymFun) -> SymFun {
        &self * &rhs
    }
}

fn format_terms(terms: &BTreeMap<Partition, Q>, symbol: char) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (l, c)) in terms.iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let parts: Vec<String> = l.parts().iter().map(ToString::to_string).collect();
        if mag.is_one() {
            out.push_str(&format!("{symbol}[{}]", parts.join(",")));
        } else {
            out.push_str(&format!("{mag}*{symbol}[{}]", parts.join(",")));
        }
    }
    out
}

impl fmt::Display for SymFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(&self.terms, 'p'))
    }
}

/// Parses sums such as `3/2*p[2,1] + p[4] - v[1,1]` or a bare rational.
/// Terms in `v[...]` are read as `p[...] / z`.
impl FromStr for SymFun {
    type Err = Error;

    fn from_str(s: &str) -> Result<SymFun> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty symmetric function".into()));
        }
        let mut f = SymFun::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes().first() {
                Some(b'+') => (Q::one(), &piece[1..]),
                Some(b'-') => (-Q::one(), &piece[1..]),
                _ => (Q::one(), piece),
            };
            let (lambda, c) = parse_term(body)?;
            f.add_term(lambda, sign * c);
        }
        Ok(f)
    }
}

fn parse_term(body: &str) -> Result<(Partition, Q)> {
    let bad = || Error::Parse(format!("malformed term {body:?}"));
    let (coef, basis) = match body.find(['p', 'v']) {
        None => return Ok((Partition::empty(), parse_q(body)?)),
        Some(0) => (Q::one(), body),
        Some(i) => {
            let c = body[..i].strip_suffix('*').ok_or_else(bad)?;
            (parse_q(c)?, &body[i..])
        }
    };
    let symbol = basis.as_bytes()[0];
    let inner = basis[1..]
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(bad)?;
    let parts = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|x| x.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?
    };
    if parts.contains(&0) {
        return Err(bad());
    }
    let lambda = Partition::from_multiset(parts);
    let c = if symbol == b'v' {
        coef / Q::from_integer(lambda.z_factor())
    } else {
        coef
    };
    Ok((lambda, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition;
    use crate::rational::{frac, q};
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> SymFun {
        SymFun::p(Partition::from_multiset(parts.to_vec()))
    }

    #[test]
    fn products() {
        assert_eq!(&p(&[2]) * &p(&[1]), p(&[2, 1]));
        assert_eq!(&p(&[1]) * &p(&[1]), p(&[1, 1]));
        assert_eq!(&(&p(&[2]) + &p(&[1, 1])) * &p(&[1]), &p(&[2, 1]) + &p(&[1, 1, 1]));
    }

    #[test]
    fn hall_pairing_values() {
        assert_eq!(hall_inner(&p(&[2]), &p(&[2]), &q(1)).unwrap(), q(2));
        assert_eq!(hall_inner(&p(&[2]), &p(&[1, 1]), &q(1)).unwrap(), q(0));
        assert_eq!(hall_inner(&p(&[1, 1]), &p(&[1, 1]), &q(2)).unwrap(), q(8));
        assert!(hall_inner(&p(&[1]), &p(&[1]), &q(0)).is_err());
    }

    #[test]
    fn normalized_coordinates() {
        let c = p(&[3, 1]).normalized_basis_coords();
        assert_eq!(c[&partition![3, 1]], q(3));
        let c = p(&[1, 1, 1, 1]).normalized_basis_coords();
        assert_eq!(c[&partition![1, 1, 1, 1]], q(24));
        assert!(SymFun::zero().normalized_basis_coords().is_empty());
    }

    /// Expands `prod_i p_{mu_i}(x_1..x_k)` as a polynomial in `k` variables.
    fn expand_power_sum(mu: &Partition, k: usize) -> BTreeMap<Vec<usize>, i64> {
        let mut poly: BTreeMap<Vec<usize>, i64> = BTreeMap::from([(vec![0; k], 1)]);
        for &part in mu.parts() {
            let mut next = BTreeMap::new();
            for (exp, c) in &poly {
                for var in 0..k {
                    let mut e = exp.clone();
                    e[var] += part;
                    *next.entry(e).or_insert(0) += c;
                }
            }
            poly = next;
        }
        poly
    }

    #[test]
    fn monomial_transition_matches_polynomial_evaluation() {
        for n in 1..=7 {
            for mu in partition::enumerate(n) {
                let poly = expand_power_sum(&mu, n);
                let coords = p(mu.parts()).to_monomial_basis().unwrap();
                for lambda in partition::enumerate(n) {
                    // coefficient of m_lambda equals that of x^lambda
                    let mut exp = lambda.parts().to_vec();
                    exp.resize(n, 0);
                    let expected = poly.get(&exp).copied().unwrap_or(0);
                    let got = coords.get(&lambda).cloned().unwrap_or_else(Q::zero);
                    assert_eq!(got, q(expected), "p{mu} on m{lambda}");
                }
            }
        }
    }

    #[test]
    fn degree_two_monomial_rows() {
        // fixed by the evaluation oracle above
        let c = p(&[2]).to_monomial_basis().unwrap();
        assert_eq!(c, BTreeMap::from([(partition![2], q(1))]));
        let c = p(&[1, 1]).to_monomial_basis().unwrap();
        assert_eq!(
            c,
            BTreeMap::from([(partition![2], q(1)), (partition![1, 1], q(2))])
        );
        assert_eq!(
            p(&[1]).to_monomial_basis().unwrap(),
            BTreeMap::from([(partition![1], q(1))])
        );
        assert!((&p(&[1]) + &p(&[2])).to_monomial_basis().is_err());
    }

    #[test]
    fn monomial_round_trip() {
        for n in 0..=8 {
            assert!(!power_monomial_matrix(n).det().is_zero());
            for mu in partition::enumerate(n) {
                let f = p(mu.parts()).scale(&frac(3, 7));
                let back =
                    SymFun::from_monomial_basis(n, &f.to_monomial_basis().unwrap()).unwrap();
                assert_eq!(back, f);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let f: SymFun = "3/2*p[2,1] + p[4]".parse().unwrap();
        assert_eq!(f.coeff(&partition![2, 1]), frac(3, 2));
        assert_eq!(f.to_string(), "3/2*p[2,1] + p[4]");
        let g: SymFun = "4*p[3,1] + 2*p[2,2]".parse().unwrap();
        assert_eq!(g.to_string(), "4*p[3,1] + 2*p[2,2]");
        let h: SymFun = "-p[1] - 1/2*p[2] + 3".parse().unwrap();
        assert_eq!(h.to_string(), "3*p[] - p[1] - 1/2*p[2]");
        let v: SymFun = "v[2,1,1]".parse().unwrap();
        assert_eq!(v, p(&[2, 1, 1]).scale(&frac(1, 4)));
        assert_eq!(v.display_v(), "v[2,1,1]");
        assert!("p[2".parse::<SymFun>().is_err());
        assert!("2p[1]".parse::<SymFun>().is_err());
        assert!("".parse::<SymFun>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f: SymFun = "3/2*p[2,1] - p[4]".parse().unwrap();
        let j = f.to_json();
        assert_eq!(
            j.to_string(),
            r#"[{"coeff":"3/2","partition":[2,1]},{"coeff":"-1","partition":[4]}]"#
        );
        assert_eq!(SymFun::from_json(&j).unwrap(), f);
    }

    fn arb_symfun() -> impl Strategy<Value = SymFun> {
        let term = (1usize..=4, -5i64..=5, 1i64..=3).prop_flat_map(|(n, a, b)| {
            (0..partition::count(n)).prop_map(move |i| {
                (partition::enumerate(n)[i].clone(), frac(a, b))
            })
        });
        proptest::collection::vec(term, 0..4).prop_map(SymFun::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_symfun(), g in arb_symfun(), h in arb_symfun()) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn hall_pairing_symmetric_bilinear(
            f in arb_symfun(), g in arb_symfun(), h in arb_symfun(),
            a in 1i64..5, b in 1i64..4,
        ) {
            let alpha = frac(a, b);
            let fg = hall_inner(&f, &g, &alpha).unwrap();
            prop_assert_eq!(&fg, &hall_inner(&g, &f, &alpha).unwrap());
            let lhs = hall_inner(&(&f + &g.scale(&q(3))), &h, &alpha).unwrap();
            let rhs = hall_inner(&f, &h, &alpha).unwrap() + q(3) * hall_inner(&g, &h, &alpha).unwrap();
            prop_assert_eq!(lhs, rhs);
            if !f.is_zero() {
                prop_assert!(hall_inner(&f, &f, &alpha).unwrap() > Q::zero());
            }
        }

        #[test]
        fn text_form_round_trips(f in arb_symfun()) {
            let back: SymFun = f.to_string().parse().unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
