//! Torus fixed points of the Hilbert scheme of points in the plane:
//! equivariant weights, Euler classes, the fixed-point basis of Fock space,
//! the Heisenberg normalization and the rim-hook cut/join graph.
//!
//! Conventions. A box `(i, j)` (row `i`, column `j`, 1-based) with arm `a`
//! and leg `l` contributes tangent weights `e1 (a+1) - e2 l` and
//! `-e1 a + e2 (l+1)` and the tautological weight `(j-1) e1 + (i-1) e2`.
//! The fixed-point class is `[lambda] = P_lambda^(alpha) / h'_lambda` with
//! `alpha = -e1/e2` and `h'_lambda = prod_s (alpha a + l + alpha)`; under
//! the localized pairing `<f, g>_loc = (-e2^2)^{-n} <f, g>_alpha` on degree
//! `n` this gives `<[lambda], [lambda]>_loc = 1 / e(T_lambda)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::basis::{matrix_in_basis, Basis};
use crate::error::{Error, Result};
use crate::jack::build_jack;
use crate::linalg::{LabeledMatrix, Matrix};
use crate::ops::{cut_and_join, Operator};
use crate::partition::{self, Partition};
use crate::rational::{pow, qu, Q};
use crate::report::{Check, Report};
use crate::symfun::SymFun;

/// Largest degree for the rim-hook graph.
pub const MAX_GRAPH_N: usize = 10;
/// Largest degree for the Heisenberg check.
pub const MAX_HEISENBERG_N: usize = 6;

/// Equivariant parameters `(e1, e2)`, both nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivParams {
    e1: Q,
    e2: Q,
}

impl EquivParams {
    pub fn new(e1: Q, e2: Q) -> Result<Self> {
        if e1.is_zero() || e2.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "equivariant parameters must be nonzero, got ({e1}, {e2})"
            )));
        }
        Ok(EquivParams { e1, e2 })
    }

    pub fn e1(&self) -> &Q {
        &self.e1
    }

    pub fn e2(&self) -> &Q {
        &self.e2
    }

    /// Jack parameter of the fixed-point basis, `-e1/e2`.
    pub fn alpha(&self) -> Q {
        -(&self.e1 / &self.e2)
    }

    /// `e1 + e2 = 0`, where the background charge vanishes.
    pub fn is_self_dual(&self) -> bool {
        (&self.e1 + &self.e2).is_zero()
    }

    /// `e1 = 1, e2 = -beta`, the point where the fixed-point basis is the
    /// Jack basis at `alpha = 1/beta`.
    pub fn for_beta(beta: &Q) -> Result<Self> {
        Self::new(Q::one(), -beta.clone())
    }

    /// Scale of the localized pairing on degree `n`: `(-e2^2)^{-n}`.
    fn pairing_scale(&self, n: usize) -> Q {
        pow(&-(&self.e2 * &self.e2), -(n as i64))
    }
}

fn boxes_with_arm_leg(lambda: &Partition) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
    lambda.boxes().map(move |(i, j)| {
        let (a, l) = lambda.arm_leg(i, j).expect("box of lambda");
        (i, j, a, l)
    })
}

pub fn tangent_weights(lambda: &Partition, params: &EquivParams) -> Vec<Q> {
    let (e1, e2) = (&params.e1, &params.e2);
    boxes_with_arm_leg(lambda)
        .flat_map(|(_, _, a, l)| {
            [
                e1 * qu(a + 1) - e2 * qu(l),
                -(e1 * qu(a)) + e2 * qu(l + 1),
            ]
        })
        .collect()
}

pub fn taut_weights(lambda: &Partition, params: &EquivParams) -> Vec<Q> {
    lambda
        .boxes()
        .map(|(i, j)| &params.e1 * qu(j - 1) + &params.e2 * qu(i - 1))
        .collect()
}

pub fn euler_tangent(lambda: &Partition, params: &EquivParams) -> Q {
    tangent_weights(lambda, params).iter().product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointData {
    pub lambda: Partition,
    pub tangent_weights: Vec<Q>,
    pub taut_weights: Vec<Q>,
    pub euler_tangent: Q,
}

impl FixedPointData {
    pub fn new(lambda: &Partition, params: &EquivParams) -> Self {
        let tangent = tangent_weights(lambda, params);
        FixedPointData {
            lambda: lambda.clone(),
            euler_tangent: tangent.iter().product(),
            tangent_weights: tangent,
            taut_weights: taut_weights(lambda, params),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[Q]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        serde_json::json!({
            "partition": self.lambda,
            "tangent_weights": strs(&self.tangent_weights),
            "taut_weights": strs(&self.taut_weights),
            "euler_tangent": self.euler_tangent.to_string(),
        })
    }
}

/// `h'_lambda = prod_s (alpha a + l + alpha)`.
fn upper_hook(lambda: &Partition, alpha: &Q) -> Q {
    boxes_with_arm_leg(lambda)
        .map(|(_, _, a, l)| alpha * qu(a) + qu(l) + alpha)
        .product()
}

/// Fixed-point classes of degree `n` in power sums.
pub fn fixed_point_basis(n: usize, params: &EquivParams) -> Result<BTreeMap<Partition, SymFun>> {
    let alpha = params.alpha();
    let jack = build_jack(n, &alpha)?;
    jack.vectors()
        .iter()
        .map(|(lambda, p)| {
            let h = upper_hook(lambda, &alpha);
            if h.is_zero() {
                return Err(Error::Singular(format!(
                    "hook product of {lambda} vanishes at alpha = {alpha}"
                )));
            }
            Ok((lambda.clone(), p.scale(&h.recip())))
        })
        .collect()
}

/// `<f, g>_loc`, summed over homogeneous components.
pub fn localized_inner(f: &SymFun, g: &SymFun, params: &EquivParams) -> Q {
    let alpha = params.alpha();
    f.terms()
        .map(|(lambda, a)| {
            let b = g.coeff(lambda);
            if b.is_zero() {
                return Q::zero();
            }
            a * b
                * Q::from_integer(lambda.z_factor())
                * pow(&alpha, lambda.len() as i64)
                * params.pairing_scale(lambda.size())
        })
        .sum()
}

/// Matrix of an operator in the fixed-point basis, rows = source.
pub fn fixed_point_transport(op: &Operator, n: usize, params: &EquivParams) -> Result<LabeledMatrix> {
    matrix_in_basis(op, n, &Basis::FixedPoint(params.clone()))
}

/// Gram matrix of `<,>_loc` on the degree-`n` fixed-point basis.
pub fn gram_matrix(n: usize, params: &EquivParams) -> Result<Matrix> {
    let basis = fixed_point_basis(n, params)?;
    let vectors: Vec<&SymFun> = basis.values().collect();
    Ok(Matrix::from_rows(
        vectors
            .iter()
            .map(|f| vectors.iter().map(|g| localized_inner(f, g, params)).collect())
            .collect(),
    ))
}

/// Heisenberg modes in the fixed-point basis. `alpha_{-k}` multiplies by
/// `(e2^k / e1) p_k`; `alpha_k` is `(-1)^{k-1}` times its adjoint under
/// `<,>_loc`.
struct FockModel {
    params: EquivParams,
    gram: Vec<Matrix>,
    gram_inverse: Vec<Matrix>,
}

impl FockModel {
    fn new(params: &EquivParams, max_degree: usize) -> Result<Self> {
        let mut gram = Vec::new();
        let mut gram_inverse = Vec::new();
        for d in 0..=max_degree {
            let g = gram_matrix(d, params)?;
            gram_inverse.push(g.inverse()?);
            gram.push(g);
        }
        Ok(FockModel {
            params: params.clone(),
            gram,
            gram_inverse,
        })
    }

    fn creation(&self, k: usize, d: usize) -> Result<Matrix> {
        let scale = pow(&self.params.e2, k as i64) / &self.params.e1;
        let op = Operator::multiply_by(Partition::single(k)).scale(&scale);
        Ok(fixed_point_transport(&op, d, &self.params)?.matrix)
    }

    /// `alpha_k` from degree `d` to `d - k`; `None` below degree `k`.
    fn annihilation(&self, k: usize, d: usize) -> Result<Option<Matrix>> {
        if d < k {
            return Ok(None);
        }
        let a = self.creation(k, d - k)?;
        // <A f, g> = <f, B g> with rows-as-source gives B = G_d A^T G_{d-k}^{-1}
        let b = self.gram[d].mul(&a.transpose()).mul(&self.gram_inverse[d - k]);
        let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
        Ok(Some(b.scale(&sign)))
    }

    /// `[alpha_m, alpha_{-k}]` on degree `d` as a `d -> d + k - m` matrix.
    fn commutator(&self, m: usize, k: usize, d: usize) -> Result<Option<Matrix>> {
        if d + k < m {
            return Ok(None);
        }
        let first = self
            .annihilation(m, d + k)?
            .map(|b| self.creation(k, d).map(|a| a.mul(&b)))
            .transpose()?;
        let second = match self.annihilation(m, d)? {
            Some(b) => Some(b.mul(&self.creation(k, d - m)?)),
            None => None,
        };
        Ok(match (first, second) {
            (Some(x), Some(y)) => Some(x.sub(&y)),
            (Some(x), None) => Some(x),
            _ => None,
        })
    }
}

/// `[alpha_m, alpha_{-m}] = m / (e1 e2)` and `[alpha_m, alpha_{-k}] = 0`
/// for `m != k`, modes up to 2, on every degree `<= cap_n`.
pub fn verify_heisenberg(params: &EquivParams, cap_n: usize) -> Result<Report> {
    if cap_n > MAX_HEISENBERG_N {
        return Err(Error::CapExceeded {
            what: "Heisenberg degree",
            value: cap_n,
            cap: MAX_HEISENBERG_N,
        });
    }
    const MODES: usize = 2;
    let model = FockModel::new(params, cap_n + MODES)?;
    let unit = (&params.e1 * &params.e2).recip();
    let mut report = Report::new("heisenberg")
        .param("e1", &params.e1)
        .param("e2", &params.e2)
        .param("cap_n", cap_n);
    report.push(Check::compare(
        "localized pairing is diagonal with entries 1/e(T)",
        &true,
        &(0..=cap_n).all(|d| {
            let expected: Vec<Q> = partition::enumerate(d)
                .iter()
                .map(|l| euler_tangent(l, params).recip())
                .collect();
            model.gram[d].is_diagonal() && model.gram[d].diagonal() == expected
        }),
    ));
    for m in 1..=MODES {
        for k in 1..=MODES {
            for d in 0..=cap_n {
                let Some(c) = model.commutator(m, k, d)? else {
                    continue;
                };
                let expected = if m == k {
                    Matrix::identity(c.rows()).scale(&(&unit * qu(m)))
                } else {
                    Matrix::zeros(c.rows(), c.cols())
                };
                report.push(Check::compare(
                    format!("[a_{m}, a_-{k}] on degree {d}"),
                    &MatrixText(expected),
                    &MatrixText(c),
                ));
            }
        }
    }
    Ok(report)
}

/// Display wrapper so matrices can be reported as text.
#[derive(PartialEq)]
struct MatrixText(Matrix);

impl std::fmt::Display for MatrixText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .0
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Checks that the `beta`-deformed cubic operator is diagonal in the
/// fixed-point basis at `e1 = 1, e2 = -beta`, degrees `1..=n`.
pub fn verify_transport_diagonal(beta: &Q, big_n: &Q, n: usize) -> Result<Report> {
    let params = EquivParams::for_beta(beta)?;
    let op = crate::ops::w0_beta(beta, big_n, false);
    let mut report = Report::new("transport")
        .param("beta", beta)
        .param("N", big_n)
        .param("n", n);
    for d in 1..=n {
        let m = fixed_point_transport(&op, d, &params)?;
        report.push(Check::compare(
            format!("W0 diagonal on degree {d}"),
            &true,
            &m.matrix.is_diagonal(),
        ));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Cut,
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: Partition,
    pub to: Partition,
    pub value: String,
    pub channel: Channel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RimHookGraph {
    pub n: usize,
    pub vertices: Vec<Partition>,
    pub edges: Vec<Edge>,
}

impl RimHookGraph {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph rimhook_{} {{\n", self.n);
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for e in &self.edges {
            let tag = match e.channel {
                Channel::Cut => "cut",
                Channel::Join => "join",
            };
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{} ({tag})\"];", e.from, e.to, e.value);
        }
        out.push_str("}\n");
        out
    }
}

/// Off-diagonal entries of `W2` in the normalized basis as a directed graph.
pub fn rimhook_graph(n: usize) -> Result<RimHookGraph> {
    if n > MAX_GRAPH_N {
        return Err(Error::CapExceeded {
            what: "graph degree n",
            value: n,
            cap: MAX_GRAPH_N,
        });
    }
    let m = matrix_in_basis(&cut_and_join(), n, &Basis::Normalized)?;
    let mut edges = Vec::new();
    for (i, from) in m.rows.iter().enumerate() {
        for (j, to) in m.cols.iter().enumerate() {
            let value = &m.matrix[(i, j)];
            if i == j || value.is_zero() {
                continue;
            }
            let channel = if to.len() > from.len() {
                Channel::Cut
            } else {
                Channel::Join
            };
            edges.push(Edge {
                from: from.clone(),
                to: to.clone(),
                value: value.to_string(),
                channel,
            });
        }
    }
    Ok(RimHookGraph {
        n,
        vertices: m.rows,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jack::jack_norm;
    use crate::rational::{frac, q};
    use crate::symfun::hall_inner;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn params(a: i64, b: i64) -> EquivParams {
        EquivParams::new(q(a), q(b)).unwrap()
    }

    fn sorted(mut v: Vec<Q>) -> Vec<Q> {
        v.sort();
        v
    }

    #[test]
    fn weights_small() {
        let e = EquivParams::new(frac(2, 3), frac(-5, 7)).unwrap();
        assert_eq!(sorted(tangent_weights(&p(&[1]), &e)), sorted(vec![frac(2, 3), frac(-5, 7)]));
        // (2): box (1,1) a=1 l=0, box (1,2) a=0 l=0
        let (e1, e2) = (frac(2, 3), frac(-5, 7));
        let expected = vec![
            q(2) * &e1,
            -e1.clone() + &e2,
            e1.clone(),
            e2.clone(),
        ];
        assert_eq!(sorted(tangent_weights(&p(&[2]), &e)), sorted(expected));
        assert_eq!(taut_weights(&p(&[1]), &e), vec![q(0)]);
        assert_eq!(taut_weights(&p(&[2]), &e), vec![q(0), e1]);
        assert!(EquivParams::new(q(0), q(1)).is_err());
        assert!(params(1, -1).is_self_dual());
    }

    #[test]
    fn taut_weight_sum_counts_n_statistics() {
        let e = params(1, 1);
        for n in 0..=7 {
            for lambda in partition::enumerate(n) {
                let total: Q = taut_weights(&lambda, &e).iter().sum();
                assert_eq!(total, qu(lambda.n_statistic() + lambda.conjugate().n_statistic()));
                assert_eq!(taut_weights(&lambda, &e).len(), n);
            }
        }
    }

    #[test]
    fn euler_class_nonzero_with_full_degree() {
        let e = EquivParams::new(frac(3, 5), frac(7, 11)).unwrap();
        for n in 0..=8 {
            for lambda in partition::enumerate(n) {
                assert_eq!(tangent_weights(&lambda, &e).len(), 2 * n);
                assert!(!euler_tangent(&lambda, &e).is_zero());
                // homogeneous of degree 2n in (e1, e2)
                let scaled = EquivParams::new(frac(6, 5), frac(14, 11)).unwrap();
                assert_eq!(euler_tangent(&lambda, &scaled), euler_tangent(&lambda, &e) * pow(&q(2), 2 * n as i64));
            }
        }
    }

    #[test]
    fn fixed_point_norms_are_inverse_euler_classes() {
        for e in [params(1, -2), EquivParams::new(frac(2, 3), frac(5, 4)).unwrap(), params(3, 7)] {
            for n in 0..=4 {
                let basis = fixed_point_basis(n, &e).unwrap();
                for (lambda, f) in &basis {
                    assert_eq!(localized_inner(f, f, &e), euler_tangent(lambda, &e).recip(), "{lambda}");
                }
                assert!(gram_matrix(n, &e).unwrap().is_diagonal());
            }
        }
    }

    #[test]
    fn localized_pairing_is_rescaled_hall_pairing() {
        let e = params(2, 5);
        let alpha = e.alpha();
        for n in 1..=4 {
            let jack = build_jack(n, &alpha).unwrap();
            for (lambda, f) in jack.vectors() {
                let expected = hall_inner(f, f, &alpha).unwrap() * e.pairing_scale(n);
                assert_eq!(localized_inner(f, f, &e), expected);
                assert_eq!(hall_inner(f, f, &alpha).unwrap(), jack_norm(lambda, &alpha));
            }
        }
    }

    #[test]
    fn heisenberg_relations() {
        for e in [params(1, -2), EquivParams::new(frac(2, 3), frac(5, 4)).unwrap()] {
            let r = verify_heisenberg(&e, 4).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
        assert!(verify_heisenberg(&params(1, 2), 7).is_err());
    }

    #[test]
    fn transport_examples() {
        let e = EquivParams::new(frac(3, 2), frac(-1, 3)).unwrap();
        let m = fixed_point_transport(&crate::ops::grading(), 3, &e).unwrap();
        assert_eq!(m.matrix, Matrix::identity(3).scale(&q(3)));
        for beta in [q(1), q(2), frac(1, 2), q(3)] {
            assert!(verify_transport_diagonal(&beta, &q(2), 4).unwrap().passed(), "beta={beta}");
        }
        let m = fixed_point_transport(&cut_and_join(), 4, &params(1, -1)).unwrap();
        assert!(m.matrix.is_diagonal());
        let diag: Vec<Q> = m.matrix.diagonal();
        assert_eq!(diag, vec![q(6), q(2), q(0), q(-2), q(-6)]);
    }

    #[test]
    fn transport_off_identification_is_not_diagonal() {
        let op = crate::ops::w0_beta(&q(2), &q(1), false);
        let m = fixed_point_transport(&op, 3, &params(1, -3)).unwrap();
        assert!(!m.matrix.is_diagonal());
    }

    #[test]
    fn graph_examples() {
        let g = rimhook_graph(4).unwrap();
        assert_eq!(g.vertices.len(), 5);
        let find = |a: &[usize], b: &[usize]| g.edges.iter().find(|e| e.from == p(a) && e.to == p(b)).cloned();
        let e = find(&[4], &[3, 1]).unwrap();
        assert_eq!((e.value.as_str(), e.channel), ("3", Channel::Cut));
        let e = find(&[1, 1, 1, 1], &[2, 1, 1]).unwrap();
        assert_eq!((e.value.as_str(), e.channel), ("1", Channel::Join));
        assert_eq!(g.edges.len(), 10);

        let g = rimhook_graph(2).unwrap();
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| e.value == "1"));
        assert!(rimhook_graph(1).unwrap().edges.is_empty());
        assert!(rimhook_graph(11).is_err());

        let dot = rimhook_graph(2).unwrap().to_dot();
        assert!(dot.contains("\"(2)\" -> \"(1,1)\" [label=\"1 (cut)\"]"));
        assert_eq!(rimhook_graph(5).unwrap().to_json()["vertices"].as_array().unwrap().len(), 7);
    }

    fn nonzero() -> impl Strategy<Value = Q> {
        (-6i64..=6, 1i64..=5)
            .prop_filter("nonzero", |(a, _)| *a != 0)
            .prop_map(|(a, b)| frac(a, b))
    }

    proptest! {
        #[test]
        fn swap_is_conjugation(e1 in nonzero(), e2 in nonzero(), idx in 0usize..30) {
            let all = partition::enumerate(7);
            let lambda = &all[idx % all.len()];
            let e = EquivParams::new(e1.clone(), e2.clone()).unwrap();
            let swapped = EquivParams::new(e2, e1).unwrap();
            prop_assert_eq!(
                sorted(tangent_weights(lambda, &e)),
                sorted(tangent_weights(&lambda.conjugate(), &swapped))
            );
            prop_assert_eq!(
                sorted(taut_weights(lambda, &e)),
                sorted(taut_weights(&lambda.conjugate(), &swapped))
            );
        }
    }
}
