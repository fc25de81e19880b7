//! The centre of the group algebra of `S_n`: class sums, their products,
//! the characteristic map to power sums, the raising map `S_n -> S_{n+1}`,
//! the centered ladder and the Jucys-Murphy lifting, plus a brute-force
//! count of transposition factorizations.
//!
//! Central projection is class averaging: a group-algebra element whose
//! coefficients sum to `c` over the class `C_mu` projects to
//! `c / |C_mu| * K_mu`. Raising and ladder maps are rescaled by `n + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ops::{cut_and_join, ladder};
use crate::partition::{self, Partition};
use crate::rational::{qu, Q};
use crate::report::{Check, Report};
use crate::symfun::SymFun;

/// Largest `n` for which `S_n` is enumerated.
pub const MAX_GROUP: usize = 8;
/// Caps for the factorization oracle.
pub const MAX_HURWITZ_N: usize = 5;
pub const MAX_HURWITZ_R: usize = 6;

/// A permutation of `{0, .., n-1}` as its image word.
pub type Perm = Vec<u8>;

fn compose_perm(sigma: &[u8], tau: &[u8]) -> Perm {
    // (sigma * tau)(i) = sigma(tau(i))
    tau.iter().map(|&i| sigma[i as usize]).collect()
}

pub fn cycle_type(sigma: &[u8]) -> Partition {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::from_multiset(parts)
}

fn transposition(n: usize, i: usize, j: usize) -> Perm {
    let mut p: Perm = (0..n as u8).collect();
    p.swap(i, j);
    p
}

fn all_permutations(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current: Perm = (0..n as u8).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

fn check_group_cap(n: usize) -> Result<()> {
    if n > MAX_GROUP {
        return Err(Error::CapExceeded {
            what: "symmetric group size n",
            value: n,
            cap: MAX_GROUP,
        });
    }
    Ok(())
}

type Expansion = BTreeMap<Partition, Q>;

/// Elements of `S_n` grouped by cycle type, with memoized structure
/// constants of the class algebra.
pub struct PermGroupContext {
    n: usize,
    classes: BTreeMap<Partition, Vec<Perm>>,
    products: Mutex<HashMap<(Partition, Partition), Arc<Expansion>>>,
}

impl PermGroupContext {
    fn build(n: usize) -> Self {
        let mut classes: BTreeMap<Partition, Vec<Perm>> =
            partition::enumerate(n).into_iter().map(|p| (p, Vec::new())).collect();
        for sigma in all_permutations(n) {
            classes.get_mut(&cycle_type(&sigma)).expect("cycle type is a partition of n").push(sigma);
        }
        PermGroupContext {
            n,
            classes,
            products: Mutex::new(HashMap::new()),
        }
    }

    /// Shared context for `S_n`, built once per `n`.
    pub fn get(n: usize) -> Result<Arc<PermGroupContext>> {
        check_group_cap(n)?;
        static GROUPS: OnceLock<Mutex<HashMap<usize, Arc<PermGroupContext>>>> = OnceLock::new();
        let groups = GROUPS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = groups.lock().expect("group cache poisoned").get(&n) {
            return Ok(g.clone());
        }
        // Built outside the lock; a racing duplicate is simply discarded.
        let built = Arc::new(PermGroupContext::build(n));
        let mut guard = groups.lock().expect("group cache poisoned");
        Ok(guard.entry(n).or_insert(built).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    pub fn class(&self, lambda: &Partition) -> &[Perm] {
        self.classes.get(lambda).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `K_lambda * K_mu` expanded in class sums.
    pub fn class_product(&self, lambda: &Partition, mu: &Partition) -> Arc<Expansion> {
        // commutative: key on the ordered pair
        let key = if lambda <= mu {
            (lambda.clone(), mu.clone())
        } else {
            (mu.clone(), lambda.clone())
        };
        if let Some(hit) = self.products.lock().expect("product cache poisoned").get(&key) {
            return hit.clone();
        }
        // Iterate the smaller class against a fixed representative of the other.
        let (small, large) = if self.class(&key.0).len() <= self.class(&key.1).len() {
            (&key.0, &key.1)
        } else {
            (&key.1, &key.0)
        };
        let rep = &self.class(large)[0];
        let mut counts: BTreeMap<Partition, usize> = BTreeMap::new();
        for sigma in self.class(small) {
            *counts.entry(cycle_type(&compose_perm(sigma, rep))).or_default() += 1;
        }
        let large_size = qu(self.class(large).len());
        let result: Expansion = counts
            .into_iter()
            .map(|(nu, c)| {
                let coeff = &large_size * qu(c) / qu(self.class(&nu).len());
                (nu, coeff)
            })
            .collect();
        let result = Arc::new(result);
        self.products
            .lock()
            .expect("product cache poisoned")
            .insert(key, result.clone());
        result
    }
}

/// `sum_lambda c_lambda K_lambda` in the centre of `C[S_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    n: usize,
    coeffs: BTreeMap<Partition, Q>,
}

impl CentralElement {
    pub fn zero(n: usize) -> Self {
        CentralElement {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::class_sum(Partition::ones(n))
    }

    pub fn class_sum(lambda: Partition) -> Self {
        let n = lambda.size();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(lambda, Q::from_integer(1.into()));
        CentralElement { n, coeffs }
    }

    /// `K_[2]`, the sum of all transpositions (zero for `n < 2`).
    pub fn transpositions(n: usize) -> Self {
        if n < 2 {
            return Self::zero(n);
        }
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, n - 2));
        Self::class_sum(Partition::from_multiset(parts))
    }

    pub fn from_coeffs(n: usize, coeffs: impl IntoIterator<Item = (Partition, Q)>) -> Result<Self> {
        let mut z = Self::zero(n);
        for (lambda, c) in coeffs {
            if lambda.size() != n {
                return Err(Error::MismatchedDegree(n, lambda.size()));
            }
            z.add_term(lambda, c);
        }
        Ok(z)
    }

    fn add_term(&mut self, lambda: Partition, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(lambda.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&lambda);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, lambda: &Partition) -> Q {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, Q> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `{"n": n, "terms": [{"coeff": "3/2", "class": [2,1]}, ..]}`
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .coeffs
            .iter()
            .map(|(lambda, c)| serde_json::json!({"coeff": c.to_string(), "class": lambda}))
            .collect();
        serde_json::json!({"n": self.n, "terms": terms})
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for (lambda, v) in &self.coeffs {
            out.add_term(lambda.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &CentralElement) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::MismatchedDegree(self.n, other.n));
        }
        let mut out = self.clone();
        for (lambda, v) in &other.coeffs {
            out.add_term(lambda.clone(), -v);
        }
        Ok(out)
    }
}

impl fmt::Display for CentralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(lambda, c)| {
                if *c == Q::from_integer(1.into()) {
                    format!("K{lambda}")
                } else {
                    format!("{c}*K{lambda}")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Exact product in the centre of `C[S_n]`.
pub fn class_multiply(a: &CentralElement, b: &CentralElement) -> Result<CentralElement> {
    if a.n != b.n {
        return Err(Error::MismatchedDegree(a.n, b.n));
    }
    let group = PermGroupContext::get(a.n)?;
    let mut out = CentralElement::zero(a.n);
    for (lambda, x) in &a.coeffs {
        for (mu, y) in &b.coeffs {
            let xy = x * y;
            for (nu, c) in group.class_product(lambda, mu).iter() {
                out.add_term(nu.clone(), &xy * c);
            }
        }
    }
    Ok(out)
}

/// `K_lambda -> p_lambda`, or `p_lambda / z_lambda` when `normalized`.
pub fn characteristic_map(z: &CentralElement, normalized: bool) -> SymFun {
    SymFun::from_terms(z.coeffs.iter().map(|(lambda, c)| {
        let c = if normalized {
            c / Q::from_integer(lambda.z_factor())
        } else {
            c.clone()
        };
        (lambda.clone(), c)
    }))
}

/// Class averaging in `S_m`: element counts per cycle type divided by the
/// class sizes.
fn project(m: usize, counts: BTreeMap<Partition, Q>) -> CentralElement {
    let mut out = CentralElement::zero(m);
    for (nu, c) in counts {
        let size = Q::from_integer(nu.class_size());
        out.add_term(nu, c / size);
    }
    out
}

fn embedded(sigma: &[u8]) -> Perm {
    let mut p = sigma.to_vec();
    p.push(sigma.len() as u8);
    p
}

/// `(n+1) * pi_{n+1}(l_n(z))`: embed fixing the new point, average over
/// `S_{n+1}`, rescale.
pub fn raising_map(z: &CentralElement) -> Result<CentralElement> {
    let n = z.n;
    check_group_cap(n + 1)?;
    let group = PermGroupContext::get(n)?;
    let mut counts: BTreeMap<Partition, Q> = BTreeMap::new();
    for (lambda, c) in &z.coeffs {
        for sigma in group.class(lambda) {
            *counts.entry(cycle_type(&embedded(sigma))).or_insert_with(Q::zero) += c;
        }
    }
    Ok(project(n + 1, counts).scale(&qu(n + 1)))
}

/// `E(z) = K^{(n+1)}_[2] r(z) - r(K^{(n)}_[2] z)`, computed with class
/// multiplication and the raising map.
pub fn centered_ladder(z: &CentralElement) -> Result<CentralElement> {
    let n = z.n;
    check_group_cap(n + 1)?;
    let upper = class_multiply(&CentralElement::transpositions(n + 1), &raising_map(z)?)?;
    let lower = raising_map(&class_multiply(&CentralElement::transpositions(n), z)?)?;
    upper.sub(&lower)
}

/// `(n+1) * pi_{n+1}(J_{n+1} l_n(z))` by direct enumeration, with
/// `J_{n+1} = sum_i (i, n+1)`.
pub fn jm_lifting(z: &CentralElement) -> Result<CentralElement> {
    let n = z.n;
    check_group_cap(n + 1)?;
    let group = PermGroupContext::get(n)?;
    let jm: Vec<Perm> = (0..n).map(|i| transposition(n + 1, i, n)).collect();
    let mut counts: BTreeMap<Partition, Q> = BTreeMap::new();
    for (lambda, c) in &z.coeffs {
        for sigma in group.class(lambda) {
            let lifted = embedded(sigma);
            for t in &jm {
                *counts
                    .entry(cycle_type(&compose_perm(t, &lifted)))
                    .or_insert_with(Q::zero) += c;
            }
        }
    }
    Ok(project(n + 1, counts).scale(&qu(n + 1)))
}

/// Number of `r`-tuples of transpositions of `S_n` whose product has cycle
/// type `mu`.
pub fn count_factorizations(mu: &Partition, r: usize) -> Result<BigInt> {
    let n = mu.size();
    if n > MAX_HURWITZ_N {
        return Err(Error::CapExceeded {
            what: "factorization degree n",
            value: n,
            cap: MAX_HURWITZ_N,
        });
    }
    if r > MAX_HURWITZ_R {
        return Err(Error::CapExceeded {
            what: "number of transpositions r",
            value: r,
            cap: MAX_HURWITZ_R,
        });
    }
    let transpositions: Vec<Perm> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| transposition(n, i, j))
        .collect();
    let mut layer: HashMap<Perm, u64> = HashMap::new();
    layer.insert((0..n as u8).collect(), 1);
    for _ in 0..r {
        let mut next: HashMap<Perm, u64> = HashMap::new();
        for (sigma, c) in &layer {
            for t in &transpositions {
                *next.entry(compose_perm(sigma, t)).or_default() += c;
            }
        }
        layer = next;
    }
    Ok(layer
        .into_iter()
        .filter(|(sigma, _)| cycle_type(sigma) == *mu)
        .map(|(_, c)| BigInt::from(c))
        .sum())
}

fn sides(label: String, expected: &SymFun, actual: &SymFun) -> Check {
    Check::compare(label, expected, actual)
}

/// `Phi(K_[2] K_lambda) = W2 Phi(K_lambda)` for every `lambda |- n`.
pub fn verify_cutjoin_intertwining(n: usize, normalized: bool) -> Result<Report> {
    if n > 7 {
        return Err(Error::CapExceeded {
            what: "intertwining degree n",
            value: n,
            cap: 7,
        });
    }
    let w2 = cut_and_join();
    let k2 = CentralElement::transpositions(n);
    let mut report = Report::new("cutjoin").param("n", n).param("normalized", normalized);
    for lambda in partition::enumerate(n) {
        let z = CentralElement::class_sum(lambda.clone());
        let lhs = characteristic_map(&class_multiply(&k2, &z)?, normalized);
        let rhs = w2.apply(&characteristic_map(&z, normalized))?;
        report.push(sides(format!("lambda={lambda}"), &rhs, &lhs));
    }
    Ok(report)
}

/// Ladder intertwining `Phi'(E(K_lambda)) = E1 Phi'(K_lambda)` and
/// agreement of the commutator and Jucys-Murphy routes.
pub fn verify_ladder(n: usize) -> Result<Report> {
    let e1 = ladder();
    let mut report = Report::new("ladder").param("n", n);
    for lambda in partition::enumerate(n) {
        let z = CentralElement::class_sum(lambda.clone());
        let e = centered_ladder(&z)?;
        let lhs = characteristic_map(&e, true);
        let rhs = e1.apply(&characteristic_map(&z, true))?;
        report.push(sides(format!("Phi'(E K{lambda}) = E1 Phi'(K{lambda})"), &rhs, &lhs));
        let t = jm_lifting(&z)?;
        report.push(Check::compare(format!("E(K{lambda}) = T(K{lambda})"), &e, &t));
    }
    Ok(report)
}

/// Only the Jucys-Murphy route against `E1`.
pub fn verify_jm(n: usize) -> Result<Report> {
    let e1 = ladder();
    let mut report = Report::new("jm").param("n", n);
    for lambda in partition::enumerate(n) {
        let z = CentralElement::class_sum(lambda.clone());
        let lhs = characteristic_map(&jm_lifting(&z)?, true);
        let rhs = e1.apply(&characteristic_map(&z, true))?;
        report.push(sides(format!("Phi'(T K{lambda}) = E1 Phi'(K{lambda})"), &rhs, &lhs));
    }
    Ok(report)
}

/// Coefficient of `v_mu` in `W2^r(v_{1^n})` times `|C_mu|` against the
/// factorization count, for every `mu |- n`.
pub fn verify_hurwitz(n: usize, r: usize) -> Result<Report> {
    let w2 = cut_and_join();
    let mut report = Report::new("hurwitz").param("n", n).param("r", r);
    let mut f = SymFun::v(Partition::ones(n));
    for _ in 0..r {
        f = w2.apply(&f)?;
    }
    let coords = f.normalized_basis_coords();
    for mu in partition::enumerate(n) {
        let from_operator = coords.get(&mu).cloned().unwrap_or_else(Q::zero) * Q::from_integer(mu.class_size());
        let counted = Q::from_integer(count_factorizations(&mu, r)?);
        report.push(Check::compare(format!("mu={mu}"), &counted, &from_operator));
    }
    Ok(report)
}

/// Coefficient of `K_{bump}` predicted by the Jucys-Murphy computation:
/// `m * m_m(lambda) * z_bump / z_lambda`.
pub fn ladder_coefficient(lambda: &Partition, m: usize) -> Result<Q> {
    let bumped = lambda.bump(m)?;
    let ratio = Q::new(bumped.z_factor(), lambda.z_factor());
    Ok(qu(m * lambda.multiplicity(m)) * ratio)
}

/// Class-sum size as a machine integer; fits for `n <= 8`.
pub fn class_len(lambda: &Partition) -> usize {
    lambda.class_size().to_usize().expect("class size fits in usize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition;
    use crate::rational::q;
    use proptest::prelude::*;

    fn k(parts: &[usize]) -> CentralElement {
        CentralElement::class_sum(Partition::new(parts.to_vec()).unwrap())
    }

    fn expansion(n: usize, terms: &[(&[usize], i64)]) -> CentralElement {
        CentralElement::from_coeffs(
            n,
            terms
                .iter()
                .map(|(p, c)| (Partition::new(p.to_vec()).unwrap(), q(*c))),
        )
        .unwrap()
    }

    #[test]
    fn group_sizes_and_classes() {
        for n in 0..=6 {
            let g = PermGroupContext::get(n).unwrap();
            assert_eq!(g.order(), (1..=n).product::<usize>());
            for lambda in partition::enumerate(n) {
                assert_eq!(g.class(&lambda).len(), class_len(&lambda));
            }
        }
        assert!(PermGroupContext::get(9).is_err());
    }

    #[test]
    fn class_products_small() {
        let k2 = CentralElement::transpositions(3);
        assert_eq!(
            class_multiply(&k2, &k(&[3])).unwrap(),
            expansion(3, &[(&[2, 1], 2)])
        );
        assert_eq!(
            class_multiply(&CentralElement::transpositions(2), &k(&[1, 1])).unwrap(),
            k(&[2])
        );
        assert_eq!(
            class_multiply(&k2, &k(&[2, 1])).unwrap(),
            expansion(3, &[(&[1, 1, 1], 3), (&[3], 3)])
        );
        assert!(matches!(
            class_multiply(&k(&[1]), &k(&[2])),
            Err(Error::MismatchedDegree(1, 2))
        ));
    }

    /// Independent product: multiply every pair of elements.
    fn brute_product(a: &Partition, b: &Partition) -> CentralElement {
        let n = a.size();
        let g = PermGroupContext::get(n).unwrap();
        let mut counts = BTreeMap::new();
        for x in g.class(a) {
            for y in g.class(b) {
                *counts.entry(cycle_type(&compose_perm(x, y))).or_insert_with(Q::zero) += qu(1);
            }
        }
        project(n, counts)
    }

    #[test]
    fn structure_constants_match_full_enumeration() {
        for n in 1..=4 {
            let parts = partition::enumerate(n);
            for a in &parts {
                for b in &parts {
                    let fast = class_multiply(
                        &CentralElement::class_sum(a.clone()),
                        &CentralElement::class_sum(b.clone()),
                    )
                    .unwrap();
                    assert_eq!(fast, brute_product(a, b), "{a} * {b}");
                }
            }
        }
    }

    #[test]
    fn characteristic_map_examples() {
        assert_eq!(characteristic_map(&k(&[2, 1]), false), SymFun::p(Partition::new(vec![2, 1]).unwrap()));
        assert_eq!(
            characteristic_map(&k(&[2, 1]), true),
            SymFun::p(Partition::new(vec![2, 1]).unwrap()).scale(&crate::rational::frac(1, 2))
        );
        assert!(characteristic_map(&CentralElement::zero(3), true).is_zero());
    }

    #[test]
    fn intertwining_normalized_small_n() {
        for n in 0..=5 {
            let r = verify_cutjoin_intertwining(n, true).unwrap();
            assert!(r.passed(), "n={n}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn unnormalized_witness_at_three_cycle() {
        let r = verify_cutjoin_intertwining(3, false).unwrap();
        // every class fails without the z normalization; (3) is the cleanest
        assert_eq!(r.failures().count(), 3);
        let three = r.checks.iter().find(|c| c.label == "lambda=(3)").unwrap();
        assert_eq!(three.expected.as_deref(), Some("3*p[2,1]"));
        assert_eq!(three.actual.as_deref(), Some("2*p[2,1]"));
    }

    #[test]
    fn raising_examples() {
        // e is central already; the (n+1) rescale doubles it
        assert_eq!(raising_map(&k(&[1])).unwrap(), expansion(2, &[(&[1, 1], 2)]));
        // l(K_(2)) = three transpositions fixing 3, a third of K_(2,1); times 3
        assert_eq!(raising_map(&k(&[2])).unwrap(), k(&[2, 1]));
        assert!(raising_map(&CentralElement::zero(3)).unwrap().is_zero());
        assert!(raising_map(&CentralElement::identity(8)).is_err());
    }

    #[test]
    fn raising_closed_form() {
        // (n+1) |C_lambda| / |C_{lambda+1}| = m_1(lambda) + 1
        for n in 0..=5 {
            for lambda in partition::enumerate(n) {
                let up = raising_map(&CentralElement::class_sum(lambda.clone())).unwrap();
                let expected = CentralElement::class_sum(lambda.with_part(1))
                    .scale(&qu(lambda.multiplicity(1) + 1));
                assert_eq!(up, expected);
            }
        }
    }

    #[test]
    fn ladder_examples() {
        assert_eq!(centered_ladder(&k(&[1])).unwrap(), expansion(2, &[(&[2], 2)]));
        assert_eq!(centered_ladder(&k(&[1, 1])).unwrap(), expansion(3, &[(&[2, 1], 2)]));
        assert_eq!(centered_ladder(&k(&[2])).unwrap(), expansion(3, &[(&[3], 3)]));
        assert!(jm_lifting(&CentralElement::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn ladder_matches_bump_formula() {
        for n in 1..=5 {
            for lambda in partition::enumerate(n) {
                let mut expected = CentralElement::zero(n + 1);
                for (m, _) in lambda.multiplicities() {
                    expected.add_term(lambda.bump(m).unwrap(), ladder_coefficient(&lambda, m).unwrap());
                }
                let z = CentralElement::class_sum(lambda.clone());
                assert_eq!(centered_ladder(&z).unwrap(), expected, "{lambda}");
                assert_eq!(jm_lifting(&z).unwrap(), expected, "{lambda}");
            }
        }
    }

    #[test]
    fn bump_formula_without_z_ratio_is_the_unnormalized_intertwiner() {
        // sum m m_m K_bump intertwines E1 under K -> p, not under K -> p/z
        let e1 = ladder();
        let lambda = Partition::new(vec![2]).unwrap();
        let naive = expansion(3, &[(&[3], 2)]);
        let z = CentralElement::class_sum(lambda);
        assert_eq!(
            characteristic_map(&naive, false),
            e1.apply(&characteristic_map(&z, false)).unwrap()
        );
        assert_ne!(
            characteristic_map(&naive, true),
            e1.apply(&characteristic_map(&z, true)).unwrap()
        );
    }

    #[test]
    fn ladder_and_jm_reports_pass() {
        for n in 0..=4 {
            assert!(verify_ladder(n).unwrap().passed(), "ladder n={n}");
            assert!(verify_jm(n).unwrap().passed(), "jm n={n}");
        }
    }

    #[test]
    fn factorization_examples() {
        let p = |v: Vec<usize>| Partition::new(v).unwrap();
        assert_eq!(count_factorizations(&p(vec![3]), 2).unwrap(), BigInt::from(6));
        assert_eq!(count_factorizations(&p(vec![1, 1]), 0).unwrap(), BigInt::from(1));
        assert_eq!(count_factorizations(&p(vec![2, 1]), 1).unwrap(), BigInt::from(3));
        assert!(count_factorizations(&p(vec![6]), 1).is_err());
        assert!(count_factorizations(&p(vec![2]), 7).is_err());
    }

    #[test]
    fn factorization_counts_sum_to_all_tuples() {
        for n in 1..=4 {
            for r in 0..=4 {
                let total: BigInt = partition::enumerate(n)
                    .iter()
                    .map(|mu| count_factorizations(mu, r).unwrap())
                    .sum();
                assert_eq!(total, BigInt::from(n * (n - 1) / 2).pow(r as u32));
            }
        }
    }

    #[test]
    fn hurwitz_small() {
        for n in 1..=4 {
            for r in 0..=4 {
                assert!(verify_hurwitz(n, r).unwrap().passed(), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(expansion(3, &[(&[1, 1, 1], 3), (&[3], 3)]).to_string(), "3*K(3) + 3*K(1,1,1)");
        assert_eq!(CentralElement::zero(2).to_string(), "0");
    }

    fn central(n: usize) -> impl Strategy<Value = CentralElement> {
        let parts = partition::enumerate(n);
        let len = parts.len();
        proptest::collection::vec(-3i64..=3, len).prop_map(move |cs| {
            CentralElement::from_coeffs(n, parts.iter().cloned().zip(cs.into_iter().map(q))).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn multiplication_commutes_and_associates(
            (a, b, c) in (1usize..=5).prop_flat_map(|n| (central(n), central(n), central(n)))
        ) {
            let ab = class_multiply(&a, &b).unwrap();
            prop_assert_eq!(&ab, &class_multiply(&b, &a).unwrap());
            let left = class_multiply(&ab, &c).unwrap();
            let right = class_multiply(&a, &class_multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn intertwining_is_linear(z in (1usize..=5).prop_flat_map(central)) {
            let w2 = cut_and_join();
            let lhs = characteristic_map(&class_multiply(&CentralElement::transpositions(z.n()), &z).unwrap(), true);
            prop_assert_eq!(lhs, w2.apply(&characteristic_map(&z, true)).unwrap());
            let e1 = ladder();
            let lhs = characteristic_map(&centered_ladder(&z).unwrap(), true);
            prop_assert_eq!(lhs, e1.apply(&characteristic_map(&z, true)).unwrap());
        }
    }
}
