//! Normally ordered differential operators on the power-sum ring.
//!
//! A term `c * p_mu * d_nu` multiplies by `p_mu` after differentiating by
//! every `d/dp_{nu_i}`. Operators are stored in layers by `|nu|`: a term in
//! layer `m` only acts on inputs of degree at least `m`. Infinite sums such
//! as the cut operator are schemas whose layers are generated on demand and
//! memoized; products and commutators are finite operators that remember
//! the largest input degree on which they are exact.

mod builders;

pub use builders::*;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{binomial, falling, parse_q, Q};
use crate::symfun::SymFun;

/// One normally ordered term `coeff * p_create * d_annihilate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NOTerm {
    pub coeff: Q,
    pub create: Partition,
    pub annihilate: Partition,
}

impl NOTerm {
    pub fn new(coeff: Q, create: Partition, annihilate: Partition) -> Self {
        NOTerm {
            coeff,
            create,
            annihilate,
        }
    }

    pub fn degree_shift(&self) -> i64 {
        self.create.size() as i64 - self.annihilate.size() as i64
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    create: Partition,
    annihilate: Partition,
}

/// Terms of one layer: annihilation index -> creation index -> coefficient.
pub type TermMap = BTreeMap<Partition, BTreeMap<Partition, Q>>;

type LayerFn = dyn Fn(usize) -> TermMap + Send + Sync;

#[derive(Clone)]
enum Body {
    Finite(Arc<BTreeMap<usize, Arc<TermMap>>>),
    Schema {
        layer: Arc<LayerFn>,
        cache: Arc<Mutex<HashMap<usize, Arc<TermMap>>>>,
    },
}

#[derive(Clone)]
pub struct Operator {
    name: String,
    degree: Option<i64>,
    valid_up_to: Option<usize>,
    body: Body,
}

fn add_into(map: &mut TermMap, annihilate: Partition, create: Partition, c: Q) {
    if c.is_zero() {
        return;
    }
    let row = map.entry(annihilate.clone()).or_default();
    let slot = row.entry(create.clone()).or_insert_with(Q::zero);
    *slot += c;
    if slot.is_zero() {
        row.remove(&create);
        if row.is_empty() {
            map.remove(&annihilate);
        }
    }
}

fn merge_scaled(into: &mut TermMap, from: &TermMap, c: &Q) {
    for (nu, row) in from {
        for (mu, x) in row {
            add_into(into, nu.clone(), mu.clone(), x * c);
        }
    }
}

/// Product `prod_k m_k(lambda)! / (m_k(lambda) - m_k(nu))!` obtained by
/// applying `d_nu` to `p_lambda`, assuming `nu` is a sub-multiset.
fn derivative_weight(lambda: &Partition, nu: &Partition) -> Q {
    let mut w = num_bigint::BigInt::one();
    for (k, s) in nu.multiplicities() {
        w *= falling(lambda.multiplicity(k), s);
    }
    Q::from_integer(w)
}

impl Operator {
    fn finite(name: impl Into<String>, terms: TermMap, valid_up_to: Option<usize>) -> Self {
        let mut layers: BTreeMap<usize, TermMap> = BTreeMap::new();
        let mut shifts = Vec::new();
        for (nu, row) in terms {
            for (mu, c) in row {
                shifts.push(mu.size() as i64 - nu.size() as i64);
                add_into(layers.entry(nu.size()).or_default(), nu.clone(), mu, c);
            }
        }
        shifts.sort_unstable();
        shifts.dedup();
        // an operator without terms has no intrinsic shift; callers may declare one
        let degree = match shifts.as_slice() {
            [d] => Some(*d),
            _ => None,
        };
        Operator {
            name: name.into(),
            degree,
            valid_up_to,
            body: Body::Finite(Arc::new(
                layers.into_iter().map(|(k, v)| (k, Arc::new(v))).collect(),
            )),
        }
    }

    /// A schema whose layer `m` is produced by `layer(m)`.
    pub fn schema(
        name: impl Into<String>,
        degree: Option<i64>,
        layer: impl Fn(usize) -> TermMap + Send + Sync + 'static,
    ) -> Self {
        Operator {
            name: name.into(),
            degree,
            valid_up_to: None,
            body: Body::Schema {
                layer: Arc::new(layer),
                cache: Arc::new(Mutex::new(HashMap::new())),
            },
        }
    }

    /// An exact operator with finitely many terms.
    pub fn from_terms(name: impl Into<String>, terms: impl IntoIterator<Item = NOTerm>) -> Self {
        let mut map = TermMap::new();
        for t in terms {
            add_into(&mut map, t.annihilate, t.create, t.coeff);
        }
        let mut op = Operator::finite(name, map, None);
        op.degree = op.degree.or(Some(0));
        op
    }

    pub fn zero() -> Self {
        Operator::from_terms("0", [])
    }

    pub fn identity() -> Self {
        Operator::from_terms(
            "1",
            [NOTerm::new(Q::one(), Partition::empty(), Partition::empty())],
        )
    }

    /// Multiplication by `p_mu`.
    pub fn multiply_by(mu: Partition) -> Self {
        let name = format!("p{mu}");
        Operator::from_terms(name, [NOTerm::new(Q::one(), mu, Partition::empty())])
    }

    /// The derivative `d_nu`.
    pub fn derivative(nu: Partition) -> Self {
        let name = format!("d{nu}");
        Operator::from_terms(name, [NOTerm::new(Q::one(), Partition::empty(), nu)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Degree shift when every term shares one.
    pub fn degree(&self) -> Option<i64> {
        self.degree
    }

    /// Largest input degree on which this operator is exact, if bounded.
    pub fn valid_up_to(&self) -> Option<usize> {
        self.valid_up_to
    }

    pub fn is_schema(&self) -> bool {
        matches!(self.body, Body::Schema { .. })
    }

    /// Terms whose annihilation index has size exactly `m`.
    pub fn layer(&self, m: usize) -> Arc<TermMap> {
        match &self.body {
            Body::Finite(layers) => layers.get(&m).cloned().unwrap_or_default(),
            Body::Schema { layer, cache } => {
                if let Some(hit) = cache.lock().expect("layer cache poisoned").get(&m) {
                    return hit.clone();
                }
                let built = Arc::new(layer(m));
                cache
                    .lock()
                    .expect("layer cache poisoned")
                    .entry(m)
                    .or_insert(built)
                    .clone()
            }
        }
    }

    /// All terms that can act on inputs of degree `n`, i.e. `|nu| <= n`.
    pub fn instantiate(&self, n: usize) -> Vec<NOTerm> {
        (0..=n)
            .flat_map(|m| {
                let layer = self.layer(m);
                layer
                    .iter()
                    .flat_map(|(nu, row)| {
                        row.iter()
                            .map(|(mu, c)| NOTerm::new(c.clone(), mu.clone(), nu.clone()))
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// The finite operator made of the terms acting on degrees up to `n`,
    /// exact on that range.
    pub fn truncate(&self, n: usize) -> Operator {
        let mut map = TermMap::new();
        for m in 0..=n {
            merge_scaled(&mut map, &self.layer(m), &Q::one());
        }
        let valid = Some(self.valid_up_to.map_or(n, |v| v.min(n)));
        let mut op = Operator::finite(self.name.clone(), map, valid);
        op.degree = op.degree.or(self.degree);
        op
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        match self.valid_up_to {
            Some(w) if n > w => Err(Error::WindowTooSmall(format!(
                "{} is exact only up to degree {w}, input has degree {n}",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    /// Image of `p_lambda`.
    pub fn apply_p(&self, lambda: &Partition) -> Result<SymFun> {
        self.check_degree(lambda.size())?;
        let mut out = SymFun::zero();
        for nu in lambda.sub_multisets() {
            let layer = self.layer(nu.size());
            let Some(row) = layer.get(&nu) else { continue };
            let rest = lambda.difference(&nu).expect("sub-multiset");
            let w = derivative_weight(lambda, &nu);
            for (mu, c) in row {
                out.add_term(rest.union(mu), c * &w);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, f: &SymFun) -> Result<SymFun> {
        let mut out = SymFun::zero();
        for (lambda, c) in f.terms() {
            let image = self.apply_p(lambda)?;
            for (mu, x) in image.into_terms() {
                out.add_term(mu, x * c);
            }
        }
        Ok(out)
    }

    /// Largest degree shift among terms acting on inputs up to degree `n`.
    pub fn max_shift(&self, n: usize) -> i64 {
        if let Some(d) = self.degree {
            return d;
        }
        (0..=n)
            .flat_map(|m| {
                let layer = self.layer(m);
                layer
                    .iter()
                    .flat_map(|(nu, row)| {
                        row.keys()
                            .map(|mu| mu.size() as i64 - nu.size() as i64)
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Operator {
        let name = format!("({c})*{}", self.name);
        if c.is_zero() {
            return Operator::zero();
        }
        match &self.body {
            Body::Finite(_) => {
                let mut map = TermMap::new();
                for (_, layer) in self.finite_layers() {
                    merge_scaled(&mut map, &layer, c);
                }
                let mut op = Operator::finite(name, map, self.valid_up_to);
                op.degree = self.degree;
                op
            }
            Body::Schema { .. } => {
                let inner = self.clone();
                let c = c.clone();
                let mut op = Operator::schema(name, self.degree, move |m| {
                    let mut map = TermMap::new();
                    merge_scaled(&mut map, &inner.layer(m), &c);
                    map
                });
                op.valid_up_to = self.valid_up_to;
                op
            }
        }
    }

    fn finite_layers(&self) -> Vec<(usize, Arc<TermMap>)> {
        match &self.body {
            Body::Finite(layers) => layers.iter().map(|(k, v)| (*k, v.clone())).collect(),
            Body::Schema { .. } => Vec::new(),
        }
    }

    fn max_finite_layer(&self) -> usize {
        match &self.body {
            Body::Finite(layers) => layers.keys().next_back().copied().unwrap_or(0),
            Body::Schema { .. } => 0,
        }
    }

    /// Linear combination `a * self + b * other`.
    pub fn combine(&self, a: &Q, other: &Operator, b: &Q) -> Operator {
        let name = format!("{}*{} + {}*{}", a, self.name, b, other.name);
        let valid = match (self.valid_up_to, other.valid_up_to) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let degree = match (self.degree, other.degree) {
            (Some(x), Some(y)) if x == y => Some(x),
            _ if a.is_zero() => other.degree,
            _ if b.is_zero() => self.degree,
            _ => None,
        };
        if !self.is_schema() && !other.is_schema() {
            let mut map = TermMap::new();
            for (_, l) in self.finite_layers() {
                merge_scaled(&mut map, &l, a);
            }
            for (_, l) in other.finite_layers() {
                merge_scaled(&mut map, &l, b);
            }
            let mut op = Operator::finite(name, map, valid);
            op.degree = op.degree.or(degree);
            return op;
        }
        let (x, y, a, b) = (self.clone(), other.clone(), a.clone(), b.clone());
        let mut op = Operator::schema(name, degree, move |m| {
            let mut map = TermMap::new();
            merge_scaled(&mut map, &x.layer(m), &a);
            merge_scaled(&mut map, &y.layer(m), &b);
            map
        });
        op.valid_up_to = valid;
        op
    }

    pub fn plus(&self, other: &Operator) -> Operator {
        self.combine(&Q::one(), other, &Q::one())
    }

    pub fn minus(&self, other: &Operator) -> Operator {
        self.combine(&Q::one(), other, &-Q::one())
    }

    /// All terms acting on inputs up to degree `n`, as a flat map.
    pub fn terms_up_to(&self, n: usize) -> TermMap {
        let mut map = TermMap::new();
        for m in 0..=n {
            merge_scaled(&mut map, &self.layer(m), &Q::one());
        }
        map
    }

    /// Every term of a finite operator.
    pub fn terms(&self) -> Vec<NOTerm> {
        self.instantiate(self.valid_up_to.unwrap_or_else(|| self.max_finite_layer()))
    }

    /// Term list as JSON `{"coeff","create","annihilate"}` objects, for all
    /// terms acting on degrees up to `n`.
    pub fn to_json(&self, n: usize) -> serde_json::Value {
        let list: Vec<TermJson> = self
            .instantiate(n)
            .into_iter()
            .map(|t| TermJson {
                coeff: t.coeff.to_string(),
                create: t.create,
                annihilate: t.annihilate,
            })
            .collect();
        serde_json::to_value(list).expect("operator serializes")
    }

    pub fn from_json(name: &str, value: &serde_json::Value) -> Result<Operator> {
        let list: Vec<TermJson> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let terms = list
            .into_iter()
            .map(|t| Ok(NOTerm::new(parse_q(&t.coeff)?, t.create, t.annihilate)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Operator::from_terms(name, terms))
    }

    /// Human-readable term list up to degree `n`, e.g. `3*p[2,1]d[3]`.
    pub fn display_terms(&self, n: usize) -> String {
        let terms = self.instantiate(n);
        if terms.is_empty() {
            return "0".into();
        }
        terms
            .iter()
            .map(|t| {
                let idx = |p: &Partition| {
                    p.parts()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                };
                let mut s = t.coeff.to_string();
                if !t.create.is_empty() {
                    s.push_str(&format!("*p[{}]", idx(&t.create)));
                }
                if !t.annihilate.is_empty() {
                    s.push_str(&format!("*d[{}]", idx(&t.annihilate)));
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("valid_up_to", &self.valid_up_to)
            .field("schema", &self.is_schema())
            .finish()
    }
}

/// Normal ordering of `d_nu p_mu`: pairs `(coefficient, remaining mu,
/// remaining nu)` summed over every contraction pattern.
fn contractions(nu: &Partition, mu: &Partition) -> Vec<(Q, Partition, Partition)> {
    let mut out = vec![(Q::one(), mu.clone(), nu.clone())];
    for (k, s) in nu.multiplicities() {
        let r = mu.multiplicity(k);
        if r == 0 {
            continue;
        }
        let mut next = Vec::new();
        for (c, m, n) in &out {
            for j in 0..=s.min(r) {
                let w = Q::from_integer(binomial(s, j) * falling(r, j));
                let mut m2 = m.clone();
                let mut n2 = n.clone();
                for _ in 0..j {
                    m2 = m2.without_part(k).expect("part present");
                    n2 = n2.without_part(k).expect("part present");
                }
                next.push((c * w, m2, n2));
            }
        }
        out = next;
    }
    out
}

/// Normally ordered product `a * b` exact on inputs of degree at most
/// `window`.
pub fn compose(a: &Operator, b: &Operator, window: usize) -> Result<Operator> {
    if let Some(w) = b.valid_up_to {
        if w < window {
            return Err(Error::WindowTooSmall(format!(
                "{} is exact only up to degree {w}, window needs {window}",
                b.name
            )));
        }
    }
    let shift = b.max_shift(window).max(0) as usize;
    let middle = window + shift;
    if let Some(w) = a.valid_up_to {
        if w < middle {
            return Err(Error::WindowTooSmall(format!(
                "{} is exact only up to degree {w}, intermediate degree reaches {middle}",
                a.name
            )));
        }
    }
    let b_terms = b.instantiate(window);
    let a_terms = a.instantiate(middle);
    let mut map = TermMap::new();
    for tb in &b_terms {
        for ta in &a_terms {
            // annihilators of a that survive contraction end up acting on the input
            let common: usize = ta
                .annihilate
                .multiplicities()
                .iter()
                .map(|&(k, s)| k * s.min(tb.create.multiplicity(k)))
                .sum();
            if ta.annihilate.size() - common + tb.annihilate.size() > window {
                continue;
            }
            let c = &ta.coeff * &tb.coeff;
            for (w, mu_rest, nu_rest) in contractions(&ta.annihilate, &tb.create) {
                let nu = nu_rest.union(&tb.annihilate);
                if nu.size() > window {
                    continue;
                }
                add_into(&mut map, nu, ta.create.union(&mu_rest), &c * w);
            }
        }
    }
    let mut op = Operator::finite(format!("{}.{}", a.name, b.name), map, Some(window));
    if let (Some(x), Some(y)) = (a.degree, b.degree) {
        op.degree = Some(x + y);
    }
    Ok(op)
}

/// `[a, b] = a b - b a`, exact on inputs of degree at most `window`.
pub fn commutator(a: &Operator, b: &Operator, window: usize) -> Result<Operator> {
    let ab = compose(a, b, window)?;
    let ba = compose(b, a, window)?;
    let mut op = ab.minus(&ba).with_name(format!("[{}, {}]", a.name, b.name));
    op.valid_up_to = Some(window);
    if let (Some(x), Some(y)) = (a.degree, b.degree) {
        op.degree = Some(x + y);
    }
    Ok(op)
}

/// True when the two operators agree term by term on inputs up to degree `n`.
pub fn equal_up_to(a: &Operator, b: &Operator, n: usize) -> bool {
    a.terms_up_to(n) == b.terms_up_to(n)
}
