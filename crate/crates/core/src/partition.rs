//! Integer partitions and the combinatorial accessors used throughout the
//! engine: multiplicities, centralizer orders, contents, arm and leg
//! lengths, single-part bumps and dominance.
//!
//! The canonical total order lists partitions by size first and then in
//! reverse lexicographic order, so that `enumerate(4)` yields
//! `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::factorial;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

impl Partition {
    /// Validates a weakly decreasing sequence of positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "partition parts must be positive: {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        let size = parts.iter().sum();
        Ok(Partition { parts, size })
    }

    /// Builds a partition from an unordered multiset of positive parts.
    pub fn from_multiset(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn single(k: usize) -> Self {
        Partition::from_multiset(vec![k])
    }

    /// The partition `(1, 1, ..., 1)` of `n`.
    pub fn ones(n: usize) -> Self {
        Partition::from_multiset(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, k: usize) -> usize {
        self.parts.iter().filter(|&&p| p == k).count()
    }

    /// `(k, m_k)` pairs for every part value present, in decreasing `k`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((k, m)) if *k == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Centralizer order `z = prod_k k^{m_k} m_k!`.
    pub fn z_factor(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (k, m)| {
                acc * num_traits::pow(BigInt::from(k), m) * factorial(m)
            })
    }

    /// Size `n! / z` of the conjugacy class of cycle type `self`.
    pub fn class_size(&self) -> BigInt {
        factorial(self.size) / self.z_factor()
    }

    /// Replaces one part `m` by `m + 1`.
    pub fn bump(&self, m: usize) -> Result<Self> {
        let pos = self
            .parts
            .iter()
            .position(|&p| p == m)
            .ok_or_else(|| Error::MissingPart {
                partition: self.clone(),
                part: m,
            })?;
        let mut parts = self.parts.clone();
        parts[pos] += 1;
        Ok(Partition::from_multiset(parts))
    }

    pub fn with_part(&self, k: usize) -> Self {
        let mut parts = self.parts.clone();
        parts.push(k);
        Partition::from_multiset(parts)
    }

    pub fn without_part(&self, k: usize) -> Option<Self> {
        let pos = self.parts.iter().position(|&p| p == k)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition {
            size: self.size - k,
            parts,
        })
    }

    /// Multiset union.
    pub fn union(&self, other: &Partition) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::from_multiset(parts)
    }

    /// Multiset difference, `None` unless `other` is a sub-multiset.
    pub fn difference(&self, other: &Partition) -> Option<Self> {
        let mut parts = self.parts.clone();
        for &k in &other.parts {
            let pos = parts.iter().position(|&p| p == k)?;
            parts.remove(pos);
        }
        Some(Partition {
            size: self.size - other.size,
            parts,
        })
    }

    /// All sub-multisets of the parts, each exactly once.
    pub fn sub_multisets(&self) -> Vec<Partition> {
        let mults = self.multiplicities();
        let mut out = vec![Vec::new()];
        for (k, m) in mults {
            let mut next = Vec::with_capacity(out.len() * (m + 1));
            for base in &out {
                for c in 0..=m {
                    let mut v: Vec<usize> = base.clone();
                    v.extend(std::iter::repeat_n(k, c));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(Partition::from_multiset).collect()
    }

    pub fn conjugate(&self) -> Self {
        let parts = (1..=self.largest())
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition::from_multiset(parts)
    }

    /// Boxes `(row, col)`, both starting at 1, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| (i + 1, j)))
    }

    pub fn contains_box(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && row <= self.parts.len() && col <= self.parts[row - 1]
    }

    /// Sum of contents `col - row` over all boxes.
    pub fn content_sum(&self) -> i64 {
        self.boxes().map(|(i, j)| j as i64 - i as i64).sum()
    }

    /// `n(lambda) = sum_i (i - 1) lambda_i`.
    pub fn n_statistic(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// Arm `lambda_row - col` and leg `lambda'_col - row` of a box.
    pub fn arm_leg(&self, row: usize, col: usize) -> Result<(usize, usize)> {
        if !self.contains_box(row, col) {
            return Err(Error::BoxOutside {
                partition: self.clone(),
                row,
                col,
            });
        }
        let arm = self.parts[row - 1] - col;
        let column_height = self.parts.iter().filter(|&&p| p >= col).count();
        Ok((arm, column_height - row))
    }

    /// Dominance order: `self <= other` iff every partial sum of `self`
    /// is bounded by the corresponding partial sum of `other`.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.size != other.size {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for i in 0..self.parts.len().max(other.parts.len()) {
            a += self.parts.get(i).copied().unwrap_or(0);
            b += other.parts.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn enumerate(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
                size: prefix.iter().sum(),
            });
            return;
        }
        for k in (1..=max.min(remaining)).rev() {
            prefix.push(k);
            rec(remaining - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions of `n`.
pub fn count(n: usize) -> usize {
    let mut table = vec![0usize; n + 1];
    table[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            table[m] += table[m - k];
        }
    }
    table[n]
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

#[macro_export]
macro_rules! partition {
    () => { $crate::partition::Partition::empty() };
    ($($p:expr),+ $(,)?) => {
        $crate::partition::Partition::new(vec![$($p),+]).expect("valid partition literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_partitions(n: usize) -> Vec<Vec<usize>> {
        // every composition, sorted and deduplicated
        fn comps(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=n {
                for mut rest in comps(n - first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let mut all: Vec<Vec<usize>> = comps(n)
            .into_iter()
            .map(|mut c| {
                c.sort_unstable_by(|a, b| b.cmp(a));
                c
            })
            .collect();
        all.sort();
        all.dedup();
        all
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate(0), vec![Partition::empty()]);
        assert_eq!(
            enumerate(4),
            vec![
                partition![4],
                partition![3, 1],
                partition![2, 2],
                partition![2, 1, 1],
                partition![1, 1, 1, 1]
            ]
        );
        assert_eq!(enumerate(5).len(), 7);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for n in 0..=12 {
            let mut fast: Vec<Vec<usize>> =
                enumerate(n).into_iter().map(|p| p.parts).collect();
            fast.sort();
            assert_eq!(fast, brute_partitions(n), "n = {n}");
        }
    }

    #[test]
    fn counts_up_to_twenty() {
        for n in 0..=20 {
            assert_eq!(enumerate(n).len(), count(n));
        }
        assert_eq!(count(20), 627);
    }

    #[test]
    fn enumeration_is_sorted_canonically() {
        for n in 0..=8 {
            let ps = enumerate(n);
            assert!(ps.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn multiplicities() {
        assert_eq!(partition![2, 1, 1].multiplicity(1), 2);
        assert_eq!(partition![2, 1, 1].multiplicity(3), 0);
        assert_eq!(partition![4].multiplicity(4), 1);
    }

    #[test]
    fn z_factors() {
        assert_eq!(partition![1, 1, 1, 1].z_factor(), BigInt::from(24));
        assert_eq!(partition![2, 1, 1].z_factor(), BigInt::from(4));
        assert_eq!(Partition::empty().z_factor(), BigInt::from(1));
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for n in 0..=8 {
            let total: BigInt = enumerate(n).iter().map(|p| p.class_size()).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn bumps() {
        assert_eq!(partition![2, 1].bump(1).unwrap(), partition![2, 2]);
        assert_eq!(partition![3, 1].bump(3).unwrap(), partition![4, 1]);
        assert!(matches!(
            partition![1].bump(2),
            Err(Error::MissingPart { part: 2, .. })
        ));
    }

    #[test]
    fn bump_properties() {
        for n in 1..=8 {
            for lam in enumerate(n) {
                for (m, mult) in lam.multiplicities() {
                    let b = lam.bump(m).unwrap();
                    assert_eq!(b.size(), n + 1);
                    assert_eq!(b.multiplicity(m), mult - 1);
                    assert_eq!(b.multiplicity(m + 1), lam.multiplicity(m + 1) + 1);
                }
            }
        }
    }

    #[test]
    fn contents() {
        assert_eq!(partition![4].content_sum(), 6);
        assert_eq!(partition![1, 1, 1, 1].content_sum(), -6);
        assert_eq!(partition![2, 2].content_sum(), 0);
        for n in 0..=10 {
            for lam in enumerate(n) {
                assert_eq!(lam.content_sum(), -lam.conjugate().content_sum());
            }
        }
    }

    #[test]
    fn arm_and_leg() {
        assert_eq!(partition![2, 1].arm_leg(1, 1).unwrap(), (1, 1));
        assert_eq!(partition![3].arm_leg(1, 1).unwrap(), (2, 0));
        assert_eq!(partition![1].arm_leg(1, 1).unwrap(), (0, 0));
        assert!(partition![2, 1].arm_leg(2, 2).is_err());
        assert!(partition![2, 1].arm_leg(0, 1).is_err());
    }

    #[test]
    fn conjugation_is_involutive() {
        for n in 0..=10 {
            for lam in enumerate(n) {
                assert_eq!(lam.conjugate().conjugate(), lam);
            }
        }
        assert_eq!(partition![3, 1].conjugate(), partition![2, 1, 1]);
    }

    #[test]
    fn sub_multisets_count() {
        let lam = partition![3, 1, 1, 1];
        assert_eq!(lam.sub_multisets().len(), 2 * 4);
        let mut subs = partition![2, 2].sub_multisets();
        subs.sort();
        assert_eq!(subs, vec![Partition::empty(), partition![2], partition![2, 2]]);
    }

    #[test]
    fn dominance() {
        assert!(partition![2, 2].dominated_by(&partition![3, 1]));
        assert!(!partition![3, 1].dominated_by(&partition![2, 2]));
        assert!(!partition![3, 3].dominated_by(&partition![4, 1, 1]));
        assert!(!partition![4, 1, 1].dominated_by(&partition![3, 3]));
    }

    #[test]
    fn json_form() {
        let s = serde_json::to_string(&partition![3, 1]).unwrap();
        assert_eq!(s, "[3,1]");
        let back: Partition = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back, partition![3, 1]);
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }
}
