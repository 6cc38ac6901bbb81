use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A multi-index `α ∈ ℕ^d`, `d ≥ 1`.
///
/// Ordered graded-lexicographically (total degree first) so that maps keyed
/// on multi-indices iterate in truncation order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("multi-index must have dimension >= 1".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// The unit index `e_j`.
    pub fn unit(d: usize, j: usize) -> Self {
        let mut v = vec![0; d];
        v[j] = 1;
        Self(v)
    }

    /// Shorthand for a one-dimensional index.
    pub fn d1(k: usize) -> Self {
        Self(vec![k])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_j`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, j: usize) -> usize {
        self.0[j]
    }

    /// Componentwise partial order `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `α + e_j`.
    pub fn add_unit(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v[j] += 1;
        Self(v)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices with `|α| ≤ max_total` in graded-lex order.
pub fn multi_indices(d: usize, max_total: usize) -> Vec<MultiIndex> {
    fn rec(d: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if d == 1 {
            for k in 0..=budget {
                let mut v = prefix.clone();
                v.push(k);
                out.push(MultiIndex(v));
            }
            return;
        }
        for k in 0..=budget {
            prefix.push(k);
            rec(d - 1, budget - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, max_total, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_and_order() {
        let a = MultiIndex::new(vec![2, 3]).unwrap();
        let b = MultiIndex::new(vec![2, 4]).unwrap();
        assert_eq!(a.total(), 5);
        assert!(a.le(&b));
        assert!(!b.le(&a));
        assert!(a < b);
    }

    #[test]
    fn enumeration_counts() {
        // |{α ∈ ℕ^2 : |α| ≤ 20}| = C(22, 2)
        assert_eq!(multi_indices(2, 20).len(), 231);
        assert_eq!(multi_indices(1, 5).len(), 6);
        assert_eq!(multi_indices(3, 0).len(), 1);
    }

    #[test]
    fn graded_order_is_by_total_degree() {
        let all = multi_indices(2, 3);
        let totals: Vec<usize> = all.iter().map(|a| a.total()).collect();
        let mut sorted = totals.clone();
        sorted.sort_unstable();
        assert_eq!(totals, sorted);
    }

    #[test]
    fn empty_dimension_rejected() {
        assert!(MultiIndex::new(vec![]).is_err());
    }
}
