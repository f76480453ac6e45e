//! Finite partial orders on move occurrences, with linear-extension enumeration.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A partial order `⪯` on a small labelled carrier (at most 64 elements).
///
/// Stored as strict-predecessor bitsets, transitively closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovePartialOrder {
    labels: Vec<String>,
    preds: Vec<u64>,
}

impl MovePartialOrder {
    /// The discrete order on `labels`.
    pub fn discrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        assert!(n <= 64, "carrier too large");
        MovePartialOrder { labels, preds: vec![0; n] }
    }

    /// Builds the reflexive-transitive closure of `pairs` (`(a, b)` meaning `a ⪯ b`).
    pub fn from_pairs(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut order = Self::discrete(labels);
        for &(a, b) in pairs {
            if a != b {
                order.preds[b] |= 1 << a;
            }
        }
        order.close()?;
        Ok(order)
    }

    fn close(&mut self) -> Result<()> {
        let n = self.preds.len();
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = self.preds[i];
                let mut rest = self.preds[i];
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    acc |= self.preds[j];
                }
                if acc != self.preds[i] {
                    self.preds[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            if self.preds[i] & (1 << i) != 0 {
                return Err(Error::CausalityCycle(self.labels[i].clone()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `a ⪯ b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.preds[b] & (1 << a) != 0
    }

    /// `a ⪯ b` and `a ≠ b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.preds[b] & (1 << a) != 0
    }

    /// Strict predecessors of `b` as a bitset.
    pub fn predecessors(&self, b: usize) -> u64 {
        self.preds[b]
    }

    /// Covering pairs `a ⋖ b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for b in 0..n {
            for a in 0..n {
                if !self.lt(a, b) {
                    continue;
                }
                let between = (0..n).any(|c| self.lt(a, c) && self.lt(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Covering pairs with labels, sorted by label.
    pub fn cover_labels(&self) -> Vec<(String, String)> {
        let mut v: Vec<_> =
            self.covers().into_iter().map(|(a, b)| (self.labels[a].clone(), self.labels[b].clone())).collect();
        v.sort();
        v
    }

    pub fn is_linear_extension(&self, seq: &[usize]) -> bool {
        if seq.len() != self.len() {
            return false;
        }
        let mut seen = 0u64;
        for &x in seq {
            if x >= self.len() || seen & (1 << x) != 0 || self.preds[x] & !seen != 0 {
                return false;
            }
            seen |= 1 << x;
        }
        true
    }

    /// All linear extensions, in lexicographic order of element indices.
    pub fn linearizations(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.len());
        self.linearize(0, &mut cur, &mut out);
        out
    }

    fn linearize(&self, seen: u64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == self.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..self.len() {
            if seen & (1 << x) == 0 && self.preds[x] & !seen == 0 {
                cur.push(x);
                self.linearize(seen | (1 << x), cur, out);
                cur.pop();
            }
        }
    }

    /// Number of linear extensions, by dynamic programming over down-sets.
    pub fn count_linearizations(&self) -> u64 {
        let n = self.len();
        let mut memo = std::collections::HashMap::new();
        fn go(order: &MovePartialOrder, seen: u64, n: usize, memo: &mut std::collections::HashMap<u64, u64>) -> u64 {
            if seen.count_ones() as usize == n {
                return 1;
            }
            if let Some(&c) = memo.get(&seen) {
                return c;
            }
            let mut total = 0;
            for x in 0..n {
                if seen & (1 << x) == 0 && order.preds[x] & !seen == 0 {
                    total += go(order, seen | (1 << x), n, memo);
                }
            }
            memo.insert(seen, total);
            total
        }
        go(self, 0, n, &mut memo)
    }
}

impl fmt::Display for MovePartialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.cover_labels().into_iter().map(|(a, b)| format!("{a} < {b}")).collect();
        write!(f, "{{{}}}", pairs.join(", "))
    }
}

impl Serialize for MovePartialOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MovePartialOrder", 2)?;
        st.serialize_field("elements", &self.labels)?;
        st.serialize_field("covers", &self.cover_labels())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("m{i}")).collect()
    }

    #[test]
    fn two_chains_between_bottom_and_top() {
        // 0 < 1 < 2 < 5, 0 < 3 < 4 < 5
        let o = MovePartialOrder::from_pairs(labels(6), &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(o.linearizations().len(), 6);
        assert_eq!(o.count_linearizations(), 6);
        assert_eq!(o.covers().len(), 6);
        assert!(o.leq(0, 5));
    }

    #[test]
    fn cycle_is_rejected() {
        let err = MovePartialOrder::from_pairs(labels(2), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::CausalityCycle(_)));
    }

    #[test]
    fn discrete_order_has_all_permutations() {
        let o = MovePartialOrder::discrete(labels(3));
        assert_eq!(o.linearizations().len(), 6);
        assert!(o.covers().is_empty());
        let one = MovePartialOrder::discrete(labels(1));
        assert_eq!(one.linearizations(), vec![vec![0]]);
    }
}
