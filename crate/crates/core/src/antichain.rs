//! Upward-closed subsets of `S × {0..C}^k`, stored as their minimal elements.

use crate::error::{Error, Result};

/// A credit vector. Components lie in `[0, C]` whenever stored in an antichain.
pub type Credit = Vec<i64>;

/// Component-wise `a <= b`.
pub fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antichain {
    cap: u64,
    dimension: usize,
    /// Per state, pairwise incomparable credits kept in lexicographic order.
    elements: Vec<Vec<Credit>>,
}

impl Antichain {
    pub fn empty(num_states: usize, dimension: usize, cap: u64) -> Self {
        Antichain {
            cap,
            dimension,
            elements: vec![Vec::new(); num_states],
        }
    }

    /// The whole universe `U(C)`: the zero vector at every state.
    pub fn full(num_states: usize, dimension: usize, cap: u64) -> Self {
        Antichain {
            cap,
            dimension,
            elements: vec![vec![vec![0; dimension]]; num_states],
        }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_states(&self) -> usize {
        self.elements.len()
    }

    /// Total number of stored minimal elements.
    pub fn len(&self) -> usize {
        self.elements.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.iter().all(Vec::is_empty)
    }

    /// Minimal credits stored at `s`, lexicographically ordered.
    pub fn at(&self, s: usize) -> &[Credit] {
        &self.elements[s]
    }

    fn check(&self, e: &[i64]) -> Result<()> {
        if e.len() != self.dimension {
            return Err(Error::Mismatch(format!(
                "credit of length {} in a {}-dimensional antichain",
                e.len(),
                self.dimension
            )));
        }
        let cap = self.cap;
        match e.iter().find(|&&v| v < 0 || v as u64 > cap) {
            Some(&value) => Err(Error::CreditOutOfRange { value, cap }),
            None => Ok(()),
        }
    }

    /// Adds `(s, e)` to the represented set. Returns whether the set grew.
    pub fn insert_min(&mut self, s: usize, e: &[i64]) -> Result<bool> {
        self.check(e)?;
        Ok(self.insert_unchecked(s, e))
    }

    pub(crate) fn insert_unchecked(&mut self, s: usize, e: &[i64]) -> bool {
        let list = &mut self.elements[s];
        if list.iter().any(|x| leq(x, e)) {
            return false;
        }
        list.retain(|x| !leq(e, x));
        let pos = list.partition_point(|x| x.as_slice() < e);
        list.insert(pos, e.to_vec());
        true
    }

    /// Whether some stored `(s, e')` has `e' <= e`. No clamping is applied.
    pub fn contains_upward(&self, s: usize, e: &[i64]) -> bool {
        self.elements
            .get(s)
            .is_some_and(|list| list.iter().any(|x| leq(x, e)))
    }

    /// Whether both antichains represent the same upward-closed set.
    pub fn set_equal(&self, other: &Antichain) -> Result<bool> {
        self.same_universe(other)?;
        Ok(self.elements == other.elements)
    }

    /// Whether the set represented by `self` is included in that of `other`.
    pub fn is_subset(&self, other: &Antichain) -> Result<bool> {
        self.same_universe(other)?;
        Ok(self
            .elements
            .iter()
            .enumerate()
            .all(|(s, list)| list.iter().all(|e| other.contains_upward(s, e))))
    }

    fn same_universe(&self, other: &Antichain) -> Result<()> {
        if self.cap != other.cap
            || self.dimension != other.dimension
            || self.num_states() != other.num_states()
        {
            return Err(Error::Mismatch(format!(
                "universes differ: (|S|={}, k={}, C={}) vs (|S|={}, k={}, C={})",
                self.num_states(),
                self.dimension,
                self.cap,
                other.num_states(),
                other.dimension,
                other.cap
            )));
        }
        Ok(())
    }

    /// All minimal elements ordered by state index, then lexicographically.
    pub fn min_elements(&self) -> Vec<(usize, Credit)> {
        self.elements
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |e| (s, e.clone())))
            .collect()
    }

    /// Replaces the elements at `s` by the minimal elements of `candidates`.
    pub(crate) fn set_state(&mut self, s: usize, candidates: Vec<Credit>) {
        self.elements[s].clear();
        for e in candidates {
            self.insert_unchecked(s, &e);
        }
    }

    /// Lexicographically smallest stored credit at `s` that is `<= bound`.
    pub fn first_below(&self, s: usize, bound: &[i64]) -> Option<&Credit> {
        self.elements[s].iter().find(|x| leq(x, bound))
    }
}
