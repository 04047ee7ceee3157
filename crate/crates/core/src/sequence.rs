//! Sequences over a finite group: unordered multisets of elements.
//!
//! A [`Sequence`] is a dense multiplicity vector indexed by element index, so
//! equality is multiset equality and the vector doubles as a hash key.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::SequenceError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence {
    counts: Vec<u32>,
    len: usize,
}

impl Sequence {
    pub fn empty(order: usize) -> Self {
        Sequence { counts: vec![0; order], len: 0 }
    }

    /// Builds a sequence from element indices (any order, repeats allowed).
    pub fn from_indices(order: usize, terms: impl IntoIterator<Item = usize>) -> Self {
        let mut seq = Self::empty(order);
        for t in terms {
            seq.push(t, 1);
        }
        seq
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        let len = counts.iter().map(|&c| c as usize).sum();
        Sequence { counts, len }
    }

    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Multiplicity `v_g(S)`.
    pub fn count(&self, g: usize) -> u32 {
        self.counts[g]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn push(&mut self, g: usize, mult: u32) {
        self.counts[g] += mult;
        self.len += mult as usize;
    }

    /// `(element, multiplicity)` pairs with nonzero multiplicity, by index.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(g, &c)| (g, c))
    }

    /// Terms as a nondecreasing list of element indices.
    pub fn terms(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len);
        for (g, c) in self.support() {
            out.extend(std::iter::repeat(g).take(c as usize));
        }
        out
    }

    pub fn concat(&self, other: &Sequence) -> Result<Sequence, SequenceError> {
        self.check_order(other)?;
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        Ok(Sequence { counts, len: self.len + other.len })
    }

    /// `T | S`: every multiplicity of `self` is at most the one in `other`.
    pub fn divides(&self, other: &Sequence) -> bool {
        self.order() == other.order() && self.counts.iter().zip(&other.counts).all(|(t, s)| t <= s)
    }

    /// `S · T^[-1]`; requires `T | S`.
    pub fn remove(&self, divisor: &Sequence) -> Result<Sequence, SequenceError> {
        self.check_order(divisor)?;
        if !divisor.divides(self) {
            return Err(SequenceError::NotADivisor);
        }
        let counts = self.counts.iter().zip(&divisor.counts).map(|(s, t)| s - t).collect();
        Ok(Sequence { counts, len: self.len - divisor.len })
    }

    /// The subsequence of terms whose element satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Sequence {
        let counts: Vec<u32> =
            self.counts.iter().enumerate().map(|(g, &c)| if keep(g) { c } else { 0 }).collect();
        Sequence::from_counts(counts)
    }

    fn check_order(&self, other: &Sequence) -> Result<(), SequenceError> {
        if self.order() != other.order() {
            return Err(SequenceError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }
}

/// Sequences compare by their nondecreasing term tuples, lexicographically.
impl Ord for Sequence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms().cmp(&other.terms())
    }
}

impl PartialOrd for Sequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of multisets of size `k` over `order` elements, `C(order + k − 1, k)`.
pub fn multiset_count(order: usize, k: usize) -> u128 {
    if order == 0 {
        return u128::from(k == 0);
    }
    let (top, k) = ((order + k - 1) as u128, k as u128);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (top - i) / (i + 1);
    }
    acc
}

/// Every size-`k` multiset over `order` elements, each exactly once, in
/// lexicographic order of the nondecreasing index tuple.
pub fn enumerate_multisets(order: usize, k: usize) -> Multisets {
    Multisets { order, tuple: vec![0; k], done: order == 0 && k > 0 }
}

pub struct Multisets {
    order: usize,
    tuple: Vec<usize>,
    done: bool,
}

impl Iterator for Multisets {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        if self.done {
            return None;
        }
        let item = Sequence::from_indices(self.order, self.tuple.iter().copied());
        // Advance: bump the rightmost position that can grow, reset the tail to it.
        match self.tuple.iter().rposition(|&t| t + 1 < self.order) {
            Some(pos) => {
                let v = self.tuple[pos] + 1;
                self.tuple[pos..].iter_mut().for_each(|t| *t = v);
            }
            None => self.done = true,
        }
        Some(item)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Walk {
    Descend,
    /// Skip every multiset extending the current prefix.
    Prune,
}

/// Depth-first walk over nondecreasing index tuples of length `0..=k`.
///
/// `visit` sees each prefix (the root `[]` included) before its extensions and
/// may cut the subtree below it. Returns the number of prefixes visited.
pub fn walk_multisets(order: usize, k: usize, mut visit: impl FnMut(&[usize]) -> Walk) -> u64 {
    fn rec(order: usize, k: usize, tuple: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> Walk) -> u64 {
        let mut visited = 1;
        if visit(tuple) == Walk::Prune || tuple.len() == k {
            return visited;
        }
        let start = tuple.last().copied().unwrap_or(0);
        for g in start..order {
            tuple.push(g);
            visited += rec(order, k, tuple, visit);
            tuple.pop();
        }
        visited
    }
    rec(order, k, &mut Vec::with_capacity(k), &mut visit)
}
