//! Exact products and subproducts of sequences in non-abelian groups.
//!
//! For a sequence `S`, `π(S)` is the set of products of all terms of `S` in
//! every order and `Π(S)` the union of `π(T)` over nonempty `T | S`. Both come
//! from one dynamic programme over sub-multisets:
//!
//! ```text
//! π(∅) = {1},    π(U) = ⋃_{g | U} π(U · g^[-1]) · g
//! ```
//!
//! [`ProductTable`] stores `π(U)` as a bitmask for every `U | S`, indexed in
//! mixed radix with the largest element index as the most significant digit.
//! Appending a term whose index is at least every index already present only
//! appends a slice to the table, so depth-first searches over canonical
//! multisets push and pop terms without recomputing their prefix.

use serde::Serialize;

use crate::error::ProductError;
use crate::group::Group;
use crate::sequence::Sequence;

pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

/// A set of group elements as a bitmask over element indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ElementSet(pub u64);

impl ElementSet {
    pub fn contains(self, g: usize) -> bool {
        self.0 >> g & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let g = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(g)
        })
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElementSet(iter.into_iter().fold(0, |acc, g| acc | 1 << g))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    /// `π(S)`.
    pub pi: ElementSet,
    /// `Π(S)`.
    pub subproducts: ElementSet,
    pub product_one_free: bool,
    /// An ordering of a nonempty subsequence whose product is the identity.
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PofVerdict {
    pub product_one_free: bool,
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug)]
struct Digit {
    element: usize,
    count: u32,
    weight: usize,
}

#[derive(Clone, Copy, Debug)]
struct Mark {
    len: usize,
    new_digit: bool,
}

/// Result of [`ProductTable::push`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Push {
    /// The extended sequence has the identity in no new entry.
    Clean,
    /// Entry `index` of the new slice contains the identity. With early exit
    /// the slice is incomplete: the only valid follow-ups are
    /// [`ProductTable::witness`] and [`ProductTable::pop`].
    Identity { index: usize },
}

/// `π(U)` for every sub-multiset `U` of the current sequence.
#[derive(Clone, Debug)]
pub struct ProductTable<'g> {
    group: &'g Group,
    budget: u64,
    digits: Vec<Digit>,
    masks: Vec<u64>,
    marks: Vec<Mark>,
    scratch: Vec<u32>,
}

impl<'g> ProductTable<'g> {
    pub fn new(group: &'g Group, budget: u64) -> Self {
        ProductTable {
            group,
            budget,
            digits: Vec::new(),
            masks: vec![1u64 << group.identity()],
            marks: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    /// Number of sub-multisets currently tabulated (the empty one included).
    pub fn entries(&self) -> usize {
        self.masks.len()
    }

    pub fn last_element(&self) -> Option<usize> {
        self.digits.last().map(|d| d.element)
    }

    /// `π` of the whole current sequence.
    pub fn pi(&self) -> ElementSet {
        ElementSet(*self.masks.last().expect("table is never empty"))
    }

    /// `Π` of the whole current sequence.
    pub fn subproducts(&self) -> ElementSet {
        ElementSet(self.masks[1..].iter().fold(0, |acc, m| acc | m))
    }

    /// Appends one copy of `g`, which must be at least the last element pushed.
    ///
    /// With `stop_on_identity` the slice computation stops at the first entry
    /// containing the identity.
    pub fn push(&mut self, g: usize, stop_on_identity: bool) -> Result<Push, ProductError> {
        debug_assert!(g < self.group.order());
        let start = self.masks.len();
        let new_digit = match self.digits.last() {
            Some(d) if d.element == g => false,
            Some(d) => {
                assert!(d.element < g, "terms must be pushed in nondecreasing index order");
                true
            }
            None => true,
        };
        let width = if new_digit { start } else { self.digits.last().map_or(0, |d| d.weight) };
        let needed = (start as u128 + width as u128) * self.group.order() as u128;
        if needed > self.budget as u128 {
            return Err(ProductError::StateBudgetExceeded { needed, budget: self.budget });
        }
        if new_digit {
            self.digits.push(Digit { element: g, count: 1, weight: start });
        } else if let Some(d) = self.digits.last_mut() {
            d.count += 1;
        }
        self.marks.push(Mark { len: start, new_digit });

        let lower = self.digits.len() - 1;
        self.scratch.clear();
        self.scratch.resize(lower, 0);
        self.masks.reserve(width);
        let identity_bit = 1u64 << self.group.identity();
        for offset in 0..width {
            let idx = start + offset;
            let mut mask = self.group.right_translate(self.masks[idx - width], g);
            for (i, &d) in self.scratch.iter().enumerate() {
                if d > 0 {
                    let digit = self.digits[i];
                    mask |= self.group.right_translate(self.masks[idx - digit.weight], digit.element);
                }
            }
            self.masks.push(mask);
            if mask & identity_bit != 0 && stop_on_identity {
                return Ok(Push::Identity { index: idx });
            }
            // Advance the mixed-radix counter over the lower digits.
            for (i, d) in self.scratch.iter_mut().enumerate() {
                if *d < self.digits[i].count {
                    *d += 1;
                    break;
                }
                *d = 0;
            }
        }
        match self.masks[start..].iter().position(|m| m & identity_bit != 0) {
            Some(pos) => Ok(Push::Identity { index: start + pos }),
            None => Ok(Push::Clean),
        }
    }

    /// Removes the most recently pushed term.
    pub fn pop(&mut self) {
        let mark = self.marks.pop().expect("pop on empty table");
        self.masks.truncate(mark.len);
        if mark.new_digit {
            self.digits.pop();
        } else if let Some(d) = self.digits.last_mut() {
            d.count -= 1;
        }
    }

    pub fn clear(&mut self) {
        while !self.marks.is_empty() {
            self.pop();
        }
    }

    /// The tabulated sequence.
    pub fn sequence(&self) -> Sequence {
        let mut seq = Sequence::empty(self.group.order());
        for d in &self.digits {
            seq.push(d.element, d.count);
        }
        seq
    }

    /// Reconstructs an ordering of sub-multiset `index` whose product is the
    /// identity. `index` must be a computed entry containing the identity.
    pub fn witness(&self, index: usize) -> Vec<usize> {
        let group = self.group;
        let mut remaining: Vec<u32> = Vec::with_capacity(self.digits.len());
        let mut rest = index;
        for (i, d) in self.digits.iter().enumerate() {
            let radix = self.digits.get(i + 1).map(|next| next.weight / d.weight);
            let value = match radix {
                Some(r) => (rest / d.weight) % r,
                None => rest / d.weight,
            };
            remaining.push(value as u32);
        }
        rest = index;
        let mut target = group.identity();
        let mut word = Vec::new();
        while rest != 0 {
            let step = self.digits.iter().enumerate().rev().find_map(|(i, d)| {
                if remaining[i] == 0 {
                    return None;
                }
                let before = group.op(target, group.inv(d.element));
                (self.masks[rest - d.weight] >> before & 1 == 1).then_some((i, before))
            });
            let (i, before) = step.expect("entry is a union over its predecessors");
            word.push(self.digits[i].element);
            remaining[i] -= 1;
            rest -= self.digits[i].weight;
            target = before;
        }
        debug_assert_eq!(target, group.identity());
        word.reverse();
        word
    }

    /// Loads `seq`, replacing the current contents.
    fn load(&mut self, seq: &Sequence, stop_on_identity: bool) -> Result<Option<usize>, ProductError> {
        self.clear();
        for (g, c) in seq.support() {
            for _ in 0..c {
                if let Push::Identity { index } = self.push(g, stop_on_identity)? {
                    if stop_on_identity {
                        return Ok(Some(index));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Number of DP states `(U, p)` bounded by `|G| · ∏ (v_g(S) + 1)`.
pub fn state_bound(group: &Group, seq: &Sequence) -> u128 {
    seq.support().map(|(_, c)| c as u128 + 1).product::<u128>() * group.order() as u128
}

fn check_group(group: &Group, seq: &Sequence) -> Result<(), ProductError> {
    if seq.order() != group.order() {
        return Err(ProductError::WrongGroup { len: seq.order(), order: group.order() });
    }
    Ok(())
}

/// Product sets and the product-one free verdict for `seq`.
pub fn compute_products(group: &Group, seq: &Sequence, budget: u64) -> Result<ProductReport, ProductError> {
    check_group(group, seq)?;
    let needed = state_bound(group, seq);
    if needed > budget as u128 {
        return Err(ProductError::StateBudgetExceeded { needed, budget });
    }
    let mut table = ProductTable::new(group, budget);
    table.load(seq, false)?;
    let subproducts = if seq.is_empty() { ElementSet::default() } else { table.subproducts() };
    let pi = if seq.is_empty() { ElementSet::default() } else { table.pi() };
    let identity_bit = 1u64 << group.identity();
    let witness = table.masks[1..]
        .iter()
        .position(|m| m & identity_bit != 0)
        .map(|pos| table.witness(pos + 1));
    Ok(ProductReport { pi, subproducts, product_one_free: witness.is_none(), witness })
}

/// Whether `1 ∉ Π(seq)`, with a witness ordering when it is not.
pub fn is_product_one_free(group: &Group, seq: &Sequence, budget: u64) -> Result<PofVerdict, ProductError> {
    check_group(group, seq)?;
    let identity = group.identity();
    if seq.count(identity) > 0 {
        return Ok(PofVerdict { product_one_free: false, witness: Some(vec![identity]) });
    }
    let needed = state_bound(group, seq);
    if needed > budget as u128 {
        return Err(ProductError::StateBudgetExceeded { needed, budget });
    }
    let mut table = ProductTable::new(group, budget);
    Ok(match table.load(seq, true)? {
        Some(index) => PofVerdict { product_one_free: false, witness: Some(table.witness(index)) },
        None => PofVerdict { product_one_free: true, witness: None },
    })
}

/// Left-to-right product of a word of element indices.
pub fn word_product(group: &Group, word: &[usize]) -> usize {
    word.iter().fold(group.identity(), |acc, &g| group.op(acc, g))
}

/// Independent oracle: every nonempty subset of term instances in every order.
pub fn brute_force_oracle(group: &Group, seq: &Sequence) -> Result<ProductReport, ProductError> {
    check_group(group, seq)?;
    let terms = seq.terms();
    let k = terms.len();
    if k > 8 {
        return Err(ProductError::TooLongForOracle(k));
    }
    let mut pi = 0u64;
    let mut subproducts = 0u64;
    let mut witness: Option<Vec<usize>> = None;
    for subset in 1u32..(1 << k) {
        let mut chosen: Vec<usize> = (0..k).filter(|&i| subset >> i & 1 == 1).map(|i| terms[i]).collect();
        for_each_permutation(&mut chosen, &mut |word| {
            let p = word_product(group, word);
            subproducts |= 1 << p;
            if subset == (1 << k) - 1 {
                pi |= 1 << p;
            }
            if p == group.identity() && witness.is_none() {
                witness = Some(word.to_vec());
            }
        });
    }
    Ok(ProductReport {
        pi: ElementSet(pi),
        subproducts: ElementSet(subproducts),
        product_one_free: witness.is_none(),
        witness,
    })
}

/// Heap's algorithm.
fn for_each_permutation(items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    fn heap(k: usize, items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, items, visit);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
        heap(k - 1, items, visit);
    }
    heap(items.len(), items, visit);
}
