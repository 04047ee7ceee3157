//! Product-one free sequences of maximal length `n` over `C_n ⋊_s C_2`.
//!
//! Over these groups a sequence of length `n` is product-one free exactly when
//! it is one of
//!
//! * `(yᵘ)^[n−1] · xyᵛ` with `gcd(u, n) = 1` (any admissible `(n, s)`), or, only
//!   for `(n, s) = (2ᵗ, 2ᵗ⁻¹ + 1)` with `t ≥ 3`,
//! * `(xyᵘ)^[n−1] · xyᵛ` with `u` odd and `v` even,
//! * `(xyᵘ)^[n−1] · yᵛ` with `u`, `v` odd.
//!
//! The forward direction is checked instance by instance with the product
//! engine, the converse by exhaustive search over all multisets of length `n`.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::{ClassifierError, GroupError};
use crate::group::{euler_phi, gcd, Group, GroupElement, GroupSpec, MetacyclicParams};
use crate::notation::{format_sequence, format_word};
use crate::product::is_product_one_free;
use crate::search::{search_product_one_free, SearchOptions};
use crate::sequence::Sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind")]
pub enum ExtremalPattern {
    /// `(yᵘ)^[n−1] · xyᵛ`
    TypeI { u: u32, v: u32 },
    /// `(xyᵘ)^[n−1] · xyᵛ`
    TypeIIxx { u: u32, v: u32 },
    /// `(xyᵘ)^[n−1] · yᵛ`
    TypeIIxy { u: u32, v: u32 },
}

impl fmt::Display for ExtremalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremalPattern::TypeI { u, v } => write!(f, "TypeI(u={u},v={v})"),
            ExtremalPattern::TypeIIxx { u, v } => write!(f, "TypeIIxx(u={u},v={v})"),
            ExtremalPattern::TypeIIxy { u, v } => write!(f, "TypeIIxy(u={u},v={v})"),
        }
    }
}

fn admissible_params(group: &Group) -> Result<MetacyclicParams, GroupError> {
    match group.params() {
        Some(p) if p.class().is_paper_metacyclic() => Ok(p),
        _ => Err(GroupError::NotPaperMetacyclic(group.spec().to_string())),
    }
}

/// Recognises the extremal families syntactically; `seq` must have length `n`.
pub fn match_pattern(group: &Group, seq: &Sequence) -> Result<Option<ExtremalPattern>, ClassifierError> {
    let params = admissible_params(group)?;
    let n = params.n();
    if seq.len() != n as usize {
        return Err(ClassifierError::WrongLength { got: seq.len(), expected: n as usize });
    }
    let support: Vec<(usize, u32)> = seq.support().collect();
    let (heavy, single) = match support.as_slice() {
        [(a, ca), (b, cb)] if *ca == n - 1 && *cb == 1 => (*a, *b),
        [(a, ca), (b, cb)] if *cb == n - 1 && *ca == 1 => (*b, *a),
        _ => return Ok(None),
    };
    let (heavy, single) = (group.element(heavy), group.element(single));
    let odd = |k: u32| k % 2 == 1;
    let pattern = match (heavy.a, single.a) {
        (0, 1) if gcd(heavy.b as u64, n as u64) == 1 => Some(ExtremalPattern::TypeI { u: heavy.b, v: single.b }),
        (1, 1) if params.class().is_modular_maximal_cyclic() && odd(heavy.b) && !odd(single.b) => {
            Some(ExtremalPattern::TypeIIxx { u: heavy.b, v: single.b })
        }
        (1, 0) if params.class().is_modular_maximal_cyclic() && odd(heavy.b) && odd(single.b) => {
            Some(ExtremalPattern::TypeIIxy { u: heavy.b, v: single.b })
        }
        _ => None,
    };
    Ok(pattern)
}

/// The length-`n` sequence described by `pattern`.
pub fn realize(group: &Group, pattern: ExtremalPattern) -> Result<Sequence, GroupError> {
    let n = admissible_params(group)?.n();
    let (heavy, single) = match pattern {
        ExtremalPattern::TypeI { u, v } => (GroupElement::y(u), GroupElement::xy(v)),
        ExtremalPattern::TypeIIxx { u, v } => (GroupElement::xy(u), GroupElement::xy(v)),
        ExtremalPattern::TypeIIxy { u, v } => (GroupElement::xy(u), GroupElement::y(v)),
    };
    let mut seq = Sequence::empty(group.order());
    seq.push(group.index_of(heavy)?, n - 1);
    seq.push(group.index_of(single)?, 1);
    Ok(seq)
}

/// Every pattern instance admissible for `group`, in a fixed order.
pub fn all_patterns(group: &Group) -> Result<Vec<ExtremalPattern>, GroupError> {
    let params = admissible_params(group)?;
    let n = params.n();
    let mut out = Vec::new();
    for u in (0..n).filter(|&u| gcd(u as u64, n as u64) == 1) {
        for v in 0..n {
            out.push(ExtremalPattern::TypeI { u, v });
        }
    }
    if params.class().is_modular_maximal_cyclic() {
        for u in (1..n).step_by(2) {
            for v in (0..n).step_by(2) {
                out.push(ExtremalPattern::TypeIIxx { u, v });
            }
        }
        for u in (1..n).step_by(2) {
            for v in (1..n).step_by(2) {
                out.push(ExtremalPattern::TypeIIxy { u, v });
            }
        }
    }
    Ok(out)
}

/// Closed-form count of extremal sequences: `φ(n)·n`, plus `2·(n/2)²` for the
/// modular maximal-cyclic groups.
pub fn predicted_count(params: MetacyclicParams) -> usize {
    let n = params.n() as u64;
    let mut count = euler_phi(n) * n;
    if params.class().is_modular_maximal_cyclic() {
        count += 2 * (n / 2) * (n / 2);
    }
    count as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyFailure {
    pub pattern: ExtremalPattern,
    pub sequence: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamiliesReport {
    pub params: GroupSpec,
    pub type_i: usize,
    pub type_ii_xx: usize,
    pub type_ii_xy: usize,
    pub checked: usize,
    pub failures: Vec<FamilyFailure>,
    pub passed: bool,
}

/// Checks that every instance of every admissible family is product-one free.
pub fn verify_families_pof(group: &Group, state_budget: u64) -> Result<FamiliesReport, ClassifierError> {
    let patterns = all_patterns(group)?;
    let mut failures = Vec::new();
    for &pattern in &patterns {
        let seq = realize(group, pattern)?;
        let verdict = is_product_one_free(group, &seq, state_budget)?;
        if !verdict.product_one_free {
            failures.push(FamilyFailure {
                pattern,
                sequence: format_sequence(group, &seq),
                witness: format_word(group, verdict.witness.as_deref().unwrap_or_default()),
            });
        }
    }
    let count = |f: fn(&ExtremalPattern) -> bool| patterns.iter().filter(|p| f(p)).count();
    Ok(FamiliesReport {
        params: group.spec(),
        type_i: count(|p| matches!(p, ExtremalPattern::TypeI { .. })),
        type_ii_xx: count(|p| matches!(p, ExtremalPattern::TypeIIxx { .. })),
        type_ii_xy: count(|p| matches!(p, ExtremalPattern::TypeIIxy { .. })),
        checked: patterns.len(),
        passed: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug)]
pub struct ExtremalEnumeration {
    /// Product-one free sequences of length `n`, lexicographically ordered.
    pub sequences: Vec<Sequence>,
    pub complete: bool,
    pub branches_done: usize,
    pub branches_total: usize,
    pub nodes: u64,
    pub pruned: u64,
}

/// All product-one free sequences of length exactly `n`.
pub fn enumerate_extremal_pof(group: &Group, options: &SearchOptions) -> Result<ExtremalEnumeration, ClassifierError> {
    let n = admissible_params(group)?.n() as usize;
    let out = search_product_one_free(group, n, Some(n), options)?;
    Ok(ExtremalEnumeration {
        sequences: out.collected,
        complete: out.complete,
        branches_done: out.branches_done,
        branches_total: out.branches_total,
        nodes: out.nodes,
        pruned: out.pruned,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Coverage {
    pub branches_done: usize,
    pub branches_total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremStats {
    pub runtime_ms: u128,
    pub nodes: u64,
    pub pruned: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub params: GroupSpec,
    /// From the closed-form count.
    pub predicted_count: usize,
    /// Distinct sequences realised by the pattern grid.
    pub pattern_count: usize,
    pub enumerated_count: usize,
    /// Predicted but not found product-one free.
    pub missing: Vec<String>,
    /// Found product-one free but not predicted.
    pub extra: Vec<String>,
    pub complete: bool,
    pub coverage: Coverage,
    pub passed: bool,
    pub stats: TheoremStats,
}

/// Compares the enumerated extremal sequences with the predicted families.
pub fn verify_theorem(group: &Group, options: &SearchOptions) -> Result<TheoremReport, ClassifierError> {
    let params = admissible_params(group)?;
    let started = Instant::now();
    let predicted: BTreeSet<Sequence> =
        all_patterns(group)?.into_iter().map(|p| realize(group, p)).collect::<Result<_, _>>()?;
    let found = enumerate_extremal_pof(group, options)?;
    let enumerated: BTreeSet<Sequence> = found.sequences.iter().cloned().collect();
    let missing: Vec<String> = if found.complete {
        predicted.difference(&enumerated).map(|s| format_sequence(group, s)).collect()
    } else {
        Vec::new()
    };
    let extra: Vec<String> = enumerated.difference(&predicted).map(|s| format_sequence(group, s)).collect();
    let predicted_count = predicted_count(params);
    let passed = found.complete
        && missing.is_empty()
        && extra.is_empty()
        && predicted_count == predicted.len()
        && enumerated.len() == predicted_count;
    Ok(TheoremReport {
        params: group.spec(),
        predicted_count,
        pattern_count: predicted.len(),
        enumerated_count: enumerated.len(),
        missing,
        extra,
        complete: found.complete,
        coverage: Coverage { branches_done: found.branches_done, branches_total: found.branches_total },
        passed,
        stats: TheoremStats { runtime_ms: started.elapsed().as_millis(), nodes: found.nodes, pruned: found.pruned },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorChangeReport {
    pub params: GroupSpec,
    pub v: u32,
    pub closure_size: usize,
    pub group_order: usize,
    pub generates_group: bool,
    /// The type-II families are the type-I family in the generators `x, xyᵛ`
    /// only for the modular maximal-cyclic groups.
    pub applies: bool,
}

/// Size of the subgroup generated by `x` and `xyᵛ`.
pub fn generator_change_note(group: &Group, v: u32) -> Result<GeneratorChangeReport, GroupError> {
    let params = admissible_params(group)?;
    let x = group.index_of(GroupElement::xy(0))?;
    let xyv = group.index_of(GroupElement::xy(v % params.n()))?;
    let closure = group.closure(&[x, xyv]).count_ones() as usize;
    Ok(GeneratorChangeReport {
        params: group.spec(),
        v,
        closure_size: closure,
        group_order: group.order(),
        generates_group: closure == group.order(),
        applies: params.class().is_modular_maximal_cyclic() && v % 2 == 1,
    })
}
