//! The small Davenport constant `d(G)`: the maximal length of a product-one
//! free sequence over `G`.

use std::time::Instant;

use serde::Serialize;

use crate::error::{GroupError, ProductError};
use crate::group::{Group, GroupSpec, MetacyclicParams};
use crate::notation::format_sequence;
use crate::product::is_product_one_free;
use crate::search::{search_product_one_free, SearchOptions};
use crate::sequence::Sequence;

#[derive(Clone, Debug)]
pub struct DavenportResult {
    pub d: usize,
    /// Lexicographically least product-one free sequence of length `d`.
    pub witness: Sequence,
    pub nodes_explored: u64,
    pub pruned: u64,
    /// A product-one free sequence of length `max_len` exists, so `d ≥ max_len`
    /// and the value is only a lower bound.
    pub max_len_reached: bool,
    /// The whole tree up to `max_len` was covered (no time-budget cut).
    pub complete: bool,
}

impl DavenportResult {
    /// `d` is the exact constant.
    pub fn is_exact(&self) -> bool {
        self.complete && !self.max_len_reached
    }
}

/// Searches all product-one free sequences of length up to `max_len`.
///
/// Pass `max_len = d + 1` to certify a conjectured value `d`.
pub fn small_davenport(group: &Group, max_len: usize, options: &SearchOptions) -> Result<DavenportResult, ProductError> {
    let out = search_product_one_free(group, max_len.max(1), None, options)?;
    let witness = out.deepest_witness.unwrap_or_else(|| Sequence::empty(group.order()));
    Ok(DavenportResult {
        d: out.deepest,
        witness,
        nodes_explored: out.nodes,
        pruned: out.pruned,
        max_len_reached: out.deepest >= max_len.max(1),
        complete: out.complete,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimStats {
    pub runtime_ms: u128,
    pub nodes_explored: u64,
    pub pruned: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimEntry {
    pub group: GroupSpec,
    pub expected: usize,
    pub found: usize,
    pub exact: bool,
    pub witness: String,
    pub witness_verified: bool,
    pub holds: bool,
    pub stats: ClaimStats,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClaimsReport {
    pub entries: Vec<ClaimEntry>,
    /// Entries where `d(G) = n` was not confirmed.
    pub falsifications: Vec<GroupSpec>,
}

/// Confirms `d(C_n ⋊_s C_2) = n` for each pair by searching up to length `n + 1`.
pub fn verify_davenport_claims(pairs: &[(i64, i64)], options: &SearchOptions) -> Result<ClaimsReport, ClaimsError> {
    let mut report = ClaimsReport::default();
    for &(n, s) in pairs {
        let params = MetacyclicParams::new(n, s)?;
        if !params.class().is_paper_metacyclic() {
            return Err(GroupError::NotPaperMetacyclic(format!("(n, s) = ({n}, {s})")).into());
        }
        let group = Group::metacyclic(params)?;
        let started = Instant::now();
        let result = small_davenport(&group, n as usize + 1, options)?;
        let witness_verified = is_product_one_free(&group, &result.witness, options.state_budget)?.product_one_free
            && result.witness.len() == result.d;
        let holds = result.is_exact() && result.d == n as usize && witness_verified;
        let entry = ClaimEntry {
            group: group.spec(),
            expected: n as usize,
            found: result.d,
            exact: result.is_exact(),
            witness: format_sequence(&group, &result.witness),
            witness_verified,
            holds,
            stats: ClaimStats {
                runtime_ms: started.elapsed().as_millis(),
                nodes_explored: result.nodes_explored,
                pruned: result.pruned,
            },
        };
        if !holds {
            report.falsifications.push(group.spec());
        }
        report.entries.push(entry);
    }
    Ok(report)
}

#[derive(Debug, thiserror::Error)]
pub enum ClaimsError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Product(#[from] ProductError),
}
