//! Depth-first search over product-one free multisets.
//!
//! Multisets are grown in nondecreasing element-index order, so each one is
//! reached exactly once. A child `S·g` is kept only if it is product-one free,
//! and because that property passes to subsequences, an element `h` rejected
//! as an extension of `S` is never offered to any descendant of `S` again.
//! Every product-one free multiset up to the length cap is therefore visited
//! once and nothing else is expanded.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::ProductError;
use crate::group::Group;
use crate::product::{ProductTable, Push, DEFAULT_STATE_BUDGET};
use crate::sequence::Sequence;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub state_budget: u64,
    /// Worker threads for the top-level branches; 1 runs on the caller's thread.
    pub workers: usize,
    /// Wall-clock budget; when it runs out the search stops and reports
    /// `complete = false`.
    pub time_budget: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { state_budget: DEFAULT_STATE_BUDGET, workers: 1, time_budget: None }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    /// Length of the longest product-one free multiset reached.
    pub deepest: usize,
    /// Lexicographically least multiset of length `deepest`.
    pub deepest_witness: Option<Sequence>,
    /// Product-one free multisets of the collection length, in lexicographic order.
    pub collected: Vec<Sequence>,
    /// Product-one free multisets visited.
    pub nodes: u64,
    /// Extensions rejected because they were not product-one free.
    pub pruned: u64,
    /// Product-one free multisets counted per length.
    pub per_length: Vec<u64>,
    pub complete: bool,
    pub branches_total: usize,
    pub branches_done: usize,
}

struct Context<'a> {
    max_len: usize,
    collect_len: Option<usize>,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
}

#[derive(Default)]
struct Branch {
    deepest: usize,
    witness: Option<Sequence>,
    collected: Vec<Sequence>,
    nodes: u64,
    pruned: u64,
    per_length: Vec<u64>,
    finished: bool,
}

/// Visits every product-one free multiset of length `1..=max_len` over `group`.
///
/// With `collect_len = Some(k)` the multisets of length exactly `k` are
/// returned in [`SearchOutcome::collected`].
pub fn search_product_one_free(
    group: &Group,
    max_len: usize,
    collect_len: Option<usize>,
    options: &SearchOptions,
) -> Result<SearchOutcome, ProductError> {
    let abort = AtomicBool::new(false);
    let ctx = Context {
        max_len,
        collect_len,
        deadline: options.time_budget.map(|d| Instant::now() + d),
        abort: &abort,
    };
    let identity = group.identity();
    let firsts: Vec<usize> = (0..group.order()).filter(|&g| g != identity).collect();
    let run = |first: usize| run_branch(group, first, &ctx, options.state_budget);

    let branches: Vec<Result<Branch, ProductError>> = if max_len == 0 {
        Vec::new()
    } else if options.workers <= 1 {
        firsts.iter().map(|&f| run(f)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .expect("thread pool");
        pool.install(|| firsts.par_iter().map(|&f| run(f)).collect())
    };

    let mut out = SearchOutcome {
        per_length: vec![0; max_len + 1],
        branches_total: if max_len == 0 { 0 } else { firsts.len() },
        ..Default::default()
    };
    out.per_length[0] = 1;
    for branch in branches {
        let branch = branch?;
        out.nodes += branch.nodes;
        out.pruned += branch.pruned;
        for (len, c) in branch.per_length.iter().enumerate() {
            out.per_length[len] += c;
        }
        if branch.deepest > out.deepest {
            out.deepest = branch.deepest;
            out.deepest_witness = branch.witness;
        }
        out.collected.extend(branch.collected);
        out.branches_done += usize::from(branch.finished);
    }
    out.complete = out.branches_done == out.branches_total;
    if out.deepest == 0 {
        out.deepest_witness = Some(Sequence::empty(group.order()));
    }
    Ok(out)
}

fn run_branch(group: &Group, first: usize, ctx: &Context<'_>, budget: u64) -> Result<Branch, ProductError> {
    let mut branch = Branch { per_length: vec![0; ctx.max_len + 1], ..Default::default() };
    if ctx.abort.load(Ordering::Relaxed) {
        return Ok(branch);
    }
    let mut table = ProductTable::new(group, budget);
    if let Push::Identity { .. } = table.push(first, true)? {
        branch.finished = true;
        return Ok(branch);
    }
    let candidates: Vec<usize> = (first..group.order()).filter(|&g| g != group.identity()).collect();
    branch.finished = explore(&mut table, &candidates, ctx, &mut branch)?;
    Ok(branch)
}

/// Returns `false` if the search was interrupted below this node.
fn explore(
    table: &mut ProductTable<'_>,
    candidates: &[usize],
    ctx: &Context<'_>,
    branch: &mut Branch,
) -> Result<bool, ProductError> {
    let depth = table.len();
    branch.nodes += 1;
    branch.per_length[depth] += 1;
    if depth > branch.deepest {
        branch.deepest = depth;
        branch.witness = Some(table.sequence());
    }
    if ctx.collect_len == Some(depth) {
        branch.collected.push(table.sequence());
    }
    if depth == ctx.max_len {
        return Ok(true);
    }
    if let Some(deadline) = ctx.deadline {
        if ctx.abort.load(Ordering::Relaxed) || Instant::now() >= deadline {
            ctx.abort.store(true, Ordering::Relaxed);
            return Ok(false);
        }
    }
    let mut keep = Vec::with_capacity(candidates.len());
    for &g in candidates {
        let outcome = table.push(g, true)?;
        table.pop();
        match outcome {
            Push::Clean => keep.push(g),
            Push::Identity { .. } => branch.pruned += 1,
        }
    }
    for i in 0..keep.len() {
        table.push(keep[i], true)?;
        let done = explore(table, &keep[i..], ctx, branch)?;
        table.pop();
        if !done {
            return Ok(false);
        }
    }
    Ok(true)
}
