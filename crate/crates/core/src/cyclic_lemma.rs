//! Certificate checks for the structure of long zero-sum free sequences over
//! `C_m` (`m ≥ 3`, `|S| > m/2`):
//!
//! 1. some term has multiplicity at least `max(m − 2|S| + 1, |S| − ⌊(m−1)/3⌋)`;
//! 2. some unit `t` makes `Σ (aᵢt mod m) < m`, residues taken in `[0, m−1]`;
//! 3. every `k` in `1..=Σ (aᵢt mod m)` is the normalised sum of a subsequence.
//!
//! Sequences are given as exponent lists `a₁, …, a_|S|` of a fixed generator.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::LemmaError;
use crate::group::gcd;

/// Subset sums of `residues` in `C_m` over nonempty subsequences, as a bitmask.
pub fn subset_sums(residues: &[u32], m: u32) -> u64 {
    let mut reached = 0u64;
    for &a in residues {
        let a = a % m;
        reached |= rotate(reached, a, m) | 1 << a;
    }
    reached
}

fn rotate(set: u64, by: u32, m: u32) -> u64 {
    if by == 0 {
        return set;
    }
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    ((set << by) | (set >> (m - by))) & full
}

pub fn is_zero_sum_free(residues: &[u32], m: u32) -> bool {
    subset_sums(residues, m) & 1 == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Certificate {
    pub m: u32,
    pub residues: Vec<u32>,
    pub heavy_term: u32,
    pub heavy_multiplicity: u32,
    pub bound: i64,
    pub t: u32,
    pub residue_sum: u32,
    /// Bit `k` set when `k` is a normalised subsequence sum.
    pub coverage: u64,
}

fn check_hypotheses(residues: &[u32], m: u32) -> Result<(), LemmaError> {
    if !(3..=64).contains(&m) {
        return Err(LemmaError::Modulus(m));
    }
    if 2 * residues.len() <= m as usize {
        return Err(LemmaError::Hypothesis(format!("|S| = {} is not greater than m/2 = {m}/2", residues.len())));
    }
    if !is_zero_sum_free(residues, m) {
        return Err(LemmaError::Hypothesis("S is not product-one free".into()));
    }
    Ok(())
}

/// `max(m − 2|S| + 1, |S| − ⌊(m−1)/3⌋)`.
pub fn multiplicity_bound(len: usize, m: u32) -> i64 {
    let (len, m) = (len as i64, m as i64);
    (m - 2 * len + 1).max(len - (m - 1) / 3)
}

/// The smallest element whose multiplicity meets the bound, if any.
pub fn check_multiplicity_bound(residues: &[u32], m: u32) -> Result<(bool, Option<(u32, u32)>), LemmaError> {
    check_hypotheses(residues, m)?;
    let bound = multiplicity_bound(residues.len(), m);
    let mut counts = BTreeMap::new();
    for &a in residues {
        *counts.entry(a % m).or_insert(0u32) += 1;
    }
    let heavy = counts.into_iter().find(|&(_, c)| c as i64 >= bound);
    Ok((heavy.is_some(), heavy))
}

/// `Σ (aᵢt mod m)`.
pub fn normalized_sum(residues: &[u32], m: u32, t: u32) -> u64 {
    residues.iter().map(|&a| a as u64 * t as u64 % m as u64).sum()
}

/// Smallest unit `t` with normalised sum below `m`, with that sum.
pub fn find_normalizer(residues: &[u32], m: u32) -> Result<Option<(u32, u32)>, LemmaError> {
    check_hypotheses(residues, m)?;
    Ok((1..m)
        .filter(|&t| gcd(t as u64, m as u64) == 1)
        .map(|t| (t, normalized_sum(residues, m, t)))
        .find(|&(_, sum)| sum < m as u64)
        .map(|(t, sum)| (t, sum as u32)))
}

/// Integer subset sums of the normalised residues (no reduction mod `m`).
pub fn normalized_coverage(residues: &[u32], m: u32, t: u32) -> u64 {
    let mut reached = 1u64; // the empty sum
    for &a in residues {
        let r = a as u64 * t as u64 % m as u64;
        reached |= reached << r;
    }
    reached & !1
}

/// Whether every `k` in `1..=Σ(aᵢt mod m)` is a normalised subsequence sum.
pub fn check_subsum_coverage(residues: &[u32], m: u32, t: u32) -> Result<(bool, u64), LemmaError> {
    check_hypotheses(residues, m)?;
    let sum = normalized_sum(residues, m, t);
    if sum >= m as u64 {
        return Err(LemmaError::Hypothesis(format!("t = {t} does not normalise S (sum {sum} >= {m})")));
    }
    let coverage = normalized_coverage(residues, m, t);
    let wanted = if sum == 0 { 0 } else { ((1u64 << sum) - 1) << 1 };
    Ok((coverage & wanted == wanted, coverage))
}

/// Runs all three checks; `Err` only for violated hypotheses.
pub fn certify(residues: &[u32], m: u32) -> Result<Result<Lemma1Certificate, String>, LemmaError> {
    let (ok, heavy) = check_multiplicity_bound(residues, m)?;
    let bound = multiplicity_bound(residues.len(), m);
    let Some((heavy_term, heavy_multiplicity)) = heavy.filter(|_| ok) else {
        return Ok(Err(format!("no term reaches multiplicity {bound}")));
    };
    let Some((t, residue_sum)) = find_normalizer(residues, m)? else {
        return Ok(Err("no unit t normalises the sequence".into()));
    };
    let (covered, coverage) = check_subsum_coverage(residues, m, t)?;
    if !covered {
        return Ok(Err(format!("normalised sums with t = {t} miss some k <= {residue_sum}")));
    }
    Ok(Ok(Lemma1Certificate {
        m,
        residues: residues.to_vec(),
        heavy_term,
        heavy_multiplicity,
        bound,
        t,
        residue_sum,
        coverage,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Debug, Serialize)]
pub struct Falsification {
    pub m: u32,
    pub residues: Vec<u32>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusAudit {
    pub m: u32,
    pub mode: AuditMode,
    pub instances: u64,
    /// Instances per sequence length.
    pub by_length: BTreeMap<usize, u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub per_modulus: Vec<ModulusAudit>,
    pub instances: u64,
    pub falsifications: Vec<Falsification>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.falsifications.is_empty()
    }
}

pub const EXHAUSTIVE_LIMIT: u32 = 12;

/// Audits every modulus in `m_min..=m_max`.
///
/// Exhaustive mode (m ≤ 12) checks every zero-sum free sequence longer than
/// `m/2`; sample mode checks `samples` random ones per modulus, drawn from
/// `seed`.
pub fn audit_lemma1(
    m_min: u32,
    m_max: u32,
    mode: AuditMode,
    samples: u64,
    seed: u64,
) -> Result<AuditReport, LemmaError> {
    let mut report = AuditReport { per_modulus: Vec::new(), instances: 0, falsifications: Vec::new() };
    for m in m_min..=m_max {
        if m < 3 || m > 64 {
            return Err(LemmaError::Modulus(m));
        }
        if mode == AuditMode::Exhaustive && m > EXHAUSTIVE_LIMIT {
            return Err(LemmaError::Hypothesis(format!("exhaustive mode is limited to m <= {EXHAUSTIVE_LIMIT}")));
        }
        let mut audit = ModulusAudit { m, mode, instances: 0, by_length: BTreeMap::new() };
        let mut check = |residues: &[u32]| -> Result<(), LemmaError> {
            audit.instances += 1;
            *audit.by_length.entry(residues.len()).or_default() += 1;
            if let Err(reason) = certify(residues, m)? {
                report.falsifications.push(Falsification { m, residues: residues.to_vec(), reason });
            }
            Ok(())
        };
        match mode {
            AuditMode::Exhaustive => for_each_long_zero_sum_free(m, &mut check)?,
            AuditMode::Sample => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                for _ in 0..samples {
                    check(&sample_long_zero_sum_free(m, &mut rng))?;
                }
            }
        }
        report.instances += audit.instances;
        report.per_modulus.push(audit);
    }
    Ok(report)
}

/// Visits every zero-sum free multiset over `C_m` of length greater than
/// `m/2`, as a nondecreasing exponent list.
pub fn for_each_long_zero_sum_free<E>(
    m: u32,
    visit: &mut dyn FnMut(&[u32]) -> Result<(), E>,
) -> Result<(), E> {
    fn rec<E>(
        m: u32,
        start: u32,
        sums: u64,
        stack: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]) -> Result<(), E>,
    ) -> Result<(), E> {
        if 2 * stack.len() > m as usize {
            visit(stack)?;
        }
        for a in start..m {
            let next = sums | rotate(sums, a, m) | 1 << a;
            if next & 1 == 0 {
                stack.push(a);
                rec(m, a, next, stack, visit)?;
                stack.pop();
            }
        }
        Ok(())
    }
    rec(m, 1, 0, &mut Vec::new(), visit)
}

/// A random zero-sum free sequence over `C_m` of length greater than `m/2`.
///
/// Terms are grown one at a time under a random unit `t`, preferring small
/// normalised values, and kept only while the sequence stays zero-sum free.
/// One draw in ten is uniform over the nonzero residues.
pub fn sample_long_zero_sum_free(m: u32, rng: &mut impl Rng) -> Vec<u32> {
    let units: Vec<u32> = (1..m).filter(|&t| gcd(t as u64, m as u64) == 1).collect();
    loop {
        let t = units[rng.gen_range(0..units.len())];
        let t_inv = units.iter().copied().find(|&u| (u as u64 * t as u64) % m as u64 == 1).unwrap_or(1);
        let mut residues = Vec::new();
        let mut sums = 0u64;
        let mut failures = 0;
        while failures < 24 && residues.len() + 1 < m as usize {
            let a = if rng.gen_bool(0.1) {
                rng.gen_range(1..m)
            } else {
                let b = small_value(m, rng);
                (b as u64 * t_inv as u64 % m as u64) as u32
            };
            let next = sums | rotate(sums, a, m) | 1 << a;
            if next & 1 == 0 {
                residues.push(a);
                sums = next;
                failures = 0;
            } else {
                failures += 1;
            }
        }
        if 2 * residues.len() > m as usize {
            // Random sublength above m/2 so shorter long sequences are drawn too.
            let keep = rng.gen_range(m as usize / 2 + 1..=residues.len());
            residues.truncate(keep);
            residues.sort_unstable();
            return residues;
        }
    }
}

/// `b ∈ 1..m` with probability roughly proportional to `2^-b`.
fn small_value(m: u32, rng: &mut impl Rng) -> u32 {
    let mut b = 1;
    while b + 1 < m && rng.gen_bool(0.5) {
        b += 1;
    }
    b
}
