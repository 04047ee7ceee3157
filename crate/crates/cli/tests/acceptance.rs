//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! straight to stdout, so the lines show up even when output capture is on.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use zsl_core::classifier::{verify_families_pof, verify_theorem};
use zsl_core::cyclic_lemma::{audit_lemma1, AuditMode};
use zsl_core::davenport::small_davenport;
use zsl_core::factorization::audit_factorizations;
use zsl_core::group::MetacyclicParams;
use zsl_core::product::{brute_force_oracle, compute_products};
use zsl_core::sequence::enumerate_multisets;
use zsl_core::{Group, SearchOptions, Sequence, DEFAULT_STATE_BUDGET};

const LARGE_CASE_BUDGET: Duration = Duration::from_secs(600);

fn report(id: u32, name: &str, started: Instant, failures: &[String], detail: &str) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let line = format!(
        "acceptance {id} [{name}]: {verdict} ({detail}; {:.2}s)\n",
        started.elapsed().as_secs_f64()
    );
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(failures.is_empty(), "criterion {id} failed: {failures:#?}");
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn options(time_budget: Option<Duration>) -> SearchOptions {
    SearchOptions { state_budget: DEFAULT_STATE_BUDGET, workers: workers(), time_budget }
}

fn metacyclic(n: i64, s: i64) -> Group {
    Group::metacyclic(MetacyclicParams::new(n, s).unwrap()).unwrap()
}

#[test]
fn criterion_1_davenport_values() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut cases: Vec<(Group, usize)> = (2..=16).map(|m| (Group::cyclic(m).unwrap(), m as usize - 1)).collect();
    for (n, s) in [(8, 3), (8, 5), (12, 5), (12, 7), (16, 7), (16, 9)] {
        cases.push((metacyclic(n, s), n as usize));
    }
    for (group, expected) in &cases {
        let result = small_davenport(group, expected + 1, &options(None)).unwrap();
        if !result.is_exact() || result.d != *expected {
            failures.push(format!("{}: d = {}, exact = {}, expected {expected}", group.spec(), result.d, result.is_exact()));
        }
    }
    report(1, "davenport values", started, &failures, &format!("{} groups", cases.len()));
}

#[test]
fn criterion_2_extremal_classification() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for (n, s, expected) in [(8, 3, 32), (8, 5, 64), (12, 5, 48), (12, 7, 48)] {
        let r = verify_theorem(&metacyclic(n, s), &options(None)).unwrap();
        if !r.passed || r.enumerated_count != expected || r.predicted_count != expected {
            failures.push(format!("({n},{s}): {r:?}"));
        }
        details.push(format!("({n},{s})={}", r.enumerated_count));
    }
    for (n, s, expected) in [(16, 7, 128), (16, 9, 256)] {
        let r = verify_theorem(&metacyclic(n, s), &options(Some(LARGE_CASE_BUDGET))).unwrap();
        if r.complete {
            if !r.passed || r.enumerated_count != expected {
                failures.push(format!("({n},{s}): {r:?}"));
            }
            details.push(format!("({n},{s})={}", r.enumerated_count));
        } else {
            if !r.extra.is_empty() {
                failures.push(format!("({n},{s}) partial run found unpredicted sequences: {:?}", r.extra));
            }
            details.push(format!(
                "({n},{s}) partial {}/{} branches",
                r.coverage.branches_done, r.coverage.branches_total
            ));
        }
    }
    report(2, "extremal classification", started, &failures, &details.join(", "));
}

#[test]
fn criterion_3_families_are_product_one_free() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in [8i64, 12, 16] {
        for s in 0..n {
            let Ok(params) = MetacyclicParams::new(n, s) else { continue };
            if !params.class().is_paper_metacyclic() {
                continue;
            }
            let r = verify_families_pof(&Group::metacyclic(params).unwrap(), DEFAULT_STATE_BUDGET).unwrap();
            checked += r.checked;
            failures.extend(r.failures.iter().map(|f| format!("({n},{s}): {} via {}", f.sequence, f.witness)));
        }
    }
    report(3, "family soundness", started, &failures, &format!("{checked} instances"));
}

#[test]
fn criterion_4_oracle_equivalence() {
    let started = Instant::now();
    let mut groups: Vec<Group> = (1..=24).map(|m| Group::cyclic(m).unwrap()).collect();
    for n in 3..=12 {
        for s in 0..n {
            if let Ok(params) = MetacyclicParams::new(n, s) {
                groups.push(Group::metacyclic(params).unwrap());
            }
        }
    }
    let mut failures = Vec::new();
    let mut compare = |group: &Group, seq: &Sequence| {
        let fast = compute_products(group, seq, DEFAULT_STATE_BUDGET).unwrap();
        let slow = brute_force_oracle(group, seq).unwrap();
        if fast.pi != slow.pi || fast.subproducts != slow.subproducts {
            failures.push(format!("{} {:?}", group.spec(), seq.terms()));
        }
    };
    let mut exhaustive = 0;
    for group in &groups {
        for k in 0..=3 {
            for seq in enumerate_multisets(group.order(), k) {
                compare(group, &seq);
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random = 1000;
    for _ in 0..random {
        let group = &groups[rng.gen_range(0..groups.len())];
        let len = rng.gen_range(1..=7);
        let seq = Sequence::from_indices(group.order(), (0..len).map(|_| rng.gen_range(0..group.order())));
        compare(group, &seq);
    }
    let detail = format!("{} groups, {exhaustive} exhaustive, {random} random", groups.len());
    report(4, "oracle equivalence", started, &failures, &detail);
}

#[test]
fn criterion_5_factorization() {
    let started = Instant::now();
    let audit = audit_factorizations(200);
    let mut failures = audit.violations.clone();
    failures.extend(audit.exclusion_violations.iter().map(|(n, s)| format!("excluded modulus {n} admits s = {s}")));
    if audit.case_a == 0 || audit.case_b == 0 || audit.excluded_moduli_scanned == 0 {
        failures.push(format!("degenerate audit: {audit:?}"));
    }
    let detail = format!(
        "{} pairs, {} case A, {} case B, {} excluded moduli",
        audit.pairs_checked, audit.case_a, audit.case_b, audit.excluded_moduli_scanned
    );
    report(5, "factorization", started, &failures, &detail);
}

#[test]
fn criterion_6_cyclic_structure_audit() {
    let started = Instant::now();
    let exhaustive = audit_lemma1(3, 12, AuditMode::Exhaustive, 0, 0).unwrap();
    let sampled = audit_lemma1(13, 20, AuditMode::Sample, 10_000, 7).unwrap();
    let failures: Vec<String> = exhaustive
        .falsifications
        .iter()
        .chain(&sampled.falsifications)
        .map(|f| format!("m = {}: {:?} ({})", f.m, f.residues, f.reason))
        .collect();
    let detail = format!("{} exhaustive, {} sampled", exhaustive.instances, sampled.instances);
    assert_eq!(sampled.instances, 8 * 10_000);
    report(6, "cyclic structure audit", started, &failures, &detail);
}

fn verify_theorem_json(workers: usize) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_zsl"))
        .args(["verify-theorem", "metacyclic:n=8,s=5", "--seed", "11", "--workers"])
        .arg(workers.to_string())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let mut value: Value = serde_json::from_slice(&out.stdout).unwrap();
    value.as_object_mut().unwrap().remove("stats");
    value
}

#[test]
fn criterion_7_determinism() {
    let started = Instant::now();
    let first = serde_json::to_vec_pretty(&verify_theorem_json(1)).unwrap();
    let second = serde_json::to_vec_pretty(&verify_theorem_json(1)).unwrap();
    let parallel = serde_json::to_vec_pretty(&verify_theorem_json(4)).unwrap();
    let mut failures = Vec::new();
    if first != second {
        failures.push("repeated runs differ".to_string());
    }
    if first != parallel {
        failures.push("parallel run differs".to_string());
    }
    report(7, "determinism", started, &failures, &format!("{} bytes", first.len()));
}
