//! `zsl`: product-one free sequences over `C_n ⋊_s C_2` from the command line.
//!
//! Exit codes: 0 success (for `check`: product-one free), 1 falsification or
//! (for `check`) not product-one free, 2 usage or parse error, 3 state or time
//! budget exhausted.

mod output;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use zsl_core::classifier::{self, ExtremalPattern};
use zsl_core::cyclic_lemma::{audit_lemma1, AuditMode};
use zsl_core::davenport::small_davenport;
use zsl_core::factorization::factor;
use zsl_core::group::{GroupClass, GroupSpec};
use zsl_core::notation::{format_sequence, format_word, from_records, parse_sequence, TermRecord};
use zsl_core::product::{compute_products, is_product_one_free, ElementSet};
use zsl_core::{ClassifierError, Group, ProductError, SearchOptions, Sequence};

use output::{emit, Format};

#[derive(Parser, Debug)]
#[command(name = "zsl", version, about = "Zero-sum computations over C_n x_s C_2 and C_m")]
struct Cli {
    /// Maximum number of product DP states per sequence.
    #[arg(long, global = true, env = "ZSL_STATE_BUDGET", default_value_t = 10_000_000,
          value_parser = clap::value_parser!(u64).range(10_000..))]
    state_budget: u64,
    /// Worker threads for searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Wall-clock budget for searches, in milliseconds.
    #[arg(long, global = true)]
    time_budget_ms: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampled audits.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a sequence is product-one free.
    Check {
        /// `metacyclic:n=<N>,s=<S>` or `cyclic:m=<M>`.
        group: String,
        /// Sequence text such as `(y)^[7] * x`, or a JSON list of {a, b, mult}.
        sequence: String,
    },
    /// Compute the small Davenport constant by exhaustive search.
    Davenport {
        group: String,
        /// Search cap; defaults to one more than the expected value.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Classify a group and optionally match a length-n sequence against the extremal families.
    Classify { group: String, sequence: Option<String> },
    /// Enumerate all product-one free sequences of length n and compare with the families.
    VerifyTheorem { group: String },
    /// Check that every member of every extremal family is product-one free.
    Families { group: String },
    /// Split n along the twist s.
    Factor { n: i64, s: i64 },
    /// Audit the structure of long zero-sum free sequences over C_m.
    #[command(name = "lemma1-audit")]
    Lemma1Audit {
        #[arg(long, default_value_t = 3)]
        m_min: u32,
        #[arg(long, default_value_t = 12)]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Sampled instances per modulus in sample mode.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<ProductError> for Failure {
    fn from(e: ProductError) -> Self {
        match e {
            ProductError::StateBudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ClassifierError> for Failure {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::Product(p) => p.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

macro_rules! usage {
    ($e:expr) => {
        $e.map_err(|e| Failure::Usage(e.to_string()))
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            emit(cli.format, &json!({ "complete": false, "error": msg }), None);
            ExitCode::from(3)
        }
    }
}

fn options(cli: &Cli) -> SearchOptions {
    SearchOptions {
        state_budget: cli.state_budget,
        workers: cli.workers as usize,
        time_budget: cli.time_budget_ms.map(Duration::from_millis),
    }
}

fn load_group(spec: &str) -> Result<Group, Failure> {
    let spec: GroupSpec = usage!(spec.parse::<GroupSpec>())?;
    usage!(Group::from_spec(spec))
}

fn load_sequence(group: &Group, text: &str) -> Result<Sequence, Failure> {
    if text.trim_start().starts_with('[') {
        let records: Vec<TermRecord> = usage!(serde_json::from_str(text))?;
        usage!(from_records(group, &records))
    } else {
        usage!(parse_sequence(group, text))
    }
}

fn element_names(group: &Group, set: ElementSet) -> Vec<String> {
    set.iter().map(|g| group.element(g).to_string()).collect()
}

fn class_name(group: &Group) -> String {
    group.class().map_or_else(|| "Cyclic".to_string(), |c| c.to_string())
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Check { group, sequence } => {
            let group = load_group(group)?;
            let seq = load_sequence(&group, sequence)?;
            let report = compute_products(&group, &seq, cli.state_budget)?;
            let value = json!({
                "group": group.spec().to_string(),
                "sequence": format_sequence(&group, &seq),
                "length": seq.len(),
                "product_one_free": report.product_one_free,
                "subproducts_size": report.subproducts.len(),
                "subproducts": element_names(&group, report.subproducts),
                "products": element_names(&group, report.pi),
                "witness": report.witness.as_ref().map(|w| format_word(&group, w)),
            });
            emit(cli.format, &value, None);
            Ok(if report.product_one_free { 0 } else { 1 })
        }
        Command::Davenport { group, max_len } => {
            let group = load_group(group)?;
            let expected = expected_davenport(&group);
            let max_len = max_len.or(expected.map(|d| d + 1)).unwrap_or(group.order() + 1);
            let started = Instant::now();
            let result = small_davenport(&group, max_len, &options(cli))?;
            let verified = is_product_one_free(&group, &result.witness, cli.state_budget)?.product_one_free;
            let falsified = result.is_exact() && expected.is_some_and(|d| d != result.d) || !verified;
            let value = json!({
                "group": group.spec().to_string(),
                "class": class_name(&group),
                "d": result.d,
                "expected": expected,
                "exact": result.is_exact(),
                "max_len": max_len,
                "max_len_reached": result.max_len_reached,
                "complete": result.complete,
                "witness": format_sequence(&group, &result.witness),
                "witness_verified": verified,
                "stats": {
                    "nodes_explored": result.nodes_explored,
                    "pruned": result.pruned,
                    "runtime_ms": started.elapsed().as_millis() as u64,
                },
            });
            emit(cli.format, &value, None);
            Ok(if falsified {
                1
            } else if !result.complete {
                3
            } else {
                0
            })
        }
        Command::Classify { group, sequence } => {
            let group = load_group(group)?;
            let mut value = json!({
                "group": group.spec().to_string(),
                "class": class_name(&group),
                "order": group.order(),
            });
            if let Some(text) = sequence {
                let seq = load_sequence(&group, text)?;
                let pattern: Option<ExtremalPattern> = classifier::match_pattern(&group, &seq)?;
                value["sequence"] = json!(format_sequence(&group, &seq));
                value["pattern"] = json!(pattern.map(|p| p.to_string()));
            }
            emit(cli.format, &value, None);
            Ok(0)
        }
        Command::VerifyTheorem { group } => {
            let group = load_group(group)?;
            let report = classifier::verify_theorem(&group, &options(cli))?;
            let rows = match cli.format {
                Format::Csv => Some(enumeration_rows(&group, &options(cli))?),
                _ => None,
            };
            emit(cli.format, &to_value(&report), rows);
            Ok(if !report.missing.is_empty() || !report.extra.is_empty() {
                1
            } else if !report.complete {
                3
            } else if report.passed {
                0
            } else {
                1
            })
        }
        Command::Families { group } => {
            let group = load_group(group)?;
            let report = classifier::verify_families_pof(&group, cli.state_budget)?;
            let notes = [1, 3]
                .iter()
                .map(|&v| classifier::generator_change_note(&group, v).map(|r| to_value(&r)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let mut value = to_value(&report);
            value["generator_change"] = Value::Array(notes);
            let rows = match cli.format {
                Format::Csv => Some(family_rows(&group)?),
                _ => None,
            };
            emit(cli.format, &value, rows);
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Factor { n, s } => {
            let f = usage!(factor(*n, *s))?;
            let value = json!({
                "n": f.n, "s": f.s, "n1": f.n1, "n2": f.n2,
                "case": f.case, "t": f.t, "m1": f.m1, "m2": f.m2,
            });
            emit(cli.format, &value, None);
            Ok(0)
        }
        Command::Lemma1Audit { m_min, m_max, mode, samples } => {
            let mode = match mode {
                Mode::Exhaustive => AuditMode::Exhaustive,
                Mode::Sample => AuditMode::Sample,
            };
            let started = Instant::now();
            let report = usage!(audit_lemma1(*m_min, *m_max, mode, *samples, cli.seed))?;
            let mut value = to_value(&report);
            value["seed"] = json!(cli.seed);
            value["passed"] = json!(report.passed());
            value["stats"] = json!({ "runtime_ms": started.elapsed().as_millis() as u64 });
            emit(cli.format, &value, None);
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

/// Known values: `d(C_m) = m − 1`, and `d = n` for the non-abelian `C_n ⋊_s C_2`.
fn expected_davenport(group: &Group) -> Option<usize> {
    match (group.spec(), group.class()) {
        (GroupSpec::Cyclic { m }, _) => Some(m as usize - 1),
        (GroupSpec::Metacyclic { n, .. }, Some(GroupClass::PaperMetacyclic(_) | GroupClass::Dihedral)) => {
            Some(n as usize)
        }
        _ => None,
    }
}

fn to_value<T: Serialize>(report: &T) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn enumeration_rows(group: &Group, options: &SearchOptions) -> Result<Vec<Vec<String>>, Failure> {
    let found = classifier::enumerate_extremal_pof(group, options)?;
    let mut rows = vec![vec!["sequence".to_string(), "pattern".to_string()]];
    for seq in &found.sequences {
        let pattern = classifier::match_pattern(group, seq)?;
        rows.push(vec![format_sequence(group, seq), pattern.map_or_else(String::new, |p| p.to_string())]);
    }
    Ok(rows)
}

fn family_rows(group: &Group) -> Result<Vec<Vec<String>>, Failure> {
    let mut rows = vec![vec!["pattern".to_string(), "sequence".to_string()]];
    for p in usage!(classifier::all_patterns(group))? {
        let seq = usage!(classifier::realize(group, p))?;
        rows.push(vec![p.to_string(), format_sequence(group, &seq)]);
    }
    Ok(rows)
}
