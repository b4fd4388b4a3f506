//! One PASS/FAIL line per acceptance criterion, with the measured values,
//! pinned tolerances and runtimes.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use blochkit::search::SamplingConfig;
use blochkit_cli::report::Check;
use blochkit_cli::verify::run_suite;

const SEED: u64 = 42;

/// Suite that carries each criterion, and its runtime budget if any.
const CRITERIA: [(u32, &str, Option<u64>); 11] = [
    (1, "q-oracle", Some(30)),
    (2, "q-oracle", None),
    (3, "omega", None),
    (4, "omega", None),
    (5, "product-rule", None),
    (6, "growth-lemma", None),
    (7, "norm-sandwich", Some(120)),
    (8, "spectrum", None),
    (9, "compactness", None),
    (10, "isometry", None),
    (11, "constants", None),
];

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "n/a".into())
}

fn line(criterion: u32, pass: bool, elapsed: Duration, detail: &str) -> String {
    format!(
        "criterion {criterion:>2}: {} ({:.2}s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    )
}

fn verify_all() -> (i32, Vec<u8>, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_blochkit"))
        .args(["verify", "--suite", "all", "--seed", "42"])
        .env_remove("BLOCHKIT_SEED")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout, start.elapsed())
}

fn main() {
    let cfg = SamplingConfig::default().with_seed(SEED);
    let mut cache: BTreeMap<&str, (Vec<Check>, Duration)> = BTreeMap::new();
    let mut failed = Vec::new();

    for (criterion, suite, budget) in CRITERIA {
        if !cache.contains_key(suite) {
            let start = Instant::now();
            let checks = run_suite(suite, &cfg).expect("suite runs");
            cache.insert(suite, (checks, start.elapsed()));
        }
        let (checks, elapsed) = &cache[suite];
        let mine: Vec<&Check> = checks.iter().filter(|c| c.criterion == criterion).collect();
        let in_time = budget.is_none_or(|b| elapsed.as_secs() <= b);
        let pass = !mine.is_empty() && mine.iter().all(|c| c.pass) && in_time;
        let mut detail: Vec<String> =
            mine.iter().map(|c| format!("{}={} tol {}", c.name, fmt(c.measured), fmt(c.tolerance))).collect();
        if let Some(b) = budget {
            detail.push(format!("budget {b}s"));
        }
        println!("{}", line(criterion, pass, *elapsed, &detail.join("; ")));
        if !pass {
            failed.push(criterion);
        }
    }

    let (code_a, out_a, ta) = verify_all();
    let (code_b, out_b, tb) = verify_all();
    let elapsed = ta.max(tb);
    let pass = code_a == 0 && code_b == 0 && out_a == out_b && elapsed.as_secs() <= 600;
    println!(
        "{}",
        line(
            12,
            pass,
            elapsed,
            &format!(
                "exit codes {code_a},{code_b}; identical={}; {} bytes; slower run shown, budget 600s",
                out_a == out_b,
                out_a.len()
            )
        )
    );
    if !pass {
        failed.push(12);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all 12 criteria pass");
}
