//! The twelve acceptance criteria, each printed as one PASS/FAIL line.
//!
//! Runs without the libtest harness so the lines always reach stdout:
//! `cargo test -p nbc-core --test acceptance`.

use std::time::{Duration, Instant};

use nbc_core::verify::{run_suite, SuiteReport, DEFAULT_SEED, SUITES};

/// Wall-clock budgets per criterion, where one is stated.
fn budget(name: &str) -> Option<Duration> {
    let secs = match name {
        "oracle" => 60,
        "whitney" => 30,
        "spectral" => 120,
        "link-gadget" => 600,
        "sandwich" => 300,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn run(name: &str) -> (nbc_core::Result<SuiteReport>, Duration) {
    let start = Instant::now();
    let report = run_suite(name, DEFAULT_SEED);
    (report, start.elapsed())
}

fn main() {
    let mut failed = Vec::new();
    for name in SUITES {
        let (report, elapsed) = run(name);
        let report = match report {
            Ok(r) => r,
            Err(e) => {
                println!("FAIL {name}: suite errored: {e}");
                failed.push(name);
                continue;
            }
        };
        let over = budget(name).is_some_and(|b| elapsed > b);
        let mut line = report.summary_line();
        line.push_str(&format!(" in {:.2}s", elapsed.as_secs_f64()));
        if over {
            line = line.replacen("PASS", "FAIL", 1);
            line.push_str(" (over time budget)");
        }
        println!("{line}");
        for (k, v) in &report.metrics {
            println!("    {k} = {v}");
        }
        if !report.passed() || over {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", SUITES.len());
    } else {
        println!("acceptance: failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
