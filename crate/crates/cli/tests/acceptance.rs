//! The acceptance criteria, one line each. Exits nonzero when any fails.

use std::time::{Duration, Instant};

use catalog::{group_dim_of, Catalog, MISSING};
use classify::ClassifyOptions;
use cli::{tables, Suite, VerifyOptions};
use serde_json::Value;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Checks of one suite in a verify report.
fn suite<'a>(report: &'a Value, name: &str) -> Vec<&'a Value> {
    report["checks"].as_array().unwrap().iter().filter(|c| c["suite"] == name).collect()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["check"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn failures(checks: &[&Value]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| c["passed"] != true)
        .flat_map(|c| {
            let f = c["failures"].as_array().unwrap();
            if f.is_empty() {
                vec![format!("{}: nothing checked", c["check"])]
            } else {
                f.iter().take(3).map(|x| x.as_str().unwrap().to_string()).collect()
            }
        })
        .collect()
}

fn checked(checks: &[&Value]) -> u64 {
    checks.iter().map(|c| c["checked"].as_u64().unwrap()).sum()
}

fn suite_outcome(report: &Value, name: &str, min_checked: u64, what: &str) -> Outcome {
    let checks = suite(report, name);
    let bad = failures(&checks);
    let n = checked(&checks);
    if bad.is_empty() && n >= min_checked {
        outcome(true, format!("{n} {what}"))
    } else {
        outcome(false, format!("{n} {what}; {}", bad.join("; ")))
    }
}

fn table_row<'t>(t: &'t tables::Table, id: &str) -> Option<&'t tables::Row> {
    t.rows.iter().find(|r| r.cells[0] == id)
}

fn full_run() -> (String, Duration) {
    let start = Instant::now();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(["liehom", "verify", "--suite", "all", "--jobs", "1"], &mut out, &mut err);
    let elapsed = start.elapsed();
    assert!(code == 0 || code == 1, "verify failed to run: {}", String::from_utf8_lossy(&err));
    (String::from_utf8(out).unwrap(), elapsed)
}

fn main() {
    let c = Catalog::embedded();
    let opts = ClassifyOptions::default();
    let (first, t1) = full_run();
    let (second, t2) = full_run();
    let report: Value = serde_json::from_str(&first).unwrap();

    let mut lines: Vec<(u32, &str, Outcome)> = Vec::new();

    let start = Instant::now();
    let jacobi: Vec<_> = cli::checks::tasks(c, Suite::Jacobi).iter().map(|t| t.run(c, &VerifyOptions::default())).collect();
    let elapsed = start.elapsed();
    let n: usize = jacobi.iter().map(|j| j.checked).sum();
    lines.push((
        1,
        "catalog soundness",
        outcome(
            jacobi.iter().all(|j| j.passed()) && elapsed < Duration::from_secs(1),
            format!("{n} instances in {:.3} s", elapsed.as_secs_f64()),
        ),
    ));

    let g4 = tables::regenerate_summary(c, 4, opts).unwrap();
    let g4_golden = tables::golden_summary(c, 4).unwrap();
    let last = table_row(&g4, "32.26").map(|r| r.cells.clone());
    let only_class = last.as_ref().is_some_and(|r| r[1] == "L(4,-3)" && r[2..].iter().all(String::is_empty));
    lines.push((
        2,
        "G4 classification summary",
        outcome(
            check(&report, "g4-summary")["passed"] == true && g4_golden.rows.len() == 21 && g4.rows.len() == 21 && only_class,
            format!("{} rows, 32.26 as {:?}", g4.rows.len(), last),
        ),
    ));

    let g3 = tables::regenerate_summary(c, 3, opts).unwrap();
    let ids: Vec<&str> = g3.rows.iter().map(|r| r.cells[0].as_str()).collect();
    let shared = match (table_row(&g3, "30.4"), table_row(&g3, "30.5")) {
        (Some(a), Some(b)) => {
            a.cells[1..] == b.cells[1..]
                && a.cells[1] == "L(3,5)"
                && ["1/2*e1 + 1/2*e3", "-1/2*e1 - 1/2*e3"].contains(&a.cells[2].as_str())
                && a.cells[3..] == ["S", "B"]
        }
        _ => false,
    };
    let mut sorted = ids.clone();
    sorted.sort();
    lines.push((
        3,
        "G3 classification summary",
        outcome(
            check(&report, "g3-summary")["passed"] == true
                && sorted == ["30.1", "30.2", "30.4", "30.5", "30.6", "30.8"]
                && shared,
            format!("rows {ids:?}, 30.4 and 30.5 share a key: {shared}"),
        ),
    ));

    let metrics = tables::regenerate_metrics(c, opts).unwrap();
    let dims: Vec<Option<usize>> = metrics.rows.iter().map(|r| if r.cells[0] == MISSING { Some(3) } else { group_dim_of(&r.cells[0]) }).collect();
    let g4_rows = dims.iter().filter(|d| **d == Some(4)).count();
    let g3_rows = dims.iter().filter(|d| **d == Some(3)).count();
    let missing = metrics.rows.iter().filter(|r| r.cells[0] == MISSING).count();
    lines.push((
        4,
        "summary of invariant metrics",
        outcome(
            check(&report, "invariant-metrics")["passed"] == true && g4_rows == 20 && g3_rows == 6 && missing == 1,
            format!(
                "cell diff {}; {g4_rows} G4 rows (want 20); {g3_rows} G3 rows = {} numbered + {missing} missing (want 6 = 5 + 1)",
                if check(&report, "invariant-metrics")["passed"] == true { "clean" } else { "has mismatches" },
                g3_rows - missing
            ),
        ),
    ));

    lines.push((5, "worksheet regression", suite_outcome(&report, "worksheets", 70, "rows")));
    let lambda = check(&report, "lambda");
    let mut auto = suite_outcome(&report, "automorphisms", 1, "draws and lambda checks");
    auto.passed &= lambda["passed"] == true && lambda["checked"].as_u64() > Some(0);
    lines.push((6, "automorphism suite", auto));
    lines.push((7, "adjoint invariants", suite_outcome(&report, "invariants", 1, "draws")));
    lines.push((8, "canonicalization", suite_outcome(&report, "canonical", 1000, "vectors and fixed points")));

    let typo_checks = suite(&report, "actions").iter().filter(|c| c["checked"] == 2).count();
    let mut actions = suite_outcome(&report, "actions", 1, "action reports");
    actions.passed &= typo_checks >= 4;
    actions.detail.push_str(&format!(", {typo_checks} typo variants"));
    lines.push((9, "vector-field verification", actions));

    let reductions = tables::regenerate_reductions(c, opts).unwrap();
    let agree = reductions.rows.iter().all(|r| r.cells[5].split_once('/').is_some_and(|(a, b)| a == b && !a.is_empty()));
    let has_missing = reductions.rows.iter().any(|r| r.cells[4] == MISSING && r.cells[0] == "32.07");
    lines.push((
        10,
        "reductions",
        outcome(
            check(&report, "reductions")["passed"] == true && reductions.rows.len() == 5 && agree && has_missing,
            format!("{} rows, isotropy agrees: {agree}, 32.07 to M: {has_missing}", reductions.rows.len()),
        ),
    ));

    lines.push((11, "Petrov key", suite_outcome(&report, "key", 1, "key evaluations")));

    let limit = Duration::from_secs(60);
    lines.push((
        12,
        "performance and determinism",
        outcome(
            t1 < limit && t2 < limit && first == second,
            format!("{:.1} s and {:.1} s single-worker, identical output: {}", t1.as_secs_f64(), t2.as_secs_f64(), first == second),
        ),
    ));

    let mut all = true;
    for (n, name, o) in &lines {
        all &= o.passed;
        println!("criterion {n:>2} {} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
