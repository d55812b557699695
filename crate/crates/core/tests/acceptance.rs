//! Acceptance gate: runs the full verification suite at seed 42 and
//! prints one pass/fail line per criterion. Tolerances are pinned in the
//! check implementations; the two runtime budgets are pinned here.

use std::time::Instant;

use jetlab_core::checks::{check_fiber_dimensions, check_trace_identity, run_all, CheckConfig};

#[test]
fn acceptance_criteria() {
    let cfg = CheckConfig {
        seed: 42,
        samples: None,
        tol_sigma: 4.0,
        workers: 1,
    };

    // Budgeted standalone runs: the trace identity must finish within
    // ten seconds and the fiber-dimension enumeration within one.
    let trace_clock = Instant::now();
    let trace = check_trace_identity(&cfg).expect("trace identity check runs");
    let trace_elapsed = trace_clock.elapsed();

    let fiber_clock = Instant::now();
    let fiber = check_fiber_dimensions(&cfg).expect("fiber dimension check runs");
    let fiber_elapsed = fiber_clock.elapsed();

    let results = run_all(&cfg).expect("verification suite runs");
    assert_eq!(results.len(), 9, "expected one result per criterion");
    for (number, result) in results.iter().enumerate() {
        println!(
            "criterion {} [{}] {} -- {}",
            number + 1,
            if result.passed { "PASS" } else { "FAIL" },
            result.name,
            result.observed,
        );
    }
    println!(
        "criterion 1 runtime {:.2?} (budget 10 s); criterion 3 runtime {:.2?} (budget 1 s)",
        trace_elapsed, fiber_elapsed,
    );

    assert!(trace.passed, "trace identity: {}", trace.observed);
    assert!(fiber.passed, "fiber dimensions: {}", fiber.observed);
    assert!(
        trace_elapsed.as_secs_f64() <= 10.0,
        "trace identity exceeded its budget: {trace_elapsed:.2?}"
    );
    assert!(
        fiber_elapsed.as_secs_f64() < 1.0,
        "fiber dimensions exceeded their budget: {fiber_elapsed:.2?}"
    );

    let failures: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    assert!(failures.is_empty(), "failed criteria: {}", failures.join(", "));
}
