//! End-to-end tests against the compiled binary.
//!
//! Sample counts are kept small: these exercise wiring, formats, and exit
//! codes, not statistical accuracy (the library test suite covers that).

use std::process::{Command, Output};

fn jetlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetlab"))
        .args(args)
        .env_remove("JETLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn ggdim_tabulates_exact_dimensions() {
    let out = jetlab(&["ggdim", "-k", "2", "-r", "1", "-m", "4"]);
    assert_success(&out);
    let text = stdout(&out);
    let last = text.lines().last().expect("nonempty table");
    assert!(
        last.trim_start().starts_with('4') && last.contains('3'),
        "unexpected final row: {last:?}"
    );
}

#[test]
fn ggdim_json_carries_the_partition_counts() {
    let out = jetlab(&["--json", "ggdim", "-k", "2", "-r", "1", "-m", "4"]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let dims: Vec<&str> = doc["rows"]
        .as_array()
        .expect("rows array")
        .iter()
        .map(|row| row["dim"].as_str().expect("dim string"))
        .collect();
    assert_eq!(dims, ["1", "1", "2", "2", "3"], "partition counts for k=2, r=1");
    assert!(doc["rows"][0]["asymptotic"].is_null(), "no asymptote at m=0");
}

#[test]
fn ggdim_csv_has_a_header_and_one_row_per_degree() {
    let out = jetlab(&["--csv", "ggdim", "-k", "3", "-r", "2", "-m", "5"]);
    assert_success(&out);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,dim,asymptotic,ratio"));
    assert_eq!(lines.count(), 6, "rows for m = 0..=5");
}

#[test]
fn moments_partition_identity_is_exact() {
    let out = jetlab(&[
        "--samples", "4096", "--json", "moments", "--one-cut", "3,2,1", "--partition",
    ]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["partition"]["cut_moment"], "1/5");
    assert_eq!(doc["partition"]["free_moment"], "2/5");
    assert_eq!(doc["partition"]["combination"], "1");
    let zeroth = &doc["moments"][0];
    assert_eq!(zeroth["exact"], "1", "normalization moment");
    assert_eq!(zeroth["mean"], 1.0, "sphere mass is exactly 1 per sample");
}

#[test]
fn moments_layout_flags_are_mutually_exclusive() {
    let out = jetlab(&["moments", "--equal", "2,2", "--sizes", "2,2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sphere_avg_of_a_traceless_form_is_zero() {
    let out = jetlab(&["--samples", "4096", "--json", "sphere-avg", "--diag", "1,-1"]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["exact"], 0.0);
    let sigma = doc["sigma_deviation"].as_f64().expect("sigma field");
    assert!(sigma < 6.0, "traceless average drifted: {sigma} sigma");
}

#[test]
fn curvature_accepts_a_tensor_file() {
    let dir = std::env::temp_dir().join(format!("jetlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("line.json");
    std::fs::write(
        &path,
        r#"{
            "n": 1,
            "r": 2,
            "entries": [
                {"i": 0, "j": 0, "a": 0, "b": 0, "re": 1.0},
                {"i": 0, "j": 0, "a": 0, "b": 1, "re": 0.25, "im": -0.5},
                {"i": 0, "j": 0, "a": 1, "b": 1, "re": 2.0}
            ]
        }"#,
    )
    .expect("write tensor file");
    let out = jetlab(&[
        "--samples", "4096", "--json",
        "curvature", "--tensor-file", path.to_str().expect("utf8 path"), "-k", "2",
    ]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    // trace 3, jet order 2: (1 + 1/2) / (2*2) * 3 = 9/8.
    assert_eq!(doc["entries"][0]["exact_re"], 1.125);
    let max_sigma = doc["max_sigma_deviation"].as_f64().expect("sigma field");
    assert!(max_sigma < 6.0, "estimate drifted: {max_sigma} sigma");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn curvature_rejects_bad_tensor_files() {
    let dir = std::env::temp_dir().join(format!("jetlab-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let dup = dir.join("dup.json");
    std::fs::write(
        &dup,
        r#"{"n": 1, "r": 1, "entries": [
            {"i": 0, "j": 0, "a": 0, "b": 0, "re": 1.0},
            {"i": 0, "j": 0, "a": 0, "b": 0, "re": 2.0}
        ]}"#,
    )
    .expect("write tensor file");
    assert_eq!(exit_code(&jetlab(&["curvature", "--tensor-file", dup.to_str().expect("utf8")])), 2);

    let ext = dir.join("tensor.yaml");
    std::fs::write(&ext, "n: 1").expect("write tensor file");
    assert_eq!(exit_code(&jetlab(&["curvature", "--tensor-file", ext.to_str().expect("utf8")])), 2);

    assert_eq!(
        exit_code(&jetlab(&["curvature", "--tensor-file", dir.join("absent.json").to_str().expect("utf8")])),
        2
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn semple_det_closed_form_matches_its_recursion() {
    let out = jetlab(&["--json", "semple", "det", "--n", "3", "--r", "2", "-k", "3"]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["class"], "detV + O(1,1,1)");
    assert_eq!(doc["matches_recursion"], true);
}

#[test]
fn semple_validate_reports_structured_violations() {
    let out = jetlab(&["--json", "semple", "validate", "--ranks", "3,1"]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["admissible"], false);
    let violations = doc["violations"].as_array().expect("violations array");
    assert_eq!(violations.len(), 1);
    assert!(
        violations[0].as_str().expect("text").contains("drops by 2"),
        "unexpected violation: {violations:?}"
    );
}

#[test]
fn semple_pullback_pads_fiber_weights() {
    let out = jetlab(&[
        "--json", "semple", "pullback", "--class", "detV + O(1,0,2) - 3A", "--level", "5",
    ]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["class"], "-3A + detV + O(1,0,2)");
    assert_eq!(doc["lifted"], "-3A + detV + O(1,0,2,0,0)");
}

#[test]
fn morse_json_reports_sparsity_and_leading_constant() {
    let out = jetlab(&[
        "--json", "morse", "--n", "2", "--d", "7",
        "-k", "3", "--orders", "1,2,3", "--degrees", "2,2,2", "--delta", "2", "-r", "2",
    ]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["eta"], "63");
    assert_eq!(doc["general_type_threshold"], 5);
    let cut = &doc["cut"];
    assert_eq!(cut["locus_dim"], 4);
    assert_eq!(cut["reciprocal_sum"], "11/6");
    assert_eq!(cut["passes"], true);
    assert_eq!(cut["main_factor"], "1/120");
    assert_eq!(cut["log_power"], 2);
    assert_eq!(
        cut["error_slots"],
        serde_json::json!(["O(1/log k)", "O(delta)"])
    );
}

#[test]
fn morse_without_a_cut_stays_minimal() {
    let out = jetlab(&["--json", "morse", "--n", "1", "--d", "5", "--eps", "1/2"]);
    assert_success(&out);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["eta"], "15/2");
    assert!(doc["cut"].is_null());
}

#[test]
fn verify_is_worker_count_invariant() {
    let base = ["--seed", "42", "--samples", "4096", "verify"];
    let one = jetlab(&base);
    let four = jetlab(&["--seed", "42", "--samples", "4096", "--workers", "4", "verify"]);
    assert_eq!(one.status.code(), four.status.code());
    assert_eq!(
        stdout(&one),
        stdout(&four),
        "reports must not depend on the worker count"
    );
    assert!(stdout(&one).contains("9/9 checks passed"));
}

#[test]
fn verify_json_lists_every_check_and_exit_matches() {
    let out = jetlab(&["--seed", "42", "--samples", "4096", "--json", "verify"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let results = doc["results"].as_array().expect("results array");
    assert_eq!(results.len(), 9);
    let passed = doc["passed"].as_bool().expect("passed flag");
    assert_eq!(exit_code(&out), i32::from(!passed));
    for result in results {
        assert!(result["name"].is_string());
        assert!(result["passed"].is_boolean());
    }
}

#[test]
fn seed_env_var_is_a_fallback_not_an_override() {
    let args = ["--samples", "4096", "--json", "sphere-avg", "--dim", "2"];
    let via_env = Command::new(env!("CARGO_BIN_EXE_jetlab"))
        .args(args)
        .env("JETLAB_SEED", "9")
        .output()
        .expect("binary runs");
    let via_flag = jetlab(&["--seed", "9", "--samples", "4096", "--json", "sphere-avg", "--dim", "2"]);
    assert_success(&via_env);
    assert_eq!(stdout(&via_env), stdout(&via_flag));

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_jetlab"))
        .args(["--seed", "3", "--samples", "4096", "--json", "sphere-avg", "--dim", "2"])
        .env("JETLAB_SEED", "9")
        .output()
        .expect("binary runs");
    let plain = jetlab(&["--seed", "3", "--samples", "4096", "--json", "sphere-avg", "--dim", "2"]);
    assert_eq!(stdout(&flag_wins), stdout(&plain));
}

#[test]
fn usage_and_domain_errors_exit_with_two() {
    assert_eq!(exit_code(&jetlab(&["ggdim", "-k", "0", "-r", "2", "-m", "3"])), 2);
    assert_eq!(exit_code(&jetlab(&["ggdim", "--bogus"])), 2);
    assert_eq!(exit_code(&jetlab(&["--samples", "1", "verify"])), 2);
    assert_eq!(exit_code(&jetlab(&["--workers", "0", "ggdim", "-k", "1", "-r", "1", "-m", "1"])), 2);
    assert_eq!(exit_code(&jetlab(&["--csv", "sphere-avg", "--dim", "2"])), 2);
    assert_eq!(exit_code(&jetlab(&["semple", "orbifold", "--rho", "2,x", "--s", "1"])), 2);
}
