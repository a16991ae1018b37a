//! End-to-end tests for the `fermat` binary: golden reports, determinism,
//! cache round-trips, merge semantics, and per-stage exit codes.

use std::path::Path;
use std::process::{Command, Output};

use fermat_core::sweep::{numerical_moments, PrimeSelector};
use serde_json::Value;

fn fermat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermat"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn fermat_in_env(args: &[&str], key: &str, value: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermat"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be utf-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout should be JSON")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).expect("golden file should exist")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process should exit normally")
}

#[test]
fn report_m9_matches_golden() {
    let out = fermat(&["analyze", "--m", "9", "--json"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), golden("report_m9.json"));
}

#[test]
fn report_m15_matches_golden() {
    let out = fermat(&["analyze", "--m", "15", "--json"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), golden("report_m15.json"));
}

#[test]
fn analyze_json_is_deterministic() {
    let first = fermat(&["analyze", "--m", "21", "--json"]);
    let second = fermat(&["analyze", "--m", "21", "--json"]);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn analyze_table_renders() {
    let out = fermat(&["analyze", "--m", "9", "--table"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("degeneracy report"));
    assert!(text.contains("ISOMORPHISM"));
    assert!(text.contains("identity-moments-fixture"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn analyze_rejects_multiples_of_four() {
    let out = fermat(&["analyze", "--m", "4", "--json"]);
    assert_eq!(exit_code(&out), 10);
    assert!(stderr(&out).contains("cm-structure"));
}

#[test]
fn analyze_rejects_unknown_selector() {
    let out = fermat(&["analyze", "--m", "9", "--selector", "bogus"]);
    assert_eq!(exit_code(&out), 16);
    assert!(stderr(&out).contains("config"));
}

#[test]
fn analyze_rejects_small_prime_bound() {
    let out = fermat(&["analyze", "--m", "9", "--prime-bound", "50"]);
    assert_eq!(exit_code(&out), 16);
}

#[test]
fn analyze_flags_off_numerics_honestly() {
    // At a prime bound this small the sweep moments sit well outside the
    // 2% tolerance; the report must carry the failing checks and exit
    // with the moments-stage code rather than smoothing them over.
    let dir = tempfile::tempdir().expect("tempdir");
    let out = fermat(&[
        "analyze",
        "--m",
        "9",
        "--prime-bound",
        "2000",
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(exit_code(&out), 13);
    let report = json(&out);
    let checks = report["numericalMoments"]["evenChecks"]
        .as_array()
        .expect("even checks");
    assert!(!checks.is_empty());
    assert!(checks.iter().any(|c| c["within"] == Value::Bool(false)));
    let consistency = report["consistency"].as_array().expect("consistency");
    assert!(consistency
        .iter()
        .any(|c| c["name"] == "numerical-even-moments-within-tolerance"
            && c["passed"] == Value::Bool(false)));
}

#[test]
fn analyze_asserts_nonempty_census_for_composite_cores() {
    // Prime squares are the least-degenerate composite shape; the census
    // consistency check must still find exceptional classes there.
    let out = fermat(&["analyze", "--m", "25", "--json"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let report = json(&out);
    let consistency = report["consistency"].as_array().expect("consistency");
    assert!(consistency
        .iter()
        .any(|c| c["name"] == "exceptional-census-nonempty" && c["passed"] == Value::Bool(true)));
    assert!(report["hodge"]["totalExceptional"].as_u64().unwrap() > 0);
}

#[test]
fn cm_reports_twice_odd_decomposition() {
    let out = fermat(&["cm", "--m", "18", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let ledger = json(&out);
    assert_eq!(ledger["oddCore"], 9);
    assert_eq!(ledger["multiplicity"], 2);
    assert_eq!(ledger["genus"], 8);
}

#[test]
fn mt_emits_all_small_subsets_and_full_set() {
    let out = fermat(&["mt", "--m", "15", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let report = json(&out);
    let targets: Vec<Vec<&str>> = report["verdicts"]
        .as_array()
        .expect("verdicts")
        .iter()
        .map(|v| {
            v["targets"]
                .as_array()
                .expect("targets")
                .iter()
                .map(|t| t.as_str().expect("label"))
                .collect()
        })
        .collect();
    let expected: Vec<Vec<&str>> = vec![
        vec!["X"],
        vec!["J5"],
        vec!["J3"],
        vec!["X", "J5"],
        vec!["X", "J3"],
        vec!["J5", "J3"],
        vec!["X", "J5", "J3"],
    ];
    assert_eq!(targets, expected);
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts[0]["verdict"], "ISOGENY");
    assert_eq!(verdicts[0]["isogenyIndex"], "2");
    assert_eq!(verdicts[6]["verdict"], "ISOMORPHISM");
}

#[test]
fn mt_single_target_verdict() {
    let out = fermat(&["mt", "--m", "21", "--target", "X,J3", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let report = json(&out);
    let verdicts = report["verdicts"].as_array().expect("verdicts");
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0]["verdict"], "ISOMORPHISM");
}

#[test]
fn mt_with_matrix_emits_binary_rows() {
    let out = fermat(&["mt", "--m", "15", "--with-matrix", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let report = json(&out);
    let rows = report["matrix"].as_array().expect("matrix rows");
    assert_eq!(rows.len(), 8);
    assert!(rows
        .iter()
        .all(|r| r.as_str().unwrap().len() == 14
            && r.as_str().unwrap().chars().all(|c| c == '0' || c == '1')));
}

#[test]
fn hodge_codim_listing_matches_census() {
    let out = fermat(&["hodge", "--m", "9", "--codim", "2", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let report = json(&out);
    assert_eq!(report["totalExceptional"], 2);
    let cycles = report["cycles"]["exceptional"]
        .as_array()
        .expect("cycle list");
    assert_eq!(cycles.len(), 2);
}

#[test]
fn hodge_embedding_includes_torus() {
    let out = fermat(&["hodge", "--m", "15", "--embedding", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let report = json(&out);
    assert_eq!(report["embedding"]["freeRank"], 4);
    assert_eq!(report["embedding"]["style"], "back-substitution");
}

#[test]
fn st_moments_gamma_file_matches_builtin() {
    // gamma(J_9) written out as a signed-permutation matrix: column j
    // carries sign[j] in row perm[j].
    let perm = [7usize, 6, 0, 1, 5, 4, 2, 3];
    let signs = [-1i64, 1, 1, 1, -1, 1, 1, 1];
    let mut matrix = vec![vec![0i64; 8]; 8];
    for j in 0..8 {
        matrix[perm[j]][j] = signs[j];
    }
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("gamma9.json");
    std::fs::write(&path, serde_json::to_string(&matrix).unwrap()).unwrap();

    let builtin = fermat(&["st-moments", "--m", "9", "--with-gamma", "--json"]);
    let from_file = fermat(&[
        "st-moments",
        "--m",
        "9",
        "--gamma-file",
        path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(exit_code(&builtin), 0);
    assert_eq!(stdout(&builtin), stdout(&from_file));
    let report = json(&builtin);
    assert_eq!(report["componentCount"], 6);
    assert_eq!(report["fullGroup"][1], "2");
    assert_eq!(report["fullGroup"][3], "38");
}

#[test]
fn st_moments_rejects_malformed_gamma() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "[[1, 1], [0, 1]]").unwrap();
    let out = fermat(&[
        "st-moments",
        "--m",
        "9",
        "--gamma-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 16);
}

#[test]
fn sweep_is_resumable() {
    let dir = tempfile::tempdir().expect("tempdir");
    let dir_arg = dir.path().to_str().unwrap();
    let first = fermat(&["sweep", "--m", "9", "--bound", "5000", "--cache-dir", dir_arg]);
    assert_eq!(exit_code(&first), 0, "stderr: {}", stderr(&first));
    let report = json(&first);
    let computed = report["newlyComputed"].as_u64().expect("count");
    assert!(computed > 0);
    assert_eq!(report["entries"], computed);

    let second = fermat(&["sweep", "--m", "9", "--bound", "5000", "--cache-dir", dir_arg]);
    let resumed = json(&second);
    assert_eq!(resumed["newlyComputed"], 0);
    assert_eq!(resumed["entries"], computed);

    let cache_file = dir.path().join("traces-m9.txt");
    let text = std::fs::read_to_string(&cache_file).expect("cache file written");
    assert!(text.starts_with("#fermat-trace-cache v1 m=9\n"));
    assert!(text.ends_with('\n'));
}

#[test]
fn sweep_extends_an_existing_cache() {
    let dir = tempfile::tempdir().expect("tempdir");
    let dir_arg = dir.path().to_str().unwrap();
    let small = fermat(&["sweep", "--m", "9", "--bound", "1000", "--cache-dir", dir_arg]);
    let small_count = json(&small)["entries"].as_u64().unwrap();
    let big = fermat(&["sweep", "--m", "9", "--bound", "5000", "--cache-dir", dir_arg]);
    let report = json(&big);
    assert_eq!(
        report["entries"].as_u64().unwrap(),
        small_count + report["newlyComputed"].as_u64().unwrap()
    );
}

#[test]
fn cache_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = fermat_in_env(
        &["sweep", "--m", "9", "--bound", "1000", "--json"],
        "FERMAT_CACHE_DIR",
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(dir.path().join("traces-m9.txt").exists());
}

#[test]
fn num_moments_agree_with_direct_computation() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = fermat(&[
        "num-moments",
        "--m",
        "9",
        "--bound",
        "5000",
        "--selector",
        "all",
        "--max-n",
        "6",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let report = json(&out);

    let direct = numerical_moments(9, 5000, PrimeSelector::All, 6).expect("direct sweep");
    assert_eq!(report["primeCount"].as_u64().unwrap(), direct.count);
    let moments: Vec<f64> = report["moments"]
        .as_array()
        .expect("moments")
        .iter()
        .map(|v| v.as_f64().expect("float"))
        .collect();
    assert_eq!(moments, direct.moments);
    let sums: Vec<String> = report["exactPowerSums"]
        .as_array()
        .expect("power sums")
        .iter()
        .map(|v| v.as_str().expect("string").to_owned())
        .collect();
    let expected: Vec<String> = direct
        .exact_power_sums
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(sums, expected);
}

#[test]
fn split_density_witness_roots_are_nontrivial() {
    let out = fermat(&["split-density", "--m", "15", "--bound", "2000", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let report = json(&out);
    let results = report["results"].as_array().expect("results");
    assert!(!results.is_empty());
    let bound_ok = report["fraction"].as_f64().unwrap();
    assert!(bound_ok > 0.0 && bound_ok < 1.0);
    for entry in results {
        if entry["torsionFree"] == Value::Bool(false) {
            let root = entry["witnessRoot"].as_str().expect("witness root");
            assert_ne!(root, "1", "witness must be a nontrivial root of unity");
            assert!(entry["witnessRelation"].is_array());
        } else {
            assert!(entry["witnessRoot"].is_null());
        }
    }
}

#[test]
fn cache_merge_disjoint_is_sorted_concat() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let merged = dir.path().join("merged.txt");
    // Deliberately unsorted across files: the merge must interleave.
    std::fs::write(&a, "#fermat-trace-cache v1 m=9\n5 0\n11 0\n").unwrap();
    std::fs::write(&b, "#fermat-trace-cache v1 m=9\n7 4\n13 2\n").unwrap();
    let out = fermat(&[
        "cache-merge",
        "--out",
        merged.to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&merged).unwrap();
    assert_eq!(text, "#fermat-trace-cache v1 m=9\n5 0\n7 4\n11 0\n13 2\n");
}

#[test]
fn cache_merge_with_self_is_identity() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.txt");
    let merged = dir.path().join("merged.txt");
    let content = "#fermat-trace-cache v1 m=9\n5 0\n7 4\n";
    std::fs::write(&a, content).unwrap();
    let out = fermat(&[
        "cache-merge",
        "--out",
        merged.to_str().unwrap(),
        a.to_str().unwrap(),
        a.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(std::fs::read_to_string(&merged).unwrap(), content);
}

#[test]
fn cache_merge_conflict_names_the_prime() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    std::fs::write(&a, "#fermat-trace-cache v1 m=9\n7 4\n").unwrap();
    std::fs::write(&b, "#fermat-trace-cache v1 m=9\n7 -3\n").unwrap();
    let out = fermat(&[
        "cache-merge",
        "--out",
        dir.path().join("x.txt").to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 15);
    let err = stderr(&out);
    assert!(err.contains("CONFLICTING_ENTRY"));
    assert!(err.contains("p=7"));
}

#[test]
fn cache_merge_rejects_mixed_kinds() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    std::fs::write(&a, "#fermat-trace-cache v1 m=9\n5 0\n").unwrap();
    std::fs::write(&b, "#fermat-split-cache v1 m=9\n19 1\n").unwrap();
    let out = fermat(&[
        "cache-merge",
        "--out",
        dir.path().join("x.txt").to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 15);
    assert!(stderr(&out).contains("FORMAT_MISMATCH"));
}

#[test]
fn cache_merge_rejects_unknown_header() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.txt");
    std::fs::write(&a, "not a cache\n5 0\n").unwrap();
    let out = fermat(&[
        "cache-merge",
        "--out",
        dir.path().join("x.txt").to_str().unwrap(),
        a.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 15);
    assert!(stderr(&out).contains("FORMAT_MISMATCH"));
}

#[test]
fn cache_merge_rejects_modulus_mismatch() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    std::fs::write(&a, "#fermat-trace-cache v1 m=9\n5 0\n").unwrap();
    std::fs::write(&b, "#fermat-trace-cache v1 m=15\n11 2\n").unwrap();
    let out = fermat(&[
        "cache-merge",
        "--out",
        dir.path().join("x.txt").to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 15);
    assert!(stderr(&out).contains("FORMAT_MISMATCH"));
}

#[test]
fn split_cache_merge_round_trips() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let merged = dir.path().join("merged.txt");
    std::fs::write(&a, "#fermat-split-cache v1 m=15\n31 0\n").unwrap();
    std::fs::write(&b, "#fermat-split-cache v1 m=15\n61 1\n").unwrap();
    let out = fermat(&[
        "cache-merge",
        "--out",
        merged.to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        std::fs::read_to_string(&merged).unwrap(),
        "#fermat-split-cache v1 m=15\n31 0\n61 1\n"
    );
}
