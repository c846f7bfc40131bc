use std::process::{Command, Output};

use finsub_cli::verify::Parameters;
use finsub_cli::{verify_exit_code, Verdict, VerificationReport, EXIT_MISMATCH, EXIT_OK};
use serde_json::Value;

fn finsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finsub"))
        .args(args)
        .env_remove("FINSUB_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

/// `(rank, torsion)` per degree.
fn groups(v: &Value) -> Vec<(u64, Vec<u64>)> {
    v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| {
            let torsion = g["torsion"]
                .as_array()
                .unwrap()
                .iter()
                .map(|t| t.as_u64().unwrap())
                .collect();
            (g["rank"].as_u64().unwrap(), torsion)
        })
        .collect()
}

fn free(ranks: &[u64]) -> Vec<(u64, Vec<u64>)> {
    ranks.iter().map(|&r| (r, vec![])).collect()
}

#[test]
fn circle_three_points_is_a_three_sphere() {
    let v = json(&finsub(&[
        "homology", "--space", "sphere", "--d", "1", "--n", "3",
    ]));
    assert_eq!(groups(&v), free(&[1, 0, 0, 1]));
    assert_eq!(v["reduced"], false);
}

#[test]
fn symmetric_square_of_two_sphere() {
    let v = json(&finsub(&[
        "homology",
        "--d",
        "2",
        "--n",
        "2",
        "--construction",
        "expn",
        "--coeffs",
        "Z",
    ]));
    assert_eq!(groups(&v), free(&[1, 0, 1, 0, 1]));
}

#[test]
fn one_point_configurations_compactify_to_the_sphere() {
    let v = json(&finsub(&[
        "homology",
        "--d",
        "2",
        "--n",
        "1",
        "--construction",
        "conf",
    ]));
    assert_eq!(groups(&v), free(&[0, 0, 1]));
    assert_eq!(v["reduced"], true);
    let based = json(&finsub(&[
        "homology",
        "--d",
        "2",
        "--n",
        "1",
        "--construction",
        "conf-based",
    ]));
    assert_eq!(groups(&based), groups(&v));
    assert_eq!(based["construction"], "conf-based");
}

#[test]
fn rational_coefficients_drop_torsion() {
    let v = json(&finsub(&[
        "homology", "--d", "2", "--n", "3", "--coeffs", "Q",
    ]));
    assert_eq!(groups(&v), free(&[1, 0, 0, 0, 1, 0, 1]));
    assert_eq!(v["coeffs"], "Q");
}

#[test]
fn max_degree_limits_the_report() {
    let v = json(&finsub(&[
        "homology",
        "--d",
        "2",
        "--n",
        "3",
        "--max-degree",
        "4",
    ]));
    assert_eq!(
        groups(&v),
        vec![
            (1, vec![]),
            (0, vec![]),
            (0, vec![]),
            (0, vec![]),
            (1, vec![2])
        ]
    );
}

#[test]
fn sign_cohomology_of_s3() {
    let v = json(&finsub(&[
        "groupcoh",
        "--n",
        "3",
        "--action",
        "sign",
        "--max-degree",
        "1",
    ]));
    assert_eq!(groups(&v), vec![(0, vec![]), (0, vec![2])]);
}

#[test]
fn spectral_page_of_two_sphere_three_points() {
    let v = json(&finsub(&["page", "--d", "2", "--n", "3"]));
    let pages = v["pages"].as_array().unwrap();
    let last = pages.last().unwrap()["entries"].as_array().unwrap();
    assert_eq!(last.len(), 1);
    assert_eq!(
        (
            last[0]["p"].as_u64(),
            last[0]["q"].as_i64(),
            last[0]["dim"].as_u64()
        ),
        (Some(3), Some(3), Some(1))
    );
    assert_eq!(v["limit_totals"]["6"], 1);
}

#[test]
fn empty_cache_reports_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&finsub(&[
        "cache",
        "stats",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]));
    assert_eq!(v["entries"], 0);
}

#[test]
fn cache_round_trip_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["homology", "--d", "2", "--n", "3", "--cache-dir", cache];
    let cold = finsub(&args);
    let stats = json(&finsub(&["cache", "stats", "--cache-dir", cache]));
    assert!(stats["entries"].as_u64().unwrap() > 0);
    let warm = finsub(&args);
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = finsub(&args[..5]);
    assert_eq!(cold.stdout, uncached.stdout);
    let cleared = json(&finsub(&["cache", "clear", "--cache-dir", cache]));
    assert!(cleared["removed"].as_u64().unwrap() > 0);
    assert_eq!(
        json(&finsub(&["cache", "stats", "--cache-dir", cache]))["entries"],
        0
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let out = finsub(&[
            "homology",
            "--d",
            "2",
            "--n",
            "4",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let p1 = finsub(&["page", "--d", "2", "--n", "3"]);
    let p2 = finsub(&["page", "--d", "2", "--n", "3"]);
    assert_eq!(p1.stdout, p2.stdout);
}

#[test]
fn verify_exit_codes() {
    let ok = finsub(&["verify", "--claim", "connecting", "--n", "3", "--d", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("[match]"));

    // the adjudicated case never fails the run
    let adj = finsub(&["verify", "--claim", "thm2", "--n", "2", "--d", "3"]);
    assert_eq!(adj.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&adj.stdout).contains("[adjudicated]"));

    let bad = finsub(&["verify", "--claim", "thm99"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn only_mismatches_fail_a_verification_run() {
    let report = |verdict| VerificationReport {
        claim: "thm2".into(),
        parameters: Parameters {
            space: "sphere".into(),
            n: 2,
            d: 3,
        },
        check: "r = 0".into(),
        anchor: String::new(),
        expected: vec![],
        computed: "0".into(),
        verdict,
        wall_time_secs: 0.0,
    };
    assert_eq!(verify_exit_code(&[]), EXIT_OK);
    assert_eq!(
        verify_exit_code(&[report(Verdict::Match), report(Verdict::Adjudicated)]),
        EXIT_OK
    );
    assert_eq!(
        verify_exit_code(&[report(Verdict::Match), report(Verdict::Mismatch)]),
        EXIT_MISMATCH
    );
}

#[test]
fn usage_and_budget_exit_codes() {
    assert_eq!(finsub(&["homology", "--bogus"]).status.code(), Some(2));
    assert_eq!(finsub(&["homology", "--d", "2"]).status.code(), Some(2));
    assert_eq!(
        finsub(&["homology", "--d", "2", "--n", "2", "--construction", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        finsub(&["homology", "--space", "file:/nonexistent.json", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    let budget = finsub(&["homology", "--d", "3", "--n", "3"]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("budget"));
    let ceiling = finsub(&["homology", "--d", "2", "--n", "4", "--ceiling", "100"]);
    assert_eq!(ceiling.status.code(), Some(3));
    assert_eq!(
        finsub(&[
            "groupcoh",
            "--n",
            "5",
            "--max-degree",
            "3",
            "--ceiling",
            "1000"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn saved_space_round_trips_through_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s2.json");
    let out = finsub(&[
        "space",
        "--d",
        "2",
        "--n",
        "1",
        "--trunc",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let spec = format!("file:{}", path.display());
    let from_file = json(&finsub(&[
        "homology",
        "--space",
        &spec,
        "--n",
        "2",
        "--max-degree",
        "4",
    ]));
    let built_in = json(&finsub(&["homology", "--d", "2", "--n", "2"]));
    assert_eq!(groups(&from_file), groups(&built_in));
}

#[test]
fn every_claim_holds_on_its_default_cases() {
    let out = finsub(&["verify", "--claim", "all", "--json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let reports: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    let claims: std::collections::BTreeSet<&str> = reports
        .iter()
        .map(|r| r["claim"].as_str().unwrap())
        .collect();
    assert_eq!(claims.len(), 11);
    assert!(reports.iter().all(|r| r["verdict"] != "mismatch"));
    let adjudicated = reports
        .iter()
        .filter(|r| r["verdict"] == "adjudicated")
        .count();
    assert_eq!(adjudicated, 2);
}
