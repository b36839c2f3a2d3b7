//! End-to-end checks of the command-line facade.
//!
//! The binary must be a pure front-end: every artifact it writes has to be
//! byte-identical to what the library's writers produce for the same inputs,
//! re-ingesting an artifact must reproduce it exactly, and the documented
//! exit codes (0 ok, 1 verification mismatch, 2 usage error) must hold.
//! Checksums of the default sweep artifacts are pinned from the first
//! oracle-verified run.

use std::path::PathBuf;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use steerbound::bounds::{default_grid, post_selected_curve, Criterion};
use steerbound::{build_measurement_set, io};

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_steerbound"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary launches")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn temp_dir(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("steerbound-cli-{test}-{}", std::process::id()));
    if dir.exists() {
        std::fs::remove_dir_all(&dir).expect("stale test dir removable");
    }
    std::fs::create_dir_all(&dir).expect("test dir creatable");
    dir
}

fn read(path: &PathBuf) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {path:?}: {e}"))
}

fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    format!("{:x}", hasher.finalize())
}

#[test]
fn bounds_table_is_the_library_table() {
    let output = run(&["bounds"], &[]);
    let rows = io::perfect_bound_rows(&[2, 3, 4, 6, 10], &Criterion::ALL).unwrap();
    assert_eq!(stdout_of(&output), io::write_bounds_csv(&rows));

    let output = run(
        &[
            "bounds",
            "--n",
            "3,4",
            "--criterion",
            "linear",
            "--format",
            "json",
        ],
        &[],
    );
    let rows = io::perfect_bound_rows(&[3, 4], &[Criterion::Linear]).unwrap();
    assert_eq!(stdout_of(&output), io::to_json_pretty(&rows).unwrap());
}

#[test]
fn sweep_artifacts_match_library_writers_and_round_trip() {
    let dir = temp_dir("sweep");
    let out = dir.to_str().unwrap();
    let output = run(&["sweep", "--n", "6,10", "--out", out], &[]);
    assert!(output.status.success());

    let grid = default_grid();
    for n in [6usize, 10] {
        let set = build_measurement_set(n).unwrap();
        let linear = post_selected_curve(&set, Criterion::Linear, &grid).unwrap();
        let variance = post_selected_curve(&set, Criterion::Variance, &grid).unwrap();

        let text = read(&dir.join(format!("sweep_linear_n{n}.csv")));
        assert_eq!(
            text,
            io::write_curve_csv(n, Criterion::Linear, &linear.grid)
        );
        let parsed = io::parse_curve_csv(&text).unwrap();
        assert_eq!(
            io::write_curve_csv(parsed.n, parsed.criterion, &parsed.grid),
            text
        );

        let text = read(&dir.join(format!("sweep_variance_n{n}.csv")));
        assert_eq!(
            text,
            io::write_curve_csv(n, Criterion::Variance, &variance.grid)
        );

        let text = read(&dir.join(format!("points_linear_n{n}.csv")));
        let table = io::PointsTable::from_curve(&linear).unwrap();
        assert_eq!(text, io::write_points_csv(&table));
        assert_eq!(
            io::write_points_csv(&io::parse_points_csv(&text).unwrap()),
            text
        );
    }

    // The comparison artifact concatenates both sets in flag order.
    let text = read(&dir.join("comparison.csv"));
    let mut rows = Vec::new();
    for n in [6usize, 10] {
        let set = build_measurement_set(n).unwrap();
        let linear = post_selected_curve(&set, Criterion::Linear, &grid).unwrap();
        let variance = post_selected_curve(&set, Criterion::Variance, &grid).unwrap();
        rows.extend(io::comparison_rows(&linear, &variance).unwrap());
    }
    assert_eq!(text, io::write_comparison_csv(&rows));
    assert_eq!(
        io::write_comparison_csv(&io::parse_comparison_csv(&text).unwrap()),
        text
    );

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn default_sweep_checksums_are_frozen() {
    let dir = temp_dir("checksums");
    let out = dir.to_str().unwrap();
    assert!(run(&["sweep", "--out", out], &[]).status.success());
    assert!(run(&["naive-sweep", "--n", "6", "--out", out], &[])
        .status
        .success());
    for (name, expected) in [
        (
            "sweep_linear_n10.csv",
            "0e92896b1ebf7b5db1c04d9b9f9d4f4e34b0f76a2656d17171216b30e65fafd2",
        ),
        (
            "sweep_variance_n10.csv",
            "beea4c35402da7489268ddeedac47ce042f32b57f67fb2efc03a527b6170d179",
        ),
        (
            "points_linear_n6.csv",
            "3b0cc03f5e36397cbb50f797565f3ea981f57f64e3959c1c5d7450dffcd8394e",
        ),
        (
            "comparison.csv",
            "49deb2dae706830637157c46fff7944600b39f242ffe70196d05f35b6efb574e",
        ),
        (
            "comparison_points.csv",
            "a83e7d56df2d0ef295db0166b35e474f6e20f779d89fa56b3ac7f491ec9eb93a",
        ),
        (
            "naive_n6.csv",
            "2b08eb7cdce9bb4a2f0e82fbf6b58fee62f0a9f88518b35a1e2450781258de95",
        ),
    ] {
        assert_eq!(
            sha256_hex(&read(&dir.join(name))),
            expected,
            "{name} drifted"
        );
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn naive_sweep_matches_library_writer() {
    let dir = temp_dir("naive");
    let out = dir.to_str().unwrap();
    assert!(run(
        &[
            "naive-sweep",
            "--n",
            "4",
            "--grid",
            "0.2:1:0.2",
            "--out",
            out
        ],
        &[]
    )
    .status
    .success());
    let text = read(&dir.join("naive_n4.csv"));
    let set = build_measurement_set(4).unwrap();
    let sweep =
        io::NaiveSweep::from_grid(&set, &io::GridSpec::parse("0.2:1:0.2").unwrap().points())
            .unwrap();
    assert_eq!(text, io::write_naive_sweep_csv(&sweep));
    assert_eq!(
        io::write_naive_sweep_csv(&io::parse_naive_sweep_csv(&text).unwrap()),
        text
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn strategy_catalogs_match_library_enumeration() {
    let output = run(&["strategies", "--n", "3", "--m", "3"], &[]);
    let set = build_measurement_set(3).unwrap();
    let catalog = steerbound::strategies::optimal_linear_ensembles(&set, 3).unwrap();
    assert_eq!(catalog.multiplicity, 8);
    assert_eq!(stdout_of(&output), io::catalog_to_json(&catalog).unwrap());

    let output = run(
        &[
            "strategies",
            "--n",
            "6",
            "--criterion",
            "variance",
            "--m",
            "5",
        ],
        &[],
    );
    let set = build_measurement_set(6).unwrap();
    let catalog = steerbound::strategies::optimal_variance_ensembles(&set, 5).unwrap();
    assert_eq!(stdout_of(&output), io::catalog_to_json(&catalog).unwrap());
}

#[test]
fn simulation_reports_are_reproducible_and_thread_independent() {
    let dir = temp_dir("simulate");
    let scenario_path = dir.join("scenario.json");
    let scenario = steerbound::simulator::Scenario::honest(
        4,
        steerbound::bounds::LossRegime::Postselect,
        steerbound::WernerParams::new(0.9, 0.8).unwrap(),
        200_000,
        42,
    )
    .unwrap();
    std::fs::write(&scenario_path, io::scenario_to_json(&scenario).unwrap()).unwrap();
    let path = scenario_path.to_str().unwrap();

    let first = stdout_of(&run(&["simulate", "--scenario", path], &[]));
    let again = stdout_of(&run(&["simulate", "--scenario", path], &[]));
    assert_eq!(first, again);

    // The facade adds nothing: the report is the library's, byte for byte.
    let report = steerbound::simulator::run(&scenario).unwrap();
    assert_eq!(first, io::report_to_json(&report).unwrap());

    // Worker count must not leak into the tallies.
    let single = stdout_of(&run(
        &["simulate", "--scenario", path],
        &[("STEERBOUND_THREADS", "1")],
    ));
    assert_eq!(first, single);

    let reseeded = stdout_of(&run(&["simulate", "--scenario", path, "--seed", "43"], &[]));
    assert_ne!(first, reseeded);

    // A transcript records one line per trial after the header and leaves
    // the report unchanged relative to the plain run at those overrides.
    let transcript_path = dir.join("transcript.csv");
    let with_transcript = stdout_of(&run(
        &[
            "simulate",
            "--scenario",
            path,
            "--trials",
            "1000",
            "--transcript",
            transcript_path.to_str().unwrap(),
        ],
        &[],
    ));
    let plain = stdout_of(&run(
        &["simulate", "--scenario", path, "--trials", "1000"],
        &[],
    ));
    assert_eq!(with_transcript, plain);
    let transcript = read(&transcript_path);
    assert_eq!(transcript.lines().count(), 1001);
    assert!(transcript.starts_with("trial,setting,alice,bob,detected\n"));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_passes_on_a_clean_build() {
    let output = run(&["verify", "--n", "2,3", "--grid-points", "20000"], &[]);
    let text = stdout_of(&output);
    assert!(text.contains("verified:"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn exit_codes_follow_the_contract() {
    // Usage errors: bad set size, malformed grid, bad thread cap, csv catalog,
    // missing scenario file, unknown subcommand.
    assert_eq!(run(&["sweep", "--n", "7"], &[]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--grid", "0.5:0.1:0.1"], &[]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["bounds"], &[("STEERBOUND_THREADS", "zero")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["strategies", "--n", "3", "--format", "csv"], &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(
            &["simulate", "--scenario", "/nonexistent/scenario.json"],
            &[]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["nonsense"], &[]).status.code(), Some(2));
}
