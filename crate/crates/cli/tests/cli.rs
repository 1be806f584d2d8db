use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use detsquare::experiments::ExperimentReport;

fn detsquare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detsquare"))
        .args(args)
        .env_remove("DETSQUARE_SHARDS")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> ExperimentReport {
    let out = detsquare(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn exact<'a>(r: &'a ExperimentReport, name: &str) -> &'a str {
    r.get(name).and_then(|e| e.exact.as_deref()).unwrap_or_else(|| panic!("{name} has no exact value"))
}

fn matrix_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn exact_square_probability_at_n2() {
    let r = report(&["exact-square-prob", "--n", "2", "--format", "json"]);
    assert_eq!(r.experiment, "exact-square-prob");
    assert_eq!(exact(&r, "p_square"), "25/32");
    assert_eq!(exact(&r, "p_det_zero"), "19/32");
}

#[test]
fn mertens_at_10() {
    let r = report(&["mertens", "--n", "10"]);
    assert_eq!(exact(&r, "sum"), "247/210");
    assert_eq!(r.value_of("prime_count"), 4.0);
}

#[test]
fn reruns_are_identical_apart_from_timing() {
    let args = ["square-prob", "--n", "2", "--samples", "100000", "--seed", "7", "--shards", "4"];
    let a = report(&args);
    let b = report(&args);
    assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
    assert_eq!(a.provenance.seed, 7);
    assert_eq!(a.provenance.shards, 4);
    assert_eq!(a.provenance.samples, 100_000);
    let p = a.value_of("p_square[n=2]");
    assert!((p - 25.0 / 32.0).abs() < 0.01, "{p}");

    let one = report(&["square-prob", "--n", "2", "--samples", "100000", "--seed", "7", "--shards", "1"]);
    assert_eq!(one.estimates, a.estimates);
}

#[test]
fn shard_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_detsquare"))
        .args(["maples", "--n", "6", "--p", "3", "--samples", "50"])
        .env("DETSQUARE_SHARDS", "3")
        .output()
        .unwrap();
    let r: ExperimentReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.provenance.shards, 3);
    assert_eq!(r.provenance.seed, 0);

    let out = Command::new(env!("CARGO_BIN_EXE_detsquare"))
        .args(["maples", "--n", "6", "--p", "3", "--samples", "50"])
        .env("DETSQUARE_SHARDS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn det_of_small_matrices() {
    let f = matrix_file("2\n1 1\n1 -1\n");
    let r = report(&["det", path(&f)]);
    assert_eq!(exact(&r, "det"), "-2/1");
    assert_eq!(r.value_of("is_square"), 0.0);
    assert_eq!(r.value_of("tau"), 2.0);

    let f = matrix_file("1\n0\n");
    let r = report(&["det", path(&f)]);
    assert_eq!(exact(&r, "det"), "0/1");
    assert_eq!(r.value_of("is_square"), 1.0);
    assert!(r.get("tau").is_none());

    let f = matrix_file("3\n1 0 0\n0 -1 0\n0 0 -1\n");
    let r = report(&["det", path(&f)]);
    assert_eq!(exact(&r, "det"), "1/1");
    assert_eq!(r.value_of("is_square"), 1.0);
    assert_eq!(r.value_of("tau"), 1.0);
}

#[test]
fn malformed_matrix_files_exit_2_with_position() {
    for (text, position) in [
        ("2\n1 2\n1 -1\n", "line 2, column 3"),
        ("2\n1 1\n1\n", "line 3"),
        ("x\n", "line 1, column 1"),
        ("2\n1 1 0\n1 1\n", "line 2, column 5"),
    ] {
        let f = matrix_file(text);
        let out = detsquare(&["det", path(&f)]);
        assert_eq!(out.status.code(), Some(2), "{text:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(position), "{text:?}: {stderr}");
        assert!(out.stdout.is_empty());
    }
    let out = detsquare(&["det", "/nonexistent/matrix.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn argument_errors_exit_2() {
    for args in [
        &["square-prob", "--n", "0"][..],
        &["maples", "--n", "10", "--p", "4"],
        &["square-prob"],
        &["square-prob", "--n", "3", "--shards", "0"],
        &["partial-zero", "--n", "6", "--k", "6"],
        &["isolated-check", "--k", "2", "--family", "1,0;1,1"],
        &["isolated-check", "--k", "2", "--family", "1,2"],
        &["no-such-command"],
    ] {
        assert_eq!(detsquare(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn resource_caps_exit_3() {
    for args in [
        &["exact-square-prob", "--n", "5"][..],
        &["fourier-check", "--max-len", "40", "--range", "3"],
    ] {
        let out = detsquare(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("resource cap"));
    }
}

#[test]
fn csv_rows_mirror_json_estimates() {
    let args = ["codim", "--n", "10", "--p", "2,3", "--samples", "300", "--shards", "2"];
    let json = report(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = detsquare(&csv_args);
    assert!(out.status.success());
    let mut rows = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["experiment", "name", "value", "ci_low", "ci_high", "exact", "seed", "shards", "samples", "version", "params"]
    );
    let rows: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), json.estimates.len());
    let opt = |s: &str| (!s.is_empty()).then(|| s.parse::<f64>().unwrap());
    for (row, e) in rows.iter().zip(&json.estimates) {
        assert_eq!(&row[0], json.experiment);
        assert_eq!(&row[1], e.name);
        assert_eq!(row[2].parse::<f64>().unwrap(), e.value, "{}", e.name);
        assert_eq!(opt(&row[3]), e.ci_low);
        assert_eq!(opt(&row[4]), e.ci_high);
        assert_eq!(&row[5], e.exact.as_deref().unwrap_or(""));
        assert_eq!(&row[8], "300");
        let params: serde_json::Value = serde_json::from_str(&row[10]).unwrap();
        assert_eq!(params, serde_json::to_value(&json.params).unwrap());
    }
}

#[test]
fn json_round_trips_for_every_subcommand() {
    let f = matrix_file("3\n1 1 0\n0 1 1\n1 0 1\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["square-prob", "--n", "3,5", "--samples", "200"],
        vec!["exact-square-prob", "--n", "3"],
        vec!["mode-decay", "--n", "3,6", "--samples", "200"],
        vec!["maples", "--n", "8", "--p", "2", "--samples", "200"],
        vec!["divisors", "--n", "6", "--samples", "200"],
        vec!["pair-divisors", "--n", "6", "--tau1", "1", "--tau2", "-2", "--samples", "100"],
        vec!["divisor-tail", "--n", "8", "--k", "2", "--samples", "100"],
        vec!["partial-zero", "--n", "6", "--k", "2", "--samples", "100"],
        vec!["square-suffix", "--n", "6", "--k", "2", "--samples", "100"],
        vec!["codim", "--n", "8", "--samples", "100"],
        vec!["equidist", "--n", "8", "--p", "3", "--samples", "100"],
        vec!["fourier-check", "--max-len", "3"],
        vec!["fourier-check", "--a", "1,-1,2"],
        vec!["isolated-check", "--k", "3", "--samples", "100"],
        vec!["isolated-check", "--k", "2", "--family", "0,0;1,1;-1,-1"],
        vec!["mertens", "--n", "100"],
        vec!["det", path(&f)],
    ];
    for args in runs {
        let out = detsquare(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        let r: ExperimentReport = serde_json::from_str(&text).unwrap();
        assert_eq!(r.experiment, args[0], "{args:?}");
        assert!(!r.estimates.is_empty());
        let again: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(again.to_json(), r.to_json(), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.csv");
    let out = detsquare(&["mertens", "--n", "30", "--format", "csv", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(Path::new(&target)).unwrap();
    assert!(text.starts_with("experiment,name,value"));
    assert!(text.contains("mertens,prime_count,10.0"));
}

#[test]
fn isolated_check_flags_the_zero_sum_code() {
    // every v in {0,±1}^3 with v_1 + v_2 + v_3 ≡ 0 (mod 3)
    let family = "0,0,0;1,1,1;-1,-1,-1;1,-1,0;-1,1,0;1,0,-1;-1,0,1;0,1,-1;0,-1,1";
    let r = report(&["isolated-check", "--k", "3", "--family", family]);
    assert_eq!(r.value_of("size"), 9.0);
    assert_eq!(exact(&r, "mass"), "11/32");
    assert_eq!(exact(&r, "bound"), "1/3");
    assert_eq!(r.value_of("mass_within_bound"), 0.0);
    assert_eq!(r.value_of("balls_disjoint"), 0.0);
}
