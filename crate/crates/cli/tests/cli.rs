//! End-to-end tests running the compiled binary against state documents on
//! disk, checking reports, point-cloud output, and the exit-code contract.

use serde_json::Value;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const SQRT_5_OVER_3: f64 = 0.7453559924999299;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_blochpair"));
    cmd.env_remove("BLOCHPAIR_TOLERANCE");
    cmd
}

fn write_state(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn singlet_json() -> String {
    let w = std::f64::consts::FRAC_1_SQRT_2;
    format!(
        r#"{{"format_version": 1, "label": "singlet",
            "lambda": [[[0.0, 0.0], [{w}, 0.0]], [[-{w}, 0.0], [0.0, 0.0]]]}}"#
    )
}

fn worked_json() -> String {
    let s = 1.0 / 30.0_f64.sqrt();
    format!(
        r#"{{"format_version": 1,
            "lambda": [[[{a}, 0.0], [{b}, 0.0]], [[{c}, 0.0], [{d}, 0.0]]]}}"#,
        a = 4.0 * s,
        b = s,
        c = 2.0 * s,
        d = 3.0 * s,
    )
}

/// Product state (0.6, 0.8i) (x) e1.
fn product_json() -> &'static str {
    r#"{"format_version": 1,
        "amplitudes": [[0.6, 0.0], [0.0, 0.0], [0.0, 0.8], [0.0, 0.0]]}"#
}

/// Schmidt-coordinate state with r = 0.5.
fn half_r_json() -> String {
    let hi = 0.75_f64.sqrt();
    format!(
        r#"{{"format_version": 1,
            "amplitudes": [[{hi}, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]}}"#
    )
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn run_expect_code(cmd: &mut Command, code: i32) -> Output {
    let out = cmd.output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(code),
        "wrong exit code for {:?}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn schmidt_r(state_path: &str) -> f64 {
    let stdout = run_ok(bin().args(["schmidt", state_path, "--json"]));
    let report: Value = serde_json::from_str(&stdout).unwrap();
    report["r"].as_f64().unwrap()
}

#[test]
fn schmidt_reports_the_entanglement_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let singlet = write_state(dir.path(), "singlet.json", &singlet_json());
    let product = write_state(dir.path(), "product.json", product_json());
    let worked = write_state(dir.path(), "worked.json", &worked_json());

    assert!(schmidt_r(&singlet).abs() <= 1e-12);
    assert!((schmidt_r(&product) - 1.0).abs() <= 1e-12);
    assert!((schmidt_r(&worked) - SQRT_5_OVER_3).abs() <= 1e-12);

    // human-readable report carries the same number
    let text = run_ok(bin().args(["schmidt", &worked]));
    assert!(text.contains("entanglement parameter r = 0.745355992500"));
    assert!(text.contains("reconstruction fidelity = 1.000000000000"));
}

#[test]
fn schmidt_reads_standard_input() {
    let mut child = bin()
        .args(["schmidt", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(singlet_json().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report["r"].as_f64().unwrap().abs() <= 1e-12);
}

#[test]
fn collapse_of_the_singlet_anticorrelates() {
    let dir = tempfile::tempdir().unwrap();
    let singlet = write_state(dir.path(), "singlet.json", &singlet_json());
    let stdout = run_ok(bin().args([
        "measure", &singlet, "--mode", "collapse", "--theta", "0", "--json",
    ]));
    let report: Value = serde_json::from_str(&stdout).unwrap();
    let branches = report["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 2);
    for branch in branches {
        assert!((branch["probability"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    }
    // measuring up leaves the partner down, and vice versa
    let plus_theta = branches[0]["partner_point"]["theta"].as_f64().unwrap();
    let minus_theta = branches[1]["partner_point"]["theta"].as_f64().unwrap();
    assert!((plus_theta - std::f64::consts::PI).abs() <= 1e-12);
    assert!(minus_theta.abs() <= 1e-12);
}

#[test]
fn luder_measurement_leaves_the_partner_marginal_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let worked = write_state(dir.path(), "worked.json", &worked_json());
    let stdout = run_ok(bin().args([
        "measure", &worked, "--mode", "luder", "--theta", "1.0471975511965976", "--json",
    ]));
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert!(report["partner_marginal_drift"].as_f64().unwrap() <= 1e-12);
    assert_eq!(report["partner_marginal_invariant"], Value::Bool(true));

    // D2' equals the state's reduced density (1/30)[[20,10],[10,10]]
    let d2 = report["density_second_after"].as_array().unwrap();
    let expect = [[20.0 / 30.0, 10.0 / 30.0], [10.0 / 30.0, 10.0 / 30.0]];
    for i in 0..2 {
        for j in 0..2 {
            let re = d2[i][j][0].as_f64().unwrap();
            let im = d2[i][j][1].as_f64().unwrap();
            assert!((re - expect[i][j]).abs() <= 1e-12);
            assert!(im.abs() <= 1e-12);
        }
    }
}

#[test]
fn collapse_along_a_product_ray_has_a_single_branch() {
    let dir = tempfile::tempdir().unwrap();
    let product = write_state(dir.path(), "product.json", product_json());
    // ray of (0.6, 0.8i): theta = 2 atan2(0.8, 0.6), phi = pi/2
    let theta = format!("{}", 2.0 * 0.8_f64.atan2(0.6));
    let phi = format!("{}", std::f64::consts::FRAC_PI_2);
    let stdout = run_ok(bin().args([
        "measure", &product, "--mode", "collapse", "--theta", &theta, "--phi", &phi, "--json",
    ]));
    let report: Value = serde_json::from_str(&stdout).unwrap();
    let branches = report["branches"].as_array().unwrap();
    assert!((branches[0]["probability"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(branches[0]["suppressed"], Value::Bool(false));
    assert!(branches[1]["probability"].as_f64().unwrap() <= 1e-14);
    assert_eq!(branches[1]["suppressed"], Value::Bool(true));
    assert_eq!(branches[1]["partner"], Value::Null);
}

fn parse_csv(stdout: &str) -> (Vec<Vec<f64>>, Vec<String>) {
    let mut rows = Vec::new();
    let mut comments = Vec::new();
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta_in,phi_in,r_out,theta_out,phi_out,x,y,z,probability"
    );
    for line in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            comments.push(comment.trim().to_string());
            continue;
        }
        let row: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(row.len(), 9);
        rows.push(row);
    }
    (rows, comments)
}

#[test]
fn map_equator_emits_the_cone() {
    let dir = tempfile::tempdir().unwrap();
    let worked = write_state(dir.path(), "worked.json", &worked_json());
    let stdout = run_ok(bin().args(["map", &worked, "--grid", "equator:16"]));
    let (rows, comments) = parse_csv(&stdout);
    assert_eq!(rows.len(), 16);
    for row in &rows {
        let z = row[7];
        assert!((z - SQRT_5_OVER_3).abs() <= 1e-12);
        // r_out is a surface point
        assert!((row[2] - 1.0).abs() <= 1e-12);
    }
    assert_eq!(comments.len(), 1);
    let cone: f64 = comments[0]
        .strip_prefix("cone_polar_cosine =")
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((cone - SQRT_5_OVER_3).abs() <= 1e-12);
}

#[test]
fn map_meridian_follows_the_stretching_law() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_state(dir.path(), "half.json", &half_r_json());
    let stdout = run_ok(bin().args(["map", &state, "--grid", "meridian:21"]));
    let (rows, comments) = parse_csv(&stdout);
    assert_eq!(rows.len(), 21);
    assert!(comments.is_empty());
    for row in &rows {
        let theta_in = row[0];
        let z = row[7];
        let c = theta_in.cos();
        let expected = (0.5 + c) / (1.0 + 0.5 * c);
        assert!((z - expected).abs() <= 1e-9);
    }
}

#[test]
fn map_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let singlet = write_state(dir.path(), "singlet.json", &singlet_json());
    let out_path = dir.path().join("cloud.csv");
    run_ok(bin().args([
        "map",
        &singlet,
        "--grid",
        "fibonacci:10",
        "--output",
        out_path.to_str().unwrap(),
    ]));
    let content = std::fs::read_to_string(&out_path).unwrap();
    let (rows, _) = parse_csv(&content);
    assert_eq!(rows.len(), 10);
}

#[test]
fn sampling_is_reproducible_and_concentrated() {
    let dir = tempfile::tempdir().unwrap();
    let singlet = write_state(dir.path(), "singlet.json", &singlet_json());
    let args = [
        "sample", &singlet, "--theta", "1.1", "--phi", "2.2", "--shots", "100000", "--seed",
        "31415", "--json",
    ];
    let first = run_ok(bin().args(args));
    let second = run_ok(bin().args(args));
    assert_eq!(first, second);

    let report: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(report["generator"], Value::String("chacha12".into()));
    assert_eq!(report["seed"].as_u64(), Some(31415));
    let plus = report["counts"]["plus"].as_u64().unwrap();
    let minus = report["counts"]["minus"].as_u64().unwrap();
    assert_eq!(plus + minus, 100_000);
    let freq = plus as f64 / 100_000.0;
    assert!((freq - 0.5).abs() <= 4.0 * (0.25_f64 / 100_000.0).sqrt());
}

#[test]
fn sample_of_a_certain_branch_is_unanimous() {
    let dir = tempfile::tempdir().unwrap();
    let product = write_state(dir.path(), "product.json", product_json());
    let theta = format!("{}", 2.0 * 0.8_f64.atan2(0.6));
    let phi = format!("{}", std::f64::consts::FRAC_PI_2);
    let stdout = run_ok(bin().args([
        "sample", &product, "--theta", &theta, "--phi", &phi, "--shots", "1000", "--json",
    ]));
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["counts"]["plus"].as_u64(), Some(1000));
    assert_eq!(report["counts"]["minus"].as_u64(), Some(0));
}

#[test]
fn littlesphere_points_lie_on_the_little_sphere() {
    // surface state at the north pole: little sphere of radius 1/2 around
    // (0, 0, 1/2)
    let stdout = run_ok(bin().args([
        "littlesphere", "--r", "1", "--theta", "0", "--grid", "fibonacci:100",
    ]));
    let (rows, _) = parse_csv(&stdout);
    assert_eq!(rows.len(), 100);
    for row in &rows {
        let (x, y, z) = (row[5], row[6], row[7]);
        let dist = (x * x + y * y + (z - 0.5) * (z - 0.5)).sqrt();
        assert!((dist - 0.5).abs() <= 1e-9);
    }

    // center state: every projection collapses to the origin
    let stdout = run_ok(bin().args([
        "littlesphere", "--r", "0", "--theta", "0", "--grid", "fibonacci:16",
    ]));
    let (rows, _) = parse_csv(&stdout);
    for row in &rows {
        assert!(row[2].abs() <= 1e-12);
        assert!(row[5].abs() <= 1e-12 && row[6].abs() <= 1e-12 && row[7].abs() <= 1e-12);
    }
}

#[test]
fn degrees_flag_converts_at_the_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let worked = write_state(dir.path(), "worked.json", &worked_json());
    let radians = run_ok(bin().args([
        "measure", &worked, "--mode", "collapse", "--theta", "1.5707963267948966", "--json",
    ]));
    let degrees = run_ok(bin().args([
        "measure", &worked, "--mode", "collapse", "--theta", "90", "--degrees", "--json",
    ]));
    assert_eq!(radians, degrees);
}

#[test]
fn exit_codes_separate_parse_and_domain_failures() {
    let dir = tempfile::tempdir().unwrap();

    // malformed JSON: parse error, exit 2
    let broken = write_state(dir.path(), "broken.json", "{\"format_version\": 1");
    run_expect_code(bin().args(["schmidt", &broken]), 2);

    // unknown grid: parse error, exit 2
    let singlet = write_state(dir.path(), "singlet.json", &singlet_json());
    run_expect_code(bin().args(["map", &singlet, "--grid", "cube:6"]), 2);

    // polar angle out of range: domain error, exit 3
    run_expect_code(
        bin().args(["measure", &singlet, "--mode", "collapse", "--theta", "9.9"]),
        3,
    );

    // norm too far off to renormalize: domain error, exit 3
    let bad = write_state(
        dir.path(),
        "bad.json",
        r#"{"format_version": 1, "amplitudes": [[0.9, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#,
    );
    run_expect_code(bin().args(["schmidt", &bad]), 3);

    // bad tolerance override: parse error, exit 2
    let mut cmd = bin();
    cmd.env("BLOCHPAIR_TOLERANCE", "not-a-number");
    run_expect_code(
        cmd.args(["littlesphere", "--r", "0.5", "--theta", "0.4"]),
        2,
    );

    // missing file: parse error, exit 2
    run_expect_code(bin().args(["schmidt", "/nonexistent/state.json"]), 2);
}

#[test]
fn mild_norm_deviation_renormalizes_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let w = std::f64::consts::FRAC_1_SQRT_2 * (1.0 + 1e-7);
    let body = format!(
        r#"{{"format_version": 1, "lambda": [[[0.0, 0.0], [{w}, 0.0]], [[-{w}, 0.0], [0.0, 0.0]]]}}"#
    );
    let path = write_state(dir.path(), "mild.json", &body);
    let out = bin().args(["schmidt", &path]).output().unwrap();
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("renormalized"), "stderr was: {stderr}");
}
