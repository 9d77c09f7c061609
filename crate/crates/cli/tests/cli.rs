//! End-to-end tests of the binary: output shapes, exit codes, determinism,
//! and the file/environment output routing.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermogenus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

#[test]
fn series_order_zero_prints_one() {
    let out = run(&["series", "--kind", "AHAT", "--order", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn series_json_has_exact_fraction_strings() {
    let out = run(&["series", "--kind", "L", "--order", "6", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["order"], 6);
    let coeffs: Vec<&str> = json["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["1", "0", "1/12", "0", "-1/720", "0", "1/30240"]);
}

#[test]
fn genus_json_lists_class_polynomials() {
    let out = run(&["genus", "--kind", "L", "--degree", "3", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let polys = json.as_array().unwrap();
    assert_eq!(polys.len(), 4);
    assert_eq!(polys[1]["terms"]["p1"], "1/3");
    assert_eq!(polys[2]["terms"]["p2"], "7/45");
    assert_eq!(polys[2]["terms"]["p1^2"], "-1/45");
    assert_eq!(polys[3]["terms"]["p3"], "62/945");
}

#[test]
fn thermo_sweep_emits_csv_columns() {
    let out = run(&["thermo", "--x-grid", "0.5:2:4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,Z,U,betaU"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    let first: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.5);
    // Z(0.5) = 1/(2 sinh(0.25))
    assert!((first[1] - 1.0 / (2.0 * 0.25f64.sinh())).abs() < 1e-12);
}

#[test]
fn identical_configuration_gives_byte_identical_output() {
    let args = [
        "verify",
        "all",
        "--order",
        "12",
        "--x-grid",
        "0.01:20:40",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let sweep = ["thermo", "--x-grid", "0.01:20:60", "--logspace"];
    let a = run(&sweep);
    let b = run(&sweep);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_all_reports_four_identities_and_passes() {
    let out = run(&["verify", "all", "--order", "16", "--x-grid", "0.01:20:50"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["all_pass"], true);
    let identities = json["identities"].as_array().unwrap();
    assert_eq!(identities.len(), 4);
    let names: Vec<&str> = identities
        .iter()
        .map(|b| b["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"dimensionless_energy_series_matches_l"));
    assert!(names.contains(&"partition_times_x_matches_a_hat"));
    assert!(names.contains(&"l_matches_a_hat_times_cosh"));
    assert!(names.contains(&"derivative_split_matches_finite_difference"));
    for block in identities {
        assert_eq!(block["pass"], true, "identity {} failed", block["name"]);
    }
}

#[test]
fn verify_trace_functorial_passes_with_residuals() {
    let out = run(&[
        "verify",
        "trace-functorial",
        "--x-grid",
        "0.5:10:10",
        "--modes",
        "20000",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["all_pass"], true);
    let points = json["points"].as_array().unwrap();
    assert_eq!(points.len(), 10);
    for p in points {
        assert!(p["relative_residual"].as_f64().unwrap() >= 0.0);
        assert!(p["bound"].as_f64().unwrap() > 0.0);
        assert_eq!(p["pass"], true);
    }
}

#[test]
fn density_profile_is_even_and_positive() {
    let out = run(&[
        "density",
        "--x",
        "1.0",
        "--levels",
        "10",
        "--grid",
        "-8:8:41",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 41);
    for i in 0..rows.len() {
        let mirror = rows.len() - 1 - i;
        assert!((rows[i][0] + rows[mirror][0]).abs() < 1e-12);
        assert!((rows[i][1] - rows[mirror][1]).abs() < 1e-12);
        assert!(rows[i][1] > 0.0);
    }
}

#[test]
fn asymmetry_sweep_matches_finite_difference_column() {
    let out = run(&["asymmetry", "--x-grid", "0.1:5:20", "--beta", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("x,f_plus,f_minus,diff,fd_check\n"));
    for row in text.lines().skip(1) {
        let vals: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(vals[1] > 0.0);
        assert!(vals[2] < 0.0);
        assert!((vals[3] - vals[4]).abs() / vals[3] < 1e-5);
    }
}

#[test]
fn index_integral_reports_quadrature_metadata() {
    let out = run(&[
        "index-integral",
        "--beta",
        "1",
        "--hbar",
        "1",
        "--norm",
        "paper",
        "--tol",
        "1e-8",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["normalization"], "paper");
    assert!(json["value"].as_f64().unwrap() > 0.0);
    assert!(json["error_estimate"].as_f64().unwrap() <= 1e-8);
    assert!(json["evaluations"].as_u64().unwrap() >= 15);
    // Canonical normalization halves the value.
    let canonical = run(&["index-integral", "--norm", "canonical"]);
    let cj: serde_json::Value = serde_json::from_str(&stdout(&canonical)).unwrap();
    let ratio = json["value"].as_f64().unwrap() / cj["value"].as_f64().unwrap();
    assert!((ratio - 2.0).abs() < 1e-6);
}

#[test]
fn genus_evaluates_manifold_data_from_json_file() {
    let dir = std::env::temp_dir().join(format!("thermogenus-manifold-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cp2.json");
    std::fs::write(
        &path,
        r#"{
            "name": "CP2",
            "l": 1,
            "characteristic_numbers": {"p1": 3},
            "chern_character_numbers": {"0": 1}
        }"#,
    )
    .unwrap();

    let out = run(&["genus", "--kind", "L", "--manifold", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["evaluation"]["name"], "CP2");
    assert_eq!(json["evaluation"]["genus"], "1");
    assert_eq!(json["evaluation"]["signature_index"], "2");
    assert_eq!(json["polynomials"][1]["terms"]["p1"], "1/3");

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_flags_exit_with_code_two() {
    // Unknown genus kind: our validation path.
    let out = run(&["series", "--kind", "NOPE", "--order", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed grid.
    let out = run(&["thermo", "--x-grid", "1:2"]);
    assert_eq!(out.status.code(), Some(2));
    // Clap-level parse failure.
    let out = run(&["series", "--order", "not-a-number"]);
    assert_eq!(out.status.code(), Some(2));
    // Too few roots for the requested degree.
    let out = run(&["genus", "--kind", "L", "--degree", "3", "--roots", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_and_directory_variable_route_files() {
    let dir = std::env::temp_dir().join(format!("thermogenus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let absolute = dir.join("direct.csv");
    let out = run(&[
        "thermo",
        "--x-grid",
        "1:2:3",
        "--output",
        absolute.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&absolute).unwrap();
    assert!(written.starts_with("x,Z,U,betaU\n"));

    let routed = Command::new(env!("CARGO_BIN_EXE_thermogenus"))
        .args(["thermo", "--x-grid", "1:2:3", "--output", "routed.csv"])
        .env("THERMOGENUS_OUTPUT_DIR", &dir)
        .output()
        .expect("binary runs");
    assert!(routed.status.success());
    let via_env = std::fs::read_to_string(dir.join("routed.csv")).unwrap();
    assert_eq!(via_env, written);

    std::fs::remove_dir_all(&dir).ok();
}
