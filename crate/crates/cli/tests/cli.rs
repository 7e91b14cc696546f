use std::io::Write;
use std::process::{Command, Output};

fn puo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_puo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Header plus rows, split on commas.
fn csv(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(out);
    let mut lines = text
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>());
    let header = lines.next().expect("header row");
    (header, lines.collect())
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn report_vacuum_values() {
    let out = puo(&[
        "report", "--Omega", "2", "--omega", "1", "--J", "0", "--j", "0", "--t", "0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let (header, rows) = csv(&out);
    assert_eq!(header[0], "source");
    let sources: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(sources, ["closed", "numeric", "abs_dev", "rel_dev"]);
    for (name, want) in [
        ("var_z", 0.25),
        ("var_pz", 3.0),
        ("uncertainty_product", 0.75),
        ("energy", 0.5),
    ] {
        for v in &column(&header, &rows, name)[..2] {
            assert!((v - want).abs() <= 1e-9 * want, "{name}: {v}");
        }
    }
}

#[test]
fn report_mean_z_in_both_rows() {
    let out = puo(&[
        "report",
        "--Omega",
        "2",
        "--omega",
        "1",
        "--J",
        "0.5",
        "--j",
        "0.5",
        "--Gamma0",
        "1.5707963",
        "--gamma0",
        "1.5707963",
        "--t",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv(&out);
    for v in &column(&header, &rows, "mean_z")[..2] {
        assert!((v - 0.985_599).abs() < 1e-6, "{v}");
    }
}

#[test]
fn aliases_match_primary_flags() {
    let a = puo(&["report", "--Omega", "3", "--omega", "1", "--J", "1"]);
    let b = puo(&["report", "--big-freq", "3", "--small-freq", "1", "--J", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn degenerate_frequencies_are_usage_errors() {
    for args in [
        ["report", "--Omega", "1", "--omega", "2"],
        ["report", "--Omega", "1", "--omega", "1"],
        ["report", "--Omega", "1", "--omega", "-1"],
    ] {
        let out = puo(&args);
        assert_eq!(out.status.code(), Some(2));
        assert!(stderr(&out).contains("requires Omega > omega > 0"), "{}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn other_usage_errors() {
    let cases: &[&[&str]] = &[
        &["report", "--omega", "1"],
        &["report", "--Omega", "2", "--omega", "1", "--precision", "5"],
        &["report", "--Omega", "2", "--omega", "1", "--precision", "18"],
        &["report", "--Omega", "2", "--omega", "1", "--truncation", "zero"],
        &["report", "--Omega", "2", "--omega", "1", "--J", "-1"],
        &["report", "--Omega", "2", "--omega", "1", "--format", "xml"],
        &["evolve", "--Omega", "2", "--omega", "1", "--t1", "1", "--dt", "0"],
        &[
            "evolve", "--Omega", "2", "--omega", "1", "--t0", "1", "--t1", "1", "--dt", "0.1",
        ],
        &["scan", "--from", "0.5", "--to", "10", "--steps", "5"],
        &["scan", "--from", "2", "--to", "10", "--steps", "1"],
        &["validate", "--grid", "medium"],
        &[
            "report",
            "--Omega",
            "2",
            "--omega",
            "1",
            "--config",
            "/nonexistent/puo.json",
        ],
        &["frobnicate"],
    ];
    for args in cases {
        let out = puo(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn too_small_fixed_truncation_is_a_numerical_failure() {
    let out = puo(&[
        "report",
        "--Omega",
        "2",
        "--omega",
        "1",
        "--J",
        "4",
        "--truncation",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stderr(&out).is_empty());
}

#[test]
fn evolve_tracks_classical_solution() {
    let out = puo(&[
        "evolve",
        "--Omega",
        "2",
        "--omega",
        "1",
        "--J",
        "0.5",
        "--j",
        "0.5",
        "--t0",
        "0",
        "--t1",
        "10",
        "--dt",
        "0.01",
        "--precision",
        "17",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let (header, rows) = csv(&out);
    assert_eq!(
        header,
        [
            "t",
            "mean_z_closed",
            "mean_z_numeric",
            "z_classical",
            "var_z",
            "var_pz",
            "product",
            "constraint_residual"
        ]
    );
    assert_eq!(rows.len(), 1001);
    let t = column(&header, &rows, "t");
    assert_eq!((t[0], t[1000]), (0.0, 10.0));
    let closed = column(&header, &rows, "mean_z_closed");
    let classical = column(&header, &rows, "z_classical");
    let numeric = column(&header, &rows, "mean_z_numeric");
    let worst = closed
        .iter()
        .zip(&classical)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst}");
    let worst = closed
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
    let var_z = column(&header, &rows, "var_z");
    let spread = var_z.iter().copied().fold(f64::MIN, f64::max) - var_z.iter().copied().fold(f64::MAX, f64::min);
    assert!(spread <= 1e-8, "{spread}");
    assert!(column(&header, &rows, "constraint_residual").iter().all(|r| *r <= 1e-9));
}

#[test]
fn evolve_vacuum_is_static() {
    let out = puo(&["evolve", "--Omega", "3", "--omega", "1", "--t1", "2", "--dt", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv(&out);
    assert_eq!(rows.len(), 9);
    for name in ["mean_z_closed", "mean_z_numeric", "z_classical"] {
        assert!(column(&header, &rows, name).iter().all(|v| *v == 0.0), "{name}");
    }
    let var_pz = column(&header, &rows, "var_pz");
    assert!(var_pz.iter().all(|v| *v == var_pz[0]));
}

#[test]
fn scan_rows() {
    let out = puo(&[
        "scan",
        "--param",
        "ratio",
        "--from",
        "2",
        "--to",
        "100",
        "--steps",
        "3",
        "--spacing",
        "linear",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv(&out);
    assert_eq!(header, ["ratio", "exact", "leading", "gap"]);
    assert_eq!(column(&header, &rows, "ratio"), [2.0, 51.0, 100.0]);
    let exact = column(&header, &rows, "exact");
    assert_eq!(exact[0], 0.75);
    assert!((exact[2] - 0.252_550_8).abs() < 1e-6);
    assert_eq!(column(&header, &rows, "leading")[2], 0.2525);
}

#[test]
fn scan_approaches_quarter_from_above() {
    let out = puo(&["scan", "--from", "1.5", "--to", "1e6", "--steps", "40"]);
    let (header, rows) = csv(&out);
    let exact = column(&header, &rows, "exact");
    assert!(exact.windows(2).all(|w| w[1] < w[0]));
    assert!(exact.iter().all(|&v| v > 0.25));
    assert!(exact[39] - 0.25 < 1e-6);
}

#[test]
fn json_rows_have_fixed_keys() {
    let out = puo(&["report", "--Omega", "2", "--omega", "1", "--format", "json"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys[0], "source");
        assert_eq!(
            keys[1..],
            [
                "mean_z",
                "mean_q",
                "mean_pz",
                "mean_zdot",
                "mean_z_sq",
                "mean_pz_sq",
                "var_z",
                "var_pz",
                "uncertainty_product",
                "energy",
                "constraint_residual"
            ]
        );
    }
}

#[test]
fn precision_controls_digits() {
    let out = puo(&["scan", "--from", "3", "--to", "7", "--steps", "2", "--precision", "6"]);
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    // ratio 3: exact (9 + 1 - 3) / 16 = 0.4375, leading (1 + 1/3) / 4
    assert_eq!(row[1], "0.4375");
    assert_eq!(row[2], "0.333333");
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("puo-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"Omega": 2, "omega": 1, "J": 0.5, "format": "json", "precision": 8}}"#
    )
    .unwrap();
    drop(f);
    let path = path.to_str().unwrap();

    let from_file = puo(&["report", "--config", path]);
    let from_flags = puo(&[
        "report",
        "--Omega",
        "2",
        "--omega",
        "1",
        "--J",
        "0.5",
        "--format",
        "json",
        "--precision",
        "8",
    ]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, from_flags.stdout);

    let overridden = puo(&["report", "--config", path, "--Omega", "3", "--format", "csv"]);
    let reference = puo(&[
        "report",
        "--Omega",
        "3",
        "--omega",
        "1",
        "--J",
        "0.5",
        "--precision",
        "8",
    ]);
    assert_eq!(overridden.stdout, reference.stdout);

    std::fs::write(dir.join("bad.json"), r#"{"Omega": 2, "omgea": 1}"#).unwrap();
    let bad = puo(&["report", "--config", dir.join("bad.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validate_small_grid_passes() {
    let out = puo(&["validate", "--grid", "small"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    for suite in ["fock", "gcs", "modes", "puo", "classical"] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{suite}: "))),
            "{suite} missing"
        );
    }
    assert!(text.ends_with("result: all 5 suites passed\n"));
}

#[test]
fn validate_csv_rows_per_check() {
    let out = puo(&["validate", "--grid", "small", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,invariant,status,cases,failures,worst,bound"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 20);
    assert!(rows.iter().all(|r| r.contains(",pass,")));
    assert!(rows
        .iter()
        .any(|r| r.starts_with("fock,\"[x, p] = i on leading block\",pass,")));
}

#[test]
fn injected_misprint_is_caught() {
    let out = puo(&["validate", "--grid", "small", "--inject-inverse-misprint"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("modes: inverse map symplectic"), "{err}");
    assert!(err.contains("modes: round trip identity"), "{err}");
    assert!(stdout(&out).contains("result: FAILED"));
}

#[test]
fn repeated_runs_are_identical() {
    let args = [
        "evolve", "--Omega", "5", "--omega", "2", "--J", "1", "--j", "2", "--t1", "3", "--dt", "0.1", "--format",
        "json",
    ];
    assert_eq!(puo(&args).stdout, puo(&args).stdout);
}
