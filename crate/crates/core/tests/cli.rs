use std::process::{Command, Output};

fn cgreens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgreens"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value_at(csv: &str, t: &str) -> f64 {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{t},")))
        .unwrap_or_else(|| panic!("no row for t = {t}"))
        .parse()
        .unwrap()
}

#[test]
fn eval_tables() {
    let out = cgreens(&["eval", "--family", "conjugate2", "--alpha", "1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().any(|l| l == "0.5,0.5,0.25"));

    let out = cgreens(&[
        "eval",
        "--family",
        "lidstone4",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--n",
        "3",
    ]);
    let row = stdout(&out)
        .lines()
        .find(|l| l.starts_with("0.5,0.5,"))
        .unwrap()
        .to_string();
    let g: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((g - 1.0 / 48.0).abs() < 1e-15);
}

#[test]
fn eval_warns_below_threshold() {
    let out = cgreens(&[
        "eval",
        "--family",
        "rightfocal3",
        "--tau",
        "0.3",
        "--alpha",
        "0.9",
        "--beta",
        "0.1",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("threshold 0.3486784401"), "{err}");
}

#[test]
fn eval_is_deterministic() {
    let args = [
        "eval",
        "--family",
        "cantilever4",
        "--alpha",
        "0.5",
        "--beta",
        "0.7",
        "--n",
        "11",
    ];
    assert_eq!(cgreens(&args).stdout, cgreens(&args).stdout);
}

#[test]
fn solve_classical_and_three_point() {
    let out = cgreens(&[
        "solve",
        "--family",
        "conjugate2",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--h",
        "one",
        "--n",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((value_at(&text, "0.5") - 0.125).abs() < 1e-14);
    assert!(text.lines().last().unwrap().starts_with("# residual="));

    let out = cgreens(&[
        "solve",
        "--family",
        "threepoint",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--delta3p",
        "0",
        "--eta3p",
        "0.5",
        "--h",
        "one",
        "--n",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!((value_at(&stdout(&out), "0.5") - 0.125).abs() < 1e-14);
}

#[test]
fn solve_writes_to_file() {
    let path = std::env::temp_dir().join(format!("cgreens-solve-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let out = cgreens(&[
        "solve",
        "--family",
        "rightfocal2",
        "--h",
        "poly:1,0,1",
        "--n",
        "9",
        "--out",
        p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("t,x\n"));
}

#[test]
fn nonlinear_solves() {
    let out = cgreens(&[
        "solve",
        "--family",
        "conjugate2",
        "--nonlinear",
        "--lambda",
        "0.01",
        "--f",
        "x",
        "--n",
        "33",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = cgreens(&[
        "solve",
        "--family",
        "conjugate2",
        "--nonlinear",
        "--lambda",
        "1000",
        "--f",
        "onepluxsq",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("diverged"));
}

#[test]
fn verify_exit_codes() {
    let out = cgreens(&[
        "verify",
        "--family",
        "lidstone4",
        "--alpha",
        "0.5",
        "--beta",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out)
        .lines()
        .all(|l| l.split('\t').nth(1) == Some("pass")));

    let out = cgreens(&[
        "verify",
        "--family",
        "conjugate2",
        "--alpha",
        "1",
        "--beta",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = cgreens(&[
        "verify",
        "--family",
        "rightfocal3",
        "--tau",
        "0.4",
        "--alpha",
        "1",
        "--beta",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let positivity = text
        .lines()
        .find(|l| l.starts_with("positivity\t"))
        .unwrap();
    assert!(positivity.contains("\tfail\t"), "{positivity}");
}

#[test]
fn scan_tau() {
    let out = cgreens(&["scan", "--family", "rightfocal3", "--n", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // threshold 1/2: violation at tau = 0.4, none at tau = 0.6
    assert!(value_at(&text, "0.4") > 0.0);
    assert!(value_at(&text, "0.6") <= 1e-12);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(cgreens(&["eval"]).status.code(), Some(64));
    assert_eq!(cgreens(&["bogus"]).status.code(), Some(64));
    assert_eq!(
        cgreens(&["eval", "--family", "conjugate2", "--alpha", "0"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        cgreens(&["eval", "--family", "rightfocal3"]).status.code(),
        Some(64)
    );
    assert_eq!(
        cgreens(&["verify", "--family", "conjugate2", "--tol", "-1"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(cgreens(&["--help"]).status.code(), Some(0));
    assert_eq!(cgreens(&["--version"]).status.code(), Some(0));
}
