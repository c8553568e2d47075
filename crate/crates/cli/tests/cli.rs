use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_besselpoly"))
        .args(args)
        .env_remove("BESSELPOLY_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn range_rejection_exits_2() {
    let o = run(&["eval", "--n", "1", "--a", "0.1", "--z", "1+0i"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parameter range"));
    assert!(o.stdout.is_empty());
    for cmd in [
        vec!["scan-error", "--n", "1", "--a", "0.1", "--grid", "0:1:3"],
        vec!["scan-stokes", "--n", "1", "--a", "0.1"],
        vec!["trace-stokes", "--n", "1", "--a", "0.1", "--branch", "ah"],
        vec!["bounds", "--n", "1", "--a", "0.1", "--z", "3"],
    ] {
        assert_eq!(run(&cmd).status.code(), Some(2), "{cmd:?}");
    }
}

#[test]
fn numerical_failure_exits_3() {
    let o = run(&["eval", "--n", "20", "--a", "1.2", "--z", "0+0i"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn eval_reports_theta_and_omega() {
    let o = run(&["eval", "--n", "20", "--a", "1.2", "--z", "2+0i", "--method", "airy", "--S", "6", "--compare"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("z_re,z_im,theta_re,theta_im,omega"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(lines.next().is_none());
    assert!(row[4] < -6.0, "omega {}", row[4]);
}

#[test]
fn methods_agree() {
    let value = |m: &str| {
        let o = run(&["eval", "--n", "20", "--a", "1.2", "--z", "3", "--method", m]);
        let text = stdout(&o);
        let row = text.lines().nth(1).unwrap().to_string();
        row.split(',').nth(2).unwrap().parse::<f64>().unwrap()
    };
    let direct = value("direct");
    for m in ["airy", "lg"] {
        assert!(((value(m) - direct) / direct).abs() < 1e-7, "{m}");
    }
}

#[test]
fn empty_grid_is_header_only() {
    let o = run(&["scan-error", "--n", "20", "--a", "1.2", "--grid", "-10:10:0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "z_re,z_im,theta_re,theta_im,approx_re,approx_im,omega\n");
}

#[test]
fn scan_error_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        let path = dir.path().join(name);
        let o = run(&[
            "scan-error",
            "--n",
            "20",
            "--a",
            "1.2",
            "--grid",
            "-10:10:40",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let first = args("a.csv");
    assert_eq!(first, args("b.csv"));
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().count(), 41);
    let single = Command::new(env!("CARGO_BIN_EXE_besselpoly"))
        .args(["scan-error", "--n", "20", "--a", "1.2", "--grid", "-10:10:40"])
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&single), text);
}

#[test]
fn json_mirrors_csv_schema() {
    let o = run(&["scan-error", "--n", "20", "--a", "1.2", "--grid", "1:2:2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["z_re", "z_im", "theta_re", "theta_im", "approx_re", "approx_im", "omega"]);
}

#[test]
fn stokes_commands() {
    let o = run(&["trace-stokes", "--n", "20", "--a", "1.2", "--branch", "ah"]);
    let text = stdout(&o);
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[0] + 0.6431).abs() < 1e-3 && last[1].abs() < 1e-12);
    let o = run(&["scan-stokes", "--n", "20", "--a", "1.2", "--tau", "2:3:5"]);
    let text = stdout(&o);
    assert!(text.starts_with("tau,z_re,z_im,theta_re,theta_im,approx_re,approx_im,omega,cusp\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn coeffs_dump_lines() {
    let o = run(&["coeffs", "dump", "--S", "3"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "E 1 -3 : 0 , 5/96 , 1"));
    assert!(text.lines().all(|l| l.starts_with("E ") || l.starts_with("F ")));
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_besselpoly"))
        .args(["eval", "--n", "20", "--a", "1.2", "--z", "2", "--method", "direct"])
        .env("BESSELPOLY_PRECISION", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_besselpoly"))
        .args(["eval", "--n", "20", "--a", "1.2", "--z", "2", "--method", "direct"])
        .env("BESSELPOLY_PRECISION", "80")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
