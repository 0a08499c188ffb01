use std::process::{Command, Output};

fn bouncer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bouncer"))
        .args(args)
        .output()
        .expect("spawn bouncer")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn zero_drag_gives_airy_zeros() {
    let o = bouncer(&["spectrum", "--gamma", "0", "--branch", "up", "--levels", "1..3"]);
    assert_eq!(code(&o), 0);
    let e = column(&stdout(&o), "E_total");
    let zeros = [2.338107410459767, 4.087949444130971, 5.520559828095551];
    for (a, b) in e.iter().zip(zeros) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn route_difference_first_order() {
    let o = bouncer(&["spectrum", "--gamma", "0.01", "--branch", "up", "--route", "both", "--levels", "1"]);
    assert_eq!(code(&o), 0);
    let d = column(&stdout(&o), "delta_direct")[0];
    let expected = 0.01 * 16.0 / 15.0 * 2.338107410459767;
    assert!((d - expected).abs() < 1e-3 * expected, "{d} vs {expected}");
}

#[test]
fn exit_codes() {
    // missing branch for the quadratic law
    assert_eq!(code(&bouncer(&["spectrum", "--gamma", "0.01"])), 2);
    assert_eq!(code(&bouncer(&["spectrum", "--gamma", "0.01", "--branch", "up", "--model", "nope"])), 2);
    assert_eq!(code(&bouncer(&["spectrum", "--gamma", "0.01", "--branch", "up", "--m", "1"])), 2);
    assert_eq!(code(&bouncer(&["spectrum", "--gamma", "0.5", "--branch", "up", "--levels", "1..3"])), 3);
    // the linear second-order sum diverges
    assert_eq!(code(&bouncer(&["spectrum", "--alpha", "0.1", "--levels", "1"])), 4);
    assert_eq!(code(&bouncer(&["verify", "--quick", "--catalog", "printed"])), 5);
}

#[test]
fn linear_fixed_truncation_is_finite() {
    let o = bouncer(&["spectrum", "--alpha", "0.1", "--levels", "1..2", "--truncation", "fixed", "--basis-size", "40"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(column(&text, "shift1").iter().all(|s| *s == 0.0));
    assert!(column(&text, "shift2").iter().all(|s| s.is_finite()));
}

#[test]
fn out_file_gets_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec.csv");
    let o = bouncer(&[
        "spectrum", "--gamma", "0.01", "--branch", "down", "--levels", "1..2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let data = std::fs::read_to_string(&out).unwrap();
    assert!(data.starts_with("n,E0,shift1"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("spec.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["data_file"], out.display().to_string());
    assert!(meta["version"].is_string());
    assert!(meta["threads"].as_u64().unwrap() >= 1);
}

#[test]
fn estimate_recovers_drag() {
    let o = bouncer(&["estimate", "--law", "quadratic", "--v0", "1.3", "--xmax", "0.7"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("parameter,value,residual\ngamma,"));
    let g = column(&text, "value")[0];
    assert!(g > 0.0 && g < 1.0);
}

#[test]
fn classical_without_drag_returns_to_launch_height() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = bouncer(&["classical", "--alpha", "0", "--cycles", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let summary = stdout(&o);
    let apexes: Vec<f64> = summary
        .lines()
        .filter(|l| l.starts_with("apex"))
        .map(|l| l.rsplit("x=").next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(apexes.len(), 3);
    assert!(apexes.iter().all(|x| (x - 0.5).abs() < 1e-12));
}

#[test]
fn elements_table_is_symmetric() {
    let o = bouncer(&["elements", "--family", "z,z^2", "--basis-size", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v.is_null());
    let csv = stdout(&bouncer(&["elements", "--family", "z", "--basis-size", "3"]));
    let value = |n: &str, k: &str| -> f64 {
        csv.lines()
            .find(|l| l.split(',').nth(2) == Some(n) && l.split(',').nth(3) == Some(k))
            .unwrap()
            .rsplit(',')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(value("1", "3"), value("3", "1"));
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_bouncer"))
            .args(["spectrum", "--gamma", "0.02", "--branch", "up", "--route", "both", "--levels", "1..4"])
            .env("BOUNCER_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&run("zero")), 2);
}
