use std::path::Path;
use std::process::{Command, Output};

fn doubling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doubling"))
        .args(args)
        .env_remove("DOUBLING_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn extremes_csv_has_eight_columns() {
    let o = doubling(&["extremes", "--c", "1/2", "--max-period", "13", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "c,max_period,period,word,average,is_singular,is_argmin,is_argmax"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 8));
    // Every primitive necklace of length <= 13 except the word "1".
    assert_eq!(rows.len(), 2 + 1 + 2 + 3 + 6 + 9 + 18 + 30 + 56 + 99 + 186 + 335 + 630 - 1);
    // The {1/3, 2/3} cycle averages log(sqrt 3 / 2).
    let two = rows.iter().find(|r| r[3] == "01").unwrap();
    let avg: f64 = two[4].parse().unwrap();
    assert!((avg - (3f64.sqrt() / 2.0).ln()).abs() < 1e-12);
    assert_eq!(two[7], "true");
    let fixed = rows.iter().find(|r| r[3] == "0").unwrap();
    assert_eq!((fixed[4], fixed[5]), ("-inf", "true"));
}

#[test]
fn spectrum_at_c_zero_is_routed_to_the_closed_form() {
    let o = doubling(&["spectrum", "--c", "0", "--alpha-grid", "-0.5"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("closed form") && err.contains("validate"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn domain_errors_exit_one() {
    let o = doubling(&["spectrum", "--c", "1/2", "--alpha-grid", "0.5", "--level", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("window"));
    let o = doubling(&["mcstar", "--c", "random", "--width", "64", "--horizon", "200"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["extremes", "--c", "1"],
        vec!["extremes", "--c", "-1/3"],
        vec!["extremes", "--c", "x"],
        vec!["extremes", "--c", "random"],
        vec!["extremes", "--c", "1/2", "--max-period", "40"],
        vec!["pressure", "--c", "1/2", "--delta", "3/4"],
        vec!["extremes"],
        vec!["no-such-command"],
    ] {
        let o = doubling(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_is_versioned_and_rationals_are_exact() {
    let o = doubling(&["pressure", "--c", "0.25", "--delta", "1/8", "--level", "6", "--t-grid", "0,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "doubling-spectrum/v1");
    assert_eq!(v["command"], "pressure");
    assert_eq!(v["c"]["num"], "1");
    assert_eq!(v["c"]["den"], "4");
    assert_eq!(v["delta"]["den"], "8");
    assert_eq!(v["samples"].as_array().unwrap().len(), 3);
    assert!(stdout(&o).starts_with("{\n  \"schema\""));
}

fn run_to(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doubling"))
        .args(args)
        .env("DOUBLING_OUTPUT_DIR", dir)
        .output()
        .unwrap()
}

#[test]
fn output_is_deterministic_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["polynomial", "--c", "random", "--x", "random", "--width", "256", "--n", "12"];
    let first = run_to(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert!(first.stdout.is_empty());
    let path = dir.path().join("polynomial.json");
    let a = std::fs::read(&path).unwrap();
    assert_eq!(run_to(dir.path(), &args).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a);
    // Only the final file remains; no temporaries.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let explicit = dir.path().join("mc.csv");
    let mc = ["montecarlo", "--samples", "4", "--horizon", "200", "--format", "csv", "--seed", "5"];
    let out = |p: &Path| {
        let mut a: Vec<&str> = mc.to_vec();
        a.extend(["--output", p.to_str().unwrap()]);
        assert_eq!(doubling(&a).status.code(), Some(0));
        std::fs::read_to_string(p).unwrap()
    };
    let one = out(&explicit);
    assert_eq!(out(&explicit), one);
    assert!(one.starts_with("sample,average\n"));
    assert_eq!(one.lines().count(), 5);
}

#[test]
fn seeds_change_random_parameters() {
    let run = |seed: &str| {
        stdout(&doubling(&[
            "polynomial", "--c", "random", "--x", "0.1", "--width", "128", "--n", "4", "--seed", seed,
        ]))
    };
    assert_ne!(run("1"), run("2"));
    assert_eq!(run("1"), run("1"));
}

#[test]
fn help_documents_csv_columns() {
    let o = doubling(&["pressure", "--help"]);
    assert!(stdout(&o).contains("CSV columns: t,pLower,pUpper"));
}

#[test]
fn validate_passes() {
    let o = doubling(&["validate", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("true")));
}

#[test]
fn cover_check_reports_multi_cover() {
    let o = doubling(&[
        "cover-check", "--max-sum", "6", "--multi-i", "2,4,8", "--multi-j", "2,4,2", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("multi_cover")).unwrap();
    assert!(row.ends_with(",13500,true"), "{row}");
    let bad = doubling(&["cover-check", "--max-sum", "4", "--multi-i", "3,4", "--multi-j", "3,3"]);
    assert_eq!(bad.status.code(), Some(1));
}
