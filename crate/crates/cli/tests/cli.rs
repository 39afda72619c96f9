use std::process::{Command, Output};

use serde_json::Value;

fn skly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skly"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn derive_is_deterministic_and_certified() {
    let a = skly(&["derive", "--seed", "7"]);
    let b = skly(&["derive", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["geometry"]["order_certificate"]["threshold"], 200);
    assert_eq!(
        v["geometry"]["order_certificate"]["order_exceeds_threshold"],
        true
    );
    assert_eq!(
        v["geometry"]["basepoint"],
        serde_json::json!([1, 1_000_002, 0])
    );
    assert!(!v["geometry"]["g"].as_array().unwrap().is_empty());
}

#[test]
fn torsion_forcing_prime_exhausts_retries() {
    let o = skly(&["derive", "--prime", "103", "--order-threshold", "200"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("attempt 1:"), "{err}");
    assert!(
        err.contains("not above 200") || err.contains("singular"),
        "{err}"
    );
    assert!(err.contains("no accepted parameters"), "{err}");
}

#[test]
fn verify_single_suite() {
    let o = skly(&["verify", "--suite", "hs_RD", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["check"], "hs_RD");
    assert_eq!(reports[0]["pass"], true);
}

#[test]
fn full_verify_passes_and_formats_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("run.json");
    let o = skly(&[
        "verify",
        "--out",
        json_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("overall: pass"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let csv = stdout(&skly(&["verify", "--format", "csv"]));
    let md = stdout(&skly(&["verify", "--format", "md"]));
    let mut count = 0;
    for r in v["reports"].as_array().unwrap() {
        for row in r["rows"].as_array().unwrap() {
            let fmt = |x: &Value| x.as_i64().map(|n| n.to_string());
            let line_md = format!(
                "| {} | {} | {} |",
                row["name"].as_str().unwrap().replace('|', "\\|"),
                fmt(&row["expected"]).unwrap_or("-".into()),
                fmt(&row["got"]).unwrap_or("-".into())
            );
            assert!(md.contains(&line_md), "{line_md}");
            let tail_csv = format!(
                ",{},{},",
                fmt(&row["expected"]).unwrap_or_default(),
                fmt(&row["got"]).unwrap_or_default()
            );
            assert!(csv.lines().any(|l| l.contains(&tail_csv)));
            count += 1;
        }
    }
    assert_eq!(csv.lines().count(), count + 1);
}

#[test]
fn small_cap_marks_rows_skipped() {
    let o = skly(&[
        "verify",
        "--cap",
        "6",
        "--suite",
        "hilbert_S,degree_one",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("hilbert_S,dim S_9,55,,skipped"), "{out}");
    assert!(
        out.contains("degree_one,dim k<W(p)>_9,37,,skipped"),
        "{out}"
    );
    assert!(!out.contains(",fail"));
}

#[test]
fn hilbert_tables() {
    let o = skly(&[
        "hilbert",
        "--divisor",
        "base:0,offset:11",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: Vec<i64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![9, 25, 49]);
    let o = skly(&["hilbert", "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.contains("\n1,10,10,9,9,1,1,true\n"), "{out}");
    assert!(out.contains("\n2,28,28,"));
    assert!(out.contains("\n3,55,55,"));
}

#[test]
fn hilbert_rejects_bad_divisors() {
    let eight = (0..8)
        .map(|m| format!("base:0,offset:{}", 7 * m + 1))
        .collect::<Vec<_>>()
        .join(";");
    let o = skly(&["hilbert", "--divisor", &eight]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds 7"));
    let o = skly(&["hilbert", "--divisor", "base:12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("orbit-of"),
        "grammar reminder missing: {}",
        stderr(&o)
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--cap", "13"],
        vec!["verify", "--suite", "nonsense"],
        vec!["derive", "--params", "1,2"],
        vec!["derive", "--prime", "1000037"],
        vec!["derive", "--order-threshold", "0"],
        vec!["bogus"],
    ] {
        assert_eq!(skly(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "seed = 5\nparams = \"3,7,11\"\nsuite = [\"geometry\"]\n",
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let o = skly(&[
        "verify", "--config", path, "--seed", "6", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 6);
    assert_eq!(v["abc"], serde_json::json!([3, 7, 11]));
    assert_eq!(v["reports"].as_array().unwrap().len(), 1);
}
