use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn qnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnc"))
        .args(args)
        .env_remove("QNC_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ddim_golden() {
    let o = qnc(&["ddim", "--d", "2", "--N", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "16\n");
    let o = qnc(&["ddim", "--d", "4", "--N", "4", "--check"]);
    assert_eq!(stdout(&o), "49\nbruteforce 49 match\n");
    let o = qnc(&["ddim", "--d", "3", "--N", "6", "--format", "json"]);
    assert_eq!(stdout(&o), "{\n  \"D_Lambda\": \"153\",\n  \"N\": 6,\n  \"d\": 3\n}\n");
}

#[test]
fn exit_codes() {
    assert_eq!(qnc(&["ddim", "--d", "2", "--N", "2"]).status.code(), Some(2));
    assert_eq!(qnc(&["ddim", "--d", "2"]).status.code(), Some(1));
    assert_eq!(qnc(&["bogus"]).status.code(), Some(1));
    assert_eq!(qnc(&["--help"]).status.code(), Some(0));
    assert_eq!(qnc(&["ddim", "--d", "20", "--N", "9", "--check"]).status.code(), Some(2));
    assert_eq!(qnc(&["entropy", &fixture("overlap.json")]).status.code(), Some(2));
    assert_eq!(qnc(&["entropy", &fixture("ensemble.json")]).status.code(), Some(2));
    assert_eq!(qnc(&["search", "--d-min", "5", "--d-max", "4"]).status.code(), Some(2));
}

#[test]
fn entropy_golden() {
    let o = qnc(&["entropy", &fixture("bell.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "P1        0.5\nP2        0.5\nS(rho)    1.79248125036\nH(X)      1\nS(rho1)   0\nS(rho2)   1.58496250072\nresidual  0\n"
    );
    let csv = stdout(&qnc(&["entropy", &fixture("bell.json"), "--format", "csv"]));
    assert!(csv.starts_with("field,value\n"));
    assert!(csv.contains("s_total,1.79248125036\n"));
}

#[test]
fn search_csv_golden() {
    let o = qnc(&["search", "--d-max", "2", "--N-max", "9", "--q-max", "4", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "d,N,q,M,D_Lambda\n2,3,2,2,4\n2,5,2,4,16\n2,5,4,2,16\n2,7,2,6,64\n2,7,4,3,64\n2,9,2,8,256\n2,9,4,4,256\n"
    );
    let json: serde_json::Value = serde_json::from_slice(&qnc(&["search", "--format", "json"]).stdout).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 52);
    assert_eq!(rows[0]["D_Lambda"], "4");
}

#[test]
fn verify_table1_reports_extras() {
    let o = qnc(&["verify-table1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("16/16 rows confirmed"));
    assert!(text.contains("d=2   N=9   q=16  M=2   D_Lambda=256"));
    let csv = stdout(&qnc(&["verify-table1", "--format", "csv"]));
    assert_eq!(csv.lines().filter(|l| l.ends_with(",confirmed")).count(), 16);
    assert!(csv.contains("2,9,16,2,256,extra"));
}

#[test]
fn fidelity_with_oracle() {
    let o = qnc(&["fidelity", &fixture("ensemble.json"), "--N", "4", "--oracle", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = &v["targets"][0];
    assert_eq!(t["D_Lambda"], "21");
    let (f, b) = (t["fidelity"].as_f64().unwrap(), t["bruteforce"].as_f64().unwrap());
    assert!((f - b).abs() < 1e-11);
    assert!(t["best_equal_dim"].as_f64().unwrap() >= f);
    assert_eq!(qnc(&["fidelity", &fixture("bell.json"), "--N", "7", "--oracle"]).status.code(), Some(2));
}

#[test]
fn pipeline_report() {
    let args = ["pipeline", &fixture("bell.json"), "--N", "64", "--k", "8", "--q", "2", "--seed", "7", "--format", "json"];
    let o = qnc(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n1"].as_u64().unwrap() + v["n2"].as_u64().unwrap(), 64);
    assert!(v["classical_bits_per_signal"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert_eq!(v["s1"].as_f64().unwrap(), 0.0);
    assert_eq!(v["round_trip_ok"], true);
    assert_eq!(v["subspaces"][0]["sizing"], "degenerate");
    assert_eq!(o.stdout, qnc(&args).stdout);
}

#[test]
fn gap_on_overlapping_pair() {
    let o = qnc(&["gap", &fixture("overlap.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["gap"].as_f64().unwrap() > 1e-3);
    assert_eq!(v["orthogonal"], false);
}

#[test]
fn reports_persist_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let o = qnc(&["search", "--d-max", "2", "--N-max", "5", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);

    let o = Command::new(env!("CARGO_BIN_EXE_qnc"))
        .args(["entropy", &fixture("bell.json")])
        .env("QNC_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let saved: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("entropy.json")).unwrap()).unwrap();
    assert_eq!(saved["h_x"], 1.0);

    let o = qnc(&["ddim", "--d", "2", "--N", "3", "--output", "/nonexistent-dir/x.json"]);
    assert_eq!(o.status.code(), Some(2));
}
