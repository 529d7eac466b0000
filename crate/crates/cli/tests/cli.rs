use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use arithdeg_cli::bundled::source_dir;
use arithdeg_cli::report::{Body, ReportDocument, Status};

fn arithdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithdeg"))
        .args(args)
        .env_remove("ARITHDEG_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn copy_suite(dir: &Path) {
    for entry in fs::read_dir(source_dir()).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
}

const SMALL: &str = r#"
version = 1
[endomorphism]
torus = { matrix = [[2, 1], [1, 1]] }
[estimator]
iterations = 200
[[orbit]]
name = "p"
torus_point = [2, 3]
tolerance = 1e-3
expect = 2.618033988749895
"#;

#[test]
fn verify_passes_and_lists() {
    let o = arithdeg(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));

    let l = arithdeg(&["verify", "--list"]);
    assert_eq!(l.status.code(), Some(0));
    let names: Vec<String> = stdout(&l).lines().map(str::to_string).collect();
    assert!(names.contains(&"fibonacci-torus".to_string()));
    assert!(!stdout(&l).contains("PASS"));
}

#[test]
fn usage_and_schema_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "version = 1\n[endomorphism]\ntorus = { matrix = [[2]] }\nbogus = 1\n");
    let o = arithdeg(&["degrees", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));

    let missing = dir.path().join("nope.toml");
    assert_eq!(arithdeg(&["degrees", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(arithdeg(&["verify", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(arithdeg(&["factor", "0"]).status.code(), Some(2));
    assert_eq!(arithdeg(&["--tol", "-1", "factor", "t"]).status.code(), Some(2));

    let no_orbits = write(dir.path(), "d.toml", "version = 1\n[endomorphism]\ntorus = { poly = \"t^2 - 3t + 1\" }\n");
    assert_eq!(arithdeg(&["degrees", &no_orbits]).status.code(), Some(0));
    assert_eq!(arithdeg(&["orbit", &no_orbits]).status.code(), Some(2));
}

#[test]
fn failing_orbit_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.toml", SMALL);
    assert_eq!(arithdeg(&["orbit", &ok]).status.code(), Some(0));
    let wrong = write(dir.path(), "wrong.toml", &SMALL.replace("2.618033988749895", "2"));
    let o = arithdeg(&["orbit", &wrong]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn seed_from_env_and_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_arithdeg"));
        c.env_remove("ARITHDEG_SEED");
        if let Some(v) = env {
            c.env("ARITHDEG_SEED", v);
        }
        c.arg("--json");
        if let Some(v) = flag {
            c.args(["--seed", v]);
        }
        let o = c.args(["factor", "t^4 - 1"]).output().unwrap();
        ReportDocument::from_json(&stdout(&o)).unwrap().seed
    };
    assert_eq!(run(None, None), 42);
    assert_eq!(run(Some("7"), None), 7);
    assert_eq!(run(Some("7"), Some("9")), 9);
}

#[test]
fn json_round_trips() {
    let o = arithdeg(&["--json", "verify"]);
    let text = stdout(&o);
    let doc = ReportDocument::from_json(&text).unwrap();
    assert_eq!(doc.to_json(), text);
    match doc.body {
        Body::Verify(v) => assert_eq!(v.status, Status::Pass),
        other => panic!("unexpected body {other:?}"),
    }
    let again = arithdeg(&["--json", "verify"]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn factor_output() {
    let o = arithdeg(&["--json", "factor", "-1,0,0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let Body::Factor(r) = ReportDocument::from_json(&stdout(&o)).unwrap().body else {
        panic!("factor body expected");
    };
    assert_eq!(r.factors.len(), 3);
    assert!(r.factors.iter().all(|f| f.cyclotomic && f.multiplicity == 1));
}

#[test]
fn corrupted_golden_reports_diff() {
    let dir = tempfile::tempdir().unwrap();
    copy_suite(dir.path());
    let g = dir.path().join("degrees-golden.golden.json");
    let text = fs::read_to_string(&g).unwrap();
    let corrupted = text.replacen("2.618033989", "2.618033999", 1);
    assert_ne!(corrupted, text);
    fs::write(&g, corrupted).unwrap();
    let o = arithdeg(&["verify", "--scenarios", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL"));
    assert!(out.contains("--- golden\n+++ actual"), "{out}");
    assert!(out.contains("-  \"delta\": \"2.618033999\""), "{out}");
    assert!(out.contains("+  \"delta\": \"2.618033989\""), "{out}");
}

#[test]
fn bless_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    copy_suite(dir.path());
    for entry in fs::read_dir(dir.path()).unwrap() {
        let p = entry.unwrap().path();
        if p.to_str().unwrap().ends_with(".golden.json") {
            fs::remove_file(p).unwrap();
        }
    }
    let d = dir.path().to_str().unwrap();
    assert_eq!(arithdeg(&["verify", "--scenarios", d]).status.code(), Some(1));
    assert_eq!(arithdeg(&["verify", "--bless", "--scenarios", d]).status.code(), Some(0));
    let o = arithdeg(&["verify", "--scenarios", d]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for name in ["fibonacci-torus", "ec-doubling"] {
        let blessed = fs::read_to_string(dir.path().join(format!("{name}.golden.json"))).unwrap();
        let shipped = fs::read_to_string(source_dir().join(format!("{name}.golden.json"))).unwrap();
        assert_eq!(blessed, shipped);
    }
}

#[test]
fn dump_heights_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("csv");
    let o = arithdeg(&["--dump-heights", out.to_str().unwrap(), "orbit", &s]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out.join("small__p.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,h,log_h"));
    assert_eq!(lines.count(), 201);
}
