use std::path::Path;
use std::process::{Command, Output};

fn adslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adslab")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn malformed_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "genus = \"two\"\n");
    let o = adslab(&["run", "--config", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let unknown = write(dir.path(), "unknown.toml", "kind = \"hull\"\ncolour = 3\n");
    assert_eq!(adslab(&["run", "--config", &unknown]).status.code(), Some(1));
    let invalid = write(dir.path(), "invalid.toml", "kind = \"hull\"\ngenus = 1\n");
    assert_eq!(adslab(&["run", "--config", &invalid]).status.code(), Some(1));
    assert_eq!(adslab(&["run", "--config", "/nonexistent/x.toml"]).status.code(), Some(1));
    assert_eq!(adslab(&["hull", "--no-such-flag"]).status.code(), Some(1));
}

#[test]
fn describe_kinds() {
    let o = adslab(&["describe", "rigidity"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("infinitesimal rigidity"));
    let o = adslab(&["describe", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected one of"));
}

#[test]
fn ambiguous_rank_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "amb.toml",
        "kind = \"rigidity\"\n[tolerances]\nrank_relative = 0.02\n[output]\noff = false\n",
    );
    let out = dir.path().join("out");
    let o = adslab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let cert: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("rigidity.json")).unwrap()).unwrap();
    assert_eq!(cert["status"], "rank_ambiguous");
    assert!(cert["error"].as_str().unwrap().contains("ambiguous"));
}

#[test]
fn failing_verdict_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = adslab(&["gc", "--tol-alg", "1e-30", "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn hull_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = adslab(&["hull", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: Pass"));

    let cert: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("hull.json")).unwrap()).unwrap();
    assert_eq!(cert["kind"], "hull");
    assert_eq!(cert["seed"], 3);
    assert_eq!(cert["status"], "pass");

    let mut rdr = csv::Reader::from_path(out.join("hull.csv")).unwrap();
    let rows = rdr.records().count();
    assert_eq!(rows, cert["verdicts"].as_array().unwrap().len());

    let offs: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "off"))
        .collect();
    assert_eq!(offs.len(), 2);
    for e in offs {
        let text = std::fs::read_to_string(e.path()).unwrap();
        assert!(text.starts_with("OFF"));
    }
}

#[test]
fn json_flag_restricts_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = adslab(&["rep", "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names, ["rep.json"]);
}

#[test]
fn schemas_are_json() {
    for which in ["config", "certificate"] {
        let o = adslab(&["schema", which]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["properties"].is_object(), "{which}");
    }
    assert_eq!(adslab(&["schema", "other"]).status.code(), Some(1));
}
