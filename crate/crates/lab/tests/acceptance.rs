//! One line per acceptance criterion.

use std::process::Command;

use adslab::suite::CRITERIA;
use adslab::{certify, ExperimentConfig, Kind, Status};

fn run_suite_binary(out: &std::path::Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_adslab"))
        .args(["suite", "--json", "--out"])
        .arg(out)
        .output()
        .expect("binary runs");
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    std::fs::read(out.join("suite.json")).expect("certificate written")
}

fn main() {
    let cfg = ExperimentConfig::for_kind(Kind::Suite);
    let (cert, _) = certify(&cfg);
    assert!(cert.error.is_none(), "suite error: {:?}", cert.error);

    let mut failed = Vec::new();
    for (c, title) in CRITERIA.iter().take(9) {
        let mine: Vec<_> = cert.verdicts.iter().filter(|v| v.criterion == Some(*c)).collect();
        let bad: Vec<_> = mine.iter().filter(|v| !v.pass).collect();
        let ok = !mine.is_empty() && bad.is_empty();
        println!("{} criterion {c:>2}: {title} ({} checks)", if ok { "PASS" } else { "FAIL" }, mine.len());
        for v in bad {
            println!("    {}", v.line());
        }
        if !ok {
            failed.push(*c);
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let a = run_suite_binary(dir.path());
    let b = run_suite_binary(dir.path());
    let same = a == b;
    println!("{} criterion 10: {} ({} bytes)", if same { "PASS" } else { "FAIL" }, CRITERIA[9].1, a.len());
    if !same {
        failed.push(10);
    }

    if cert.status != Status::Pass || !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", CRITERIA.len());
}
