mod common;

use std::fs;
use std::process::Command;

use common::network_path;
use mads_reconfig::filter::is_pareto_consistent;
use mads_reconfig::harness::{
    load_network, network_to_json, parse_network, read_frontier, HarnessError, TRACE_HEADER,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mads-reconfig"))
}

#[test]
fn bundled_fixtures_load() {
    let two = load_network(network_path("twobus.json")).unwrap();
    assert_eq!((two.buses().len(), two.branches().len(), two.switch_count()), (2, 1, 0));
    let f12 = load_network(network_path("feeder12.json")).unwrap();
    assert_eq!(f12.switch_count(), 12);
    assert_eq!(load_network(network_path("feeder33.json")).unwrap().switch_count(), 37);
    assert_eq!(load_network(network_path("fourbus.json")).unwrap().buses().len(), 4);
}

#[test]
fn bundled_files_are_canonical() {
    for name in ["twobus.json", "fourbus.json", "feeder12.json", "feeder33.json"] {
        let net = load_network(network_path(name)).unwrap();
        let text = network_to_json(&net);
        assert_eq!(parse_network(&text).unwrap(), net, "{name}");
    }
}

#[test]
fn missing_and_duplicate_inputs_are_named() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        load_network(dir.path().join("nope.json")),
        Err(HarnessError::MissingFile(_))
    ));
    let text = fs::read_to_string(network_path("twobus.json"))
        .unwrap()
        .replace("\"id\": 2,\n      \"p_kw\"", "\"id\": 1,\n      \"p_kw\"");
    let path = dir.path().join("dup.json");
    fs::write(&path, text).unwrap();
    let err = load_network(&path).unwrap_err();
    assert_eq!(err.to_string(), "invalid network: duplicate bus id 1");
}

#[test]
fn run_writes_trace_and_frontier() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let frontier = dir.path().join("f.json");
    let out = bin()
        .args(["run", "--network"])
        .arg(network_path("feeder12.json"))
        .args(["--algo", "mads", "--budget", "500", "--seed", "7", "--trace"])
        .arg(&trace)
        .arg("--frontier")
        .arg(&frontier)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("algorithm=mads evaluations="), "{stdout}");

    let csv = fs::read_to_string(&trace).unwrap();
    assert_eq!(csv.lines().next().unwrap(), TRACE_HEADER.join(","));
    let parsed = read_frontier(&frontier).unwrap();
    let points = parsed.points().unwrap();
    assert!(!points.is_empty());
    assert!(is_pareto_consistent(points.iter().map(|(_, m)| m)));
    assert!(parsed.entries.windows(2).all(|w| w[0].f_kw.0 <= w[1].f_kw.0));
}

#[test]
fn missing_network_exits_2() {
    let out = bin()
        .args(["run", "--network", "/definitely/missing.json", "--algo", "mads"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("file not found"));
}

#[test]
fn bad_arguments_exit_2() {
    let net = network_path("feeder12.json");
    for args in [
        vec!["run", "--network", net.to_str().unwrap(), "--algo", "annealing"],
        vec!["run", "--network", net.to_str().unwrap(), "--budget", "0"],
        vec!["compare", "--network", net.to_str().unwrap(), "--budget", "0", "--seeds", "1"],
        vec!["enumerate", "--network", network_path("feeder33.json").to_str().unwrap()],
        vec!["frobnicate"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn enumerate_and_compare_run() {
    let dir = tempfile::tempdir().unwrap();
    let frontier = dir.path().join("exact.json");
    let out = bin()
        .arg("enumerate")
        .arg("--network")
        .arg(network_path("feeder12.json"))
        .arg("--frontier")
        .arg(&frontier)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("evaluations=4096"));
    let points = read_frontier(&frontier).unwrap().points().unwrap();
    assert!(is_pareto_consistent(points.iter().map(|(_, m)| m)));

    let report = dir.path().join("report.json");
    let out = bin()
        .arg("compare")
        .arg("--network")
        .arg(network_path("feeder12.json"))
        .args(["--budget", "64", "--seeds", "1,2,3", "--poll-order", "random", "--report"])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["seeds"].as_array().unwrap().len(), 3);
    assert_eq!(json["budget"], 64);
}
