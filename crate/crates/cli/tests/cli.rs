use std::process::{Command, Output};

use serde_json::Value;

fn bcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn fan_check_on_built_pi() {
    let out = bcov(&["fan", "check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("110 rays, 1458 maximal cones"));
}

#[test]
fn fan_build_to_stdout_and_check_round_trip() {
    let out = bcov(&["fan", "build", "--out", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let fan = stdout_json(&out);
    assert_eq!(fan["rays"].as_array().unwrap().len(), 110);
    assert_eq!(fan["maximal_cones"].as_array().unwrap().len(), 1458);

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("pi.json");
    std::fs::write(&good, &out.stdout).unwrap();
    assert_eq!(
        bcov(&["fan", "check", good.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn corrupted_fan_is_rejected() {
    let out = bcov(&["fan", "build", "--out", "-"]);
    let mut fan = stdout_json(&out);
    fan["rays"].as_array_mut().unwrap().remove(7);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, fan.to_string()).unwrap();
    assert_eq!(
        bcov(&["fan", "check", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );

    // A cone dropped: the facet pairing breaks.
    let mut fan = stdout_json(&out);
    fan["maximal_cones"].as_array_mut().unwrap().pop();
    std::fs::write(&bad, fan.to_string()).unwrap();
    assert_eq!(
        bcov(&["fan", "check", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        bcov(&["fan", "check", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn missing_file_is_an_io_error() {
    let out = bcov(&["fan", "check", "/nonexistent/fan.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn invalid_order_is_rejected() {
    assert_eq!(bcov(&["series", "--order", "3"]).status.code(), Some(2));
    assert_eq!(
        bcov(&["chi", "holo", "--guard", "8"]).status.code(),
        Some(2)
    );
}

#[test]
fn chi_top_total() {
    let out = bcov(&["--json", "chi", "top"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["total"], 192);
}

#[test]
fn series_json() {
    let out = bcov(&["--json", "series", "--order", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["Q"][2], "180");
    assert_eq!(v["yukawa"][1], "729");
    assert_eq!(v["Ipp"][1][1], "180");
}

#[test]
fn gw_orders_agree() {
    let a = stdout_json(&bcov(&["--json", "gw", "--order", "6"]));
    let b = stdout_json(&bcov(&["--json", "gw", "--order", "10"]));
    assert_eq!(a["N1_0"], "-9/4");
    for d in 1..=4 {
        let k = d.to_string();
        assert_eq!(a["N1"][&k], b["N1"][&k]);
    }
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v["inputs"]["holo"]
        .as_object_mut()
        .unwrap()
        .remove("timing_ms");
    v
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bcov(&[
        "verify",
        "all",
        "--order",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["status"], "PASS");
    assert_eq!(report["phi"]["at_zero"], "-68");

    let serial = bcov(&[
        "--threads",
        "1",
        "verify",
        "all",
        "--order",
        "12",
        "--out",
        "-",
    ]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(strip_timing(stdout_json(&serial)), strip_timing(report));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"order": 6}"#).unwrap();
    let v = stdout_json(&bcov(&[
        "--json",
        "--config",
        cfg.to_str().unwrap(),
        "series",
    ]));
    assert_eq!(v["order"], 6);
    let v = stdout_json(&bcov(&[
        "--json",
        "--config",
        cfg.to_str().unwrap(),
        "series",
        "--order",
        "7",
    ]));
    assert_eq!(v["order"], 7);
}
