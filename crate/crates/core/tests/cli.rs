use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_layerfmm"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("layerfmm-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs")
}

#[test]
fn density_csv() {
    let out = bin()
        .args(["density", "--medium"])
        .arg(configs().join("two_layer_eps10.json"))
        .args(["--ell", "0", "--ellprime", "0", "--k-grid", "0:50:512"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "k,re_sigma11,im_sigma11");
    assert_eq!(lines.len(), 513);
    let last: Vec<f64> = lines[512].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 50.0).abs() < 1e-12 && (last[1] + 9.0 / 11.0).abs() < 1e-15);
}

#[test]
fn green_prints_value_and_error() {
    let out = bin()
        .args(["green", "--medium"])
        .arg(configs().join("two_layer_eps10.json"))
        .args(["--component", "11", "--source", "0,0,1", "--target", "0.3,0.2,0.5", "--tol", "1e-10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    let v: f64 = s.lines().next().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    let expect = -9.0 / 11.0 / (4.0 * std::f64::consts::PI * (0.09f64 + 0.04 + 2.25).sqrt());
    assert!((v - expect).abs() < 1e-10 * expect.abs());
    assert!(s.contains("error_estimate"));
}

#[test]
fn me_reports_bound_rows() {
    let d = scratch("me");
    std::fs::write(d.join("c.json"), "[[1,0.1,0,1.2],[-0.5,0,0.2,0.9],{\"q\":0.3,\"position\":[0,-0.2,1.0]}]").unwrap();
    std::fs::write(d.join("t.json"), "[[0.5,0.5,2.5],[2,1,1.5],[-1,2,0.5]]").unwrap();
    let out = bin()
        .args(["me", "--medium"])
        .arg(configs().join("two_layer_eps10.json"))
        .arg("--charges")
        .arg(d.join("c.json"))
        .args(["--component", "11", "--center", "0,0,1", "--p", "12", "--targets"])
        .arg(d.join("t.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("target,expansion,oracle,abs_error,bound\n"));
    assert_eq!(s.lines().count(), 4);
}

#[test]
fn lab_run_writes_schema() {
    let d = scratch("lab");
    let csv = d.join("r.csv");
    let json = d.join("r.json");
    let out = bin()
        .args(["lab", "run", "--config"])
        .arg(configs().join("free_me.json"))
        .arg("--out")
        .arg(&csv)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert!(out.status.success());
    let s = std::fs::read_to_string(csv).unwrap();
    assert!(s.starts_with("schema=1\np,max_error,bound,ratio,rate_fit,rate_theory\n"));
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(j["pass"], true);
}

#[test]
fn lab_suite_and_errors() {
    let out = bin().args(["lab", "suite", "--kind", "cagniard"]).output().unwrap();
    assert!(out.status.success());
    let out = bin().args(["lab", "suite", "--kind", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let d = scratch("bad");
    std::fs::write(d.join("m.json"), r#"{"interfaces":[0,1],"a":[1,1,1],"b":[1,1,1]}"#).unwrap();
    let out = bin()
        .args(["density", "--medium"])
        .arg(d.join("m.json"))
        .args(["--ell", "0", "--ellprime", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
