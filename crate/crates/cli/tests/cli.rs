use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdanalysis")).args(args).output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn vec_of(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn documented_examples() {
    let out = run(&["residue", "--f", "1/(z-y)", "--y", "1", "--axis", "i2", "--rho", "0.5"]);
    assert!(out.status.success());
    assert!(close(&vec_of(&lines(&out)[0]["res"]), &[0.0, 0.0, 1.0, 0.0], 1e-8));

    let out = run(&["transform", "laplace", "--f", "step(t)", "--p", "2"]);
    assert!(out.status.success());
    assert!(close(&vec_of(&lines(&out)[0]["value"]), &[0.5, 0.0, 0.0, 0.0], 1e-9));

    let out = run(&["eval", "--expr", "exp(pi*i1)"]);
    assert!(close(&vec_of(&lines(&out)[0]["value"]), &[-1.0, 0.0, 0.0, 0.0], 1e-15));
}

#[test]
fn exit_codes_and_error_objects() {
    let out = run(&["eval", "--expr", "1+*2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "Usage");
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--expr", "z+1"]).status.code(), Some(2));
    assert_eq!(run(&["residue", "--f", "1/(z-w)", "--y", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--level", "4", "eval", "--expr", "1"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "--z", "1", "--rep", "nonsense"]).status.code(), Some(2));

    let out = run(&["zeta", "--z", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "PoleAtOne");
    assert_eq!(run(&["zeta", "--z", "3", "--rep", "hankel"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--expr", "1/0"]).status.code(), Some(1));
    assert!(run(&["--help"]).status.success());
}

#[test]
fn octonion_level_and_products() {
    let out = run(&["--level", "3", "eval", "--expr", "i5*i6"]);
    assert!(close(&vec_of(&lines(&out)[0]["value"]), &[0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0], 0.0));
    // left-to-right products
    let a = run(&["--level", "3", "eval", "--expr", "i1*i2*i4"]);
    let b = run(&["--level", "3", "eval", "--expr", "i1*(i2*i4)"]);
    let va = vec_of(&lines(&a)[0]["value"]);
    let vb = vec_of(&lines(&b)[0]["value"]);
    assert!(close(&va, &vb.iter().map(|x| -x).collect::<Vec<_>>(), 0.0));

    let out = run(&["eval", "--expr", "-2^2"]);
    assert_eq!(vec_of(&lines(&out)[0]["value"])[0], -4.0);
}

#[test]
fn series_outputs() {
    let out = run(&["eval", "--expr", "z*z", "--z", "i1;i2;2"]);
    let rows = lines(&out);
    assert_eq!(rows.len(), 3);
    assert!(close(&vec_of(&rows[2]["value"]), &[4.0, 0.0, 0.0, 0.0], 0.0));

    let out = run(&["scan", "--t-lo", "10", "--t-hi", "22", "--step", "0.25", "--out", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("t_bracket_lo,t_bracket_hi,refined_t,abs_zeta"));
    let first: Vec<f64> = rows.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[2] - 14.134725).abs() < 1e-6 && first[0] <= first[2] && first[2] <= first[1]);
    assert_eq!(rows.count(), 1);

    let out = run(&["invert", "--image", "1/(p-0.5)", "--t", "0.5;1", "--a", "1.5", "--axis", "i2"]);
    for row in lines(&out) {
        let t = row["t"].as_f64().unwrap();
        assert!((row["value"][0].as_f64().unwrap() - (0.5 * t).exp()).abs() < 1e-6);
    }
}

#[test]
fn tolerance_and_config_propagate() {
    let loose = run(&["--tol", "1e-2", "transform", "laplace", "--f", "1/(1+t^2)", "--p", "0.5"]);
    let tight = run(&["--tol", "1e-12", "transform", "laplace", "--f", "1/(1+t^2)", "--p", "0.5"]);
    let a = vec_of(&lines(&loose)[0]["value"]);
    let b = vec_of(&lines(&tight)[0]["value"]);
    // oracle: Ci(1/2)sin(1/2) - (Si(1/2) - pi/2)cos(1/2)
    let exact = 0.860_526_765_726_158_6;
    assert!(a != b && (a[0] - exact).abs() < 1e-2 && (b[0] - exact).abs() < 1e-9, "{a:?} {b:?}");

    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "level = 3\nout = csv").unwrap();
    let path = cfg.path().to_str().unwrap();
    let out = run(&["--config", path, "eval", "--expr", "i1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("value_0,"), "{text}");
    assert_eq!(text.lines().next().unwrap().split(',').count(), 8);
    // flags override the file
    let out = run(&["--config", path, "--out", "json", "--level", "2", "eval", "--expr", "i1"]);
    assert_eq!(vec_of(&lines(&out)[0]["value"]).len(), 4);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "colour = blue").unwrap();
    assert_eq!(run(&["--config", bad.path().to_str().unwrap(), "eval", "--expr", "1"]).status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_results() {
    let one = Command::new(env!("CARGO_BIN_EXE_cdanalysis"))
        .env("CDANALYSIS_THREADS", "1")
        .args(["scan", "--t-lo", "10", "--t-hi", "26", "--step", "0.25"])
        .output()
        .unwrap();
    let many = run(&["scan", "--t-lo", "10", "--t-hi", "26", "--step", "0.25"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_cdanalysis")).env("CDANALYSIS_THREADS", "zero").args(["eval", "--expr", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn remaining_subcommands() {
    let path = r#"[{"t":0,"coeffs":[1,0,0,0]},{"t":1,"coeffs":[0,0,1,0],"interp":"arc"},{"t":2,"coeffs":[-1,0,0,0],"interp":"arc"}]"#;
    let out = run(&["integral", "--f", "2*z", "--path", path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // ∫ 2z dz = z² between the endpoints
    assert!(close(&vec_of(&lines(&out)[0]["value"]), &[0.0, 0.0, 0.0, 0.0], 1e-8));

    let out = run(&["argn", "--f", "z^3", "--axis", "i3"]);
    let d = vec_of(&lines(&out)[0]["delta_arg"]);
    assert!(close(&d, &[0.0, 0.0, 0.0, 6.0 * std::f64::consts::PI], 1e-8));

    let out = run(&["extend", "--f", "1/(y^2+1)", "--z", "0.3+0.4*i2"]);
    let v = vec_of(&lines(&out)[0]["value"]);
    let direct = run(&["eval", "--expr", "inv((0.3+0.4*i2)^2+1)"]);
    assert!(close(&v, &vec_of(&lines(&direct)[0]["value"]), 1e-12));

    let out = run(&["symmetry", "--f", "exp(-t^2)", "--probes", "0.2+0.5*i1-0.3*i2;-0.3+0.6*i3", "--s0", "-1", "--s1", "1", "--growth", "1.3"]);
    let r = &lines(&out)[0];
    assert!(r["conj_sym"].as_f64().unwrap() < 1e-8 && r["even_sym"].as_f64().unwrap() < 1e-8);
    assert!(r["equivariance"].as_f64().unwrap() < 1e-7);

    let out = run(&["transform", "mellin", "--f", "exp(-tau)", "--p", "2;0.5", "--s0", "0", "--s1", "1e300"]);
    let rows = lines(&out);
    assert!((rows[0]["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-7);
    assert!((rows[1]["value"][0].as_f64().unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-7);

    let out = run(&["residue", "--f", "1/(z-y)", "--y", "0.1", "--axis", "i1", "--a", "0.4+0.3*i2", "--level", "3"]);
    assert!(close(&vec_of(&lines(&out)[0]["res"]), &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-7));

    let out = run(&["selftest", "--criterion", "1"]);
    assert!(out.status.success());
    assert_eq!(lines(&out)[0]["passed"], true);
    assert!(String::from_utf8(out.stderr).unwrap().contains("PASS"));
}
