use num_complex::Complex64 as C;
use serde_json::Value;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_padic-spectra"));
    c.env_remove(cli::PRECISION_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    assert!(
        o.status.success(),
        "exit {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn cx(v: &Value) -> C {
    C::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn leading(args: &[&str]) -> C {
    let v = json(&run(args));
    cx(&v["result"]["eigenvalues"][0])
}

#[test]
fn zeta_without_roots_mod_p_is_one() {
    let v = json(&run(&["zeta", "--p", "3", "--Q", "1,0,1", "--s", "1,0"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "zeta");
    assert!((cx(&v["result"]["value"]) - 1.0).norm() < 1e-12);
}

#[test]
fn exact_zeta_of_one_minus_x() {
    let v = json(&run(&["zeta", "--p", "3", "--Q", "1,-1", "--exact"]));
    let layout: zeta::RatFunc = serde_json::from_value(v["result"]["exact"].clone()).unwrap();
    // 1 - p^{-1}(1 - t)/((1 - p^{-1})(1 - t/p)) at p = 3, t = 1/3
    let t = padic_core::BigRational::new(1.into(), 3.into());
    assert_eq!(layout.eval(&t).unwrap(), padic_core::BigRational::new(5.into(), 8.into()));
    for k in 1..6 {
        let t = 0.9 / k as f64;
        let want = 1.0 - (1.0 - t) / (3.0 * (1.0 - 1.0 / 3.0) * (1.0 - t / 3.0));
        assert!((layout.eval_c(C::new(t, 0.0)).re - want).abs() < 1e-14);
    }
}

#[test]
fn missing_q_is_a_usage_error() {
    let o = run(&["zeta", "--p", "3", "--s", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--Q"));
    assert_eq!(run(&["spectrum", "--p", "5", "--s", "1"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "--p", "3", "--Q", "1", "--bogus"]).status.code(), Some(2));
}

#[test]
fn x_minus_y_leading_eigenvalue() {
    let top = leading(&["spectrum", "--p", "5", "--Q", "1,-1", "--s", "1"]);
    // convolution by |x|^s / (1 - 1/p): its integral over Z_p
    let (p, s) = (5.0f64, 1.0f64);
    let want = 1.0 / (1.0 - p.powf(-1.0 - s));
    assert!((top - want).norm() < 1e-12, "{top}");
    assert!((want - 25.0 / 24.0).abs() < 1e-15);
}

#[test]
fn truncation_stability() {
    // the gap decays like p^{-N}; 1e-10 at N = 10 needs p >= 11
    let base = ["spectrum", "--p", "11", "--Q", "1,-1", "--s", "1", "--N"];
    let a = leading(&[&base[..], &["10"]].concat());
    let b = leading(&[&base[..], &["60"]].concat());
    assert!((a - b).norm() < 1e-10, "{}", (a - b).norm());
    assert!((b.re - 121.0 / 120.0).abs() < 1e-13);
}

#[test]
fn truncation_gap_rate_at_p5() {
    let base = ["spectrum", "--p", "5", "--Q", "1,-1", "--s", "1", "--N"];
    let gap = |n: &str| (leading(&[&base[..], &[n]].concat()) - 25.0 / 24.0).norm();
    for n in [6, 8, 10] {
        let tail = 5f64.powi(-n);
        let g = gap(&n.to_string());
        assert!(g > 0.5 * tail && g < 2.0 * tail, "N = {n}: {g:e} vs {tail:e}");
    }
}

#[test]
fn out_of_domain_s_exits_3() {
    let o = run(&["spectrum", "--p", "5", "--Q", "1,-1", "--s", "-5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Re(s)"));
    assert_eq!(run(&["zeta", "--p", "4", "--Q", "1,1", "--s", "1"]).status.code(), Some(3));
    assert_eq!(run(&["spectrum", "--p", "5", "--Q", "1,-1", "--s", "1", "--N", "500"]).status.code(), Some(2));
}

/// Direct partial sums of the defining series.
fn j_series(a: f64, q: f64, u: C) -> C {
    let (mut term, mut sum) = (C::new(1.0, 0.0), C::new(1.0, 0.0));
    for n in 0..80 {
        let qn = q.powi(n);
        term *= -u * qn / ((1.0 - a * qn) * (1.0 - qn * q));
        sum += term;
    }
    sum
}

#[test]
fn zeros_of_j_are_certified() {
    let v = json(&run(&["zeros", "--fn", "J", "--a", "0.2", "--q", "0.1", "--radius", "50"]));
    let r = &v["result"];
    assert_eq!(r["certified"], true);
    let zs = r["zeros"].as_array().unwrap();
    assert_eq!(zs.len() as u64, r["winding_number"].as_u64().unwrap());
    assert!(!zs.is_empty());
    for z in zs {
        assert_eq!(z["multiplicity"], 1);
        let u = cx(&z["value"]);
        // relative to the size of the terms near |u|
        assert!(j_series(0.2, 0.1, u).norm() < 1e-10 * (1.0 + u.norm()), "{u}");
    }
}

#[test]
fn kernel_charfn_vanishes_at_reciprocal_eigenvalue() {
    let u = format!("{},0", 24.0 / 25.0);
    let v = json(&run(&["charfn", "--p", "5", "--Q", "1,-1", "--s", "1", "--u", &u]));
    let s = &v["result"]["samples"][0];
    assert!(cx(&s["value"]).norm() < 1e-12);
}

#[test]
fn verify_noroots_passes_and_perturbed_fails() {
    let v = json(&run(&["verify", "noroots", "--p", "3", "--s", "1"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["reports"][0]["params"]["p"], "3");
    let o = run(&["verify", "noroots", "--p", "3", "--s", "1", "--set", "perturb=1.01"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["verify", "noroots", "--set", "nope=1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn verify_a_criterion() {
    let v = json(&run(&["verify", "A9"]));
    let lines = v["result"]["summary"].as_array().unwrap();
    assert!(lines[0].as_str().unwrap().starts_with("PASS A9"));
    assert_eq!(run(&["verify", "A9", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn json_is_reproducible_up_to_the_timestamp() {
    let args = ["verify", "posi", "--set", "max_n=5"];
    let mut a = json(&run(&args));
    let mut b = json(&run(&args));
    a["timestamp"] = Value::Null;
    b["timestamp"] = Value::Null;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "format = \"json\"\n[spectrum]\np = 5\nQ = [1, -1]\ns = 1\nN = 20\n").unwrap();
    let from_file = leading(&["spectrum", "--config", cfg.to_str().unwrap()]);
    let from_flags = leading(&["spectrum", "--p", "5", "--Q", "1,-1", "--s", "1", "--N", "20"]);
    assert_eq!(from_file, from_flags);

    std::fs::write(&cfg, "[spectrum]\nwhat = 1\n").unwrap();
    assert_eq!(run(&["spectrum", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));

    std::fs::write(&cfg, "[[experiment]]\nkind = \"posi\"\nname = \"small\"\nmax_n = 4\n").unwrap();
    let v = json(&run(&["verify", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["result"]["reports"][0]["name"], "small");
    assert_eq!(v["pass"], true);
}

#[test]
fn csv_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec.csv");
    let o = run(&["spectrum", "--p", "5", "--Q", "1,-1", "--s", "1", "--count", "2", "--format", "csv", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,re,im,residual");
    assert_eq!(lines.len(), 3);
    let re: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((re - 25.0 / 24.0).abs() < 1e-12);
}

#[test]
fn precision_from_the_environment() {
    let args = ["spectrum", "--p", "5", "--Q", "1,-1", "--s", "1", "--N", "8"];
    let o = bin().args(args).env(cli::PRECISION_ENV, "double").output().unwrap();
    assert_eq!(json(&o)["result"]["precision"], "Double");
    assert_eq!(json(&run(&args))["result"]["precision"], "DoubleDouble");
    let o = bin().args(args).env(cli::PRECISION_ENV, "quad").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
