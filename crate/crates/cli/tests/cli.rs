use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cue-moments")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn without_runtime(mut v: Value) -> Value {
    v["meta"].as_object_mut().unwrap().remove("runtime_ms");
    v
}

#[test]
fn micro_limit_reports_exact_rational() {
    let v = json(&run(&["micro", "--mu", "1,1", "--nu", "1,1", "--c", "0"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["exact"], "61/10080");
    assert_eq!(v["normalization"], "N^-8");
    assert!((v["value"]["re"].as_f64().unwrap() - 61.0 / 10080.0).abs() < 1e-18);
}

#[test]
fn bulk_at_origin() {
    let v = json(&run(&["bulk", "--mu", "1", "--nu", "1", "--z", "0"]));
    assert_eq!(v["value"]["re"].as_f64(), Some(1.0));
    assert_eq!(v["exact"], "1/1");
    assert_eq!(v["meta"]["module"], "cue_asymptotic");
}

#[test]
fn bulk_complex_point_has_no_exact_payload() {
    let v = json(&run(&["bulk", "--mu", "1", "--nu", "0", "--z", "0.3,-0.2"]));
    assert!(v.get("exact").is_none());
    assert!(v["value"]["im"].as_f64().unwrap() != 0.0);
}

#[test]
fn exact_sweep_fills_grid() {
    let v = json(&run(&["exact", "--mu", "1", "--nu", "1", "--z", "1/2", "--N", "2,4,8"]));
    let grid = v["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 3);
    assert_eq!(grid[1]["exact"], "45/16");
    assert_eq!(v["inputs"]["N"], 8);
}

#[test]
fn mc_is_reproducible() {
    let args = ["mc", "--mu", "1", "--nu", "1", "--z", "0.4,0.2", "--N", "6", "--samples", "3000", "--seed", "9"];
    let a = without_runtime(json(&run(&args)));
    let b = without_runtime(json(&run(&args)));
    assert_eq!(a, b);
    let c = without_runtime(json(&run(&[&["--threads", "1"], &args[..]].concat())));
    assert_eq!(a, c);
    assert!(a["stderr"]["re"].as_f64().unwrap() > 0.0);
}

#[test]
fn mc_requires_seed() {
    let out = run(&["mc", "--mu", "1", "--nu", "1", "--z", "0.5", "--N", "4", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn noisy_mc_is_refused() {
    let args = ["mc", "--mu", "1", "--nu", "0", "--z", "0", "--N", "8", "--samples", "200", "--seed", "1"];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stdout));
    let out = run(&[&args[..], &["--allow-noisy"]].concat());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(run(&["bulk", "--bogus"]).status.code(), Some(2));
}

#[test]
fn violated_preconditions_exit_2() {
    for args in [
        &["bulk", "--mu", "1", "--nu", "1", "--z", "1.5"][..],
        &["micro", "--mu", "1,1", "--nu", "1", "--c", "0"][..],
        &["exact", "--mu", "1", "--nu", "1", "--z", "0.5", "--N", "0"][..],
        &["zeta-identity", "--alpha", "0.5", "--beta", "0", "--sigma", "0.9", "--M", "100"][..],
        &["euler-a", "--K", "1.5", "--L", "2"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn padding_is_reported() {
    let v = json(&run(&["micro", "--mu", "1,1", "--nu", "1", "--c", "0", "--pad"]));
    assert_eq!(v["inputs"]["nu"], "(1,0)");
}

#[test]
fn csv_has_header_and_rows() {
    let dir = std::env::temp_dir().join(format!("cue-moments-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    json(&run(&["--csv", path.to_str().unwrap(), "exact", "--mu", "1", "--nu", "1", "--z", "0.5", "--N", "2,4"]));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "quantity,N,mu,nu,z,re,im,exact,stderr_re,stderr_im,tail_bound");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].contains("45/16"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn zeta_commands() {
    let v = json(&run(&["zeta-predict", "--mu", "1", "--nu", "0", "--sigma", "1", "--mode", "finite-sigma"]));
    assert!((v["value"]["re"].as_f64().unwrap() + 0.9375482543158438).abs() < 1e-12);
    let v = json(&run(&["zeta-sum", "--mu", "1", "--nu", "1", "--sigma", "1", "--M", "1000"]));
    assert!(v["tail_bound"].as_f64().unwrap() > 0.0);
    let v = json(&run(&["euler-a", "--K", "1", "--L", "1"]));
    assert!((v["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = json(&run(&["zeta-identity", "--alpha", "0.02,-0.01", "--beta", "0.01,0.03", "--sigma", "0.9", "--M", "20000"]));
    assert!(v["details"]["deviation"].as_f64().unwrap() <= v["tail_bound"].as_f64().unwrap());
}

#[test]
fn tables_and_kostka() {
    let v = json(&run(&["tables", "--mu", "2,1", "--nu", "1,2"]));
    assert_eq!(v["exact"], "2/1");
    assert_eq!(v["details"]["tables"].as_array().unwrap().len(), 2);
    let v = json(&run(&["tables", "--mu", "2,1", "--cols", "2", "--limit", "1"]));
    assert_eq!(v["exact"], "6/1");
    let v = json(&run(&["kostka", "--lambda", "2,1", "--mu", "1,1,1"]));
    assert_eq!(v["exact"], "2/1");
}

#[test]
fn crosscheck_passes() {
    let v = json(&run(&["crosscheck", "--seed", "7"]));
    assert_eq!(v["details"]["failed"], 0);
    assert!(v["details"]["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}
