use std::process::{Command, Output};

use qprod_core::numeric::{parse_real, to_f64};
use qprod_core::Arith;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qprod"))
        .args(args)
        .env_remove("QPROD_MAX_WORKING_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn error_json(o: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn eval_trivial_product() {
    let v = json(&run(&["eval", "--t", "0", "--x", "0.5", "--digits", "10"]));
    assert_eq!(v["value_re"], "1");
    assert_eq!(v["rel_error_bound"], "0");
    assert_eq!(v["method"], "euler");
}

#[test]
fn eval_matches_lambert() {
    let a = json(&run(&["eval", "--t", "1", "--x", "0.5", "--digits", "30"]));
    let b = json(&run(&["eval", "--t", "1", "--x", "0.5", "--digits", "30", "--method", "log"]));
    assert_eq!(b["rel_error_bound"], "none");
    let ar = Arith::with_digits(40);
    let va = parse_real(a["value_re"].as_str().unwrap(), &ar).unwrap();
    let vb = parse_real(b["value_re"].as_str().unwrap(), &ar).unwrap();
    assert!(to_f64(&ar.div(&ar.sub(&va, &vb).abs(), &va)) < 1e-28);
}

#[test]
fn eval_rejects_x_on_the_circle() {
    let o = run(&["eval", "--t", "1", "--x", "1.0"]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert!(e["message"].as_str().unwrap().contains("x outside open unit disc"));
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--t", "0.3-0.8i", "--x", "0.6@1.2", "--digits", "40"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let bench = ["bench", "--gamma-list", "0.5,1", "--methods", "euler,slater,gatteschi"];
    assert_eq!(run(&bench).stdout, run(&bench).stdout);
    let v = ["validate", "--quick", "--seed", "7"];
    assert_eq!(run(&v).stdout, run(&v).stdout);
}

#[test]
fn doubling_digits_preserves_leading_digits() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ar = Arith::with_digits(80);
    for _ in 0..8 {
        let d: usize = rng.gen_range(5..25);
        let t = format!("{:.4}{:+.4}i", rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let x = format!("{:.4}@{:.4}", rng.gen_range(0.0..0.95), rng.gen_range(-3.1..3.1));
        let ds = d.to_string();
        let d2 = (2 * d).to_string();
        let lo = json(&run(&["eval", "--t", &t, "--x", &x, "--digits", &ds]));
        let hi = json(&run(&["eval", "--t", &t, "--x", &x, "--digits", &d2]));
        let mag = |v: &Value| {
            let re = parse_real(v["value_re"].as_str().unwrap(), &ar).unwrap();
            let im = parse_real(v["value_im"].as_str().unwrap(), &ar).unwrap();
            (re, im)
        };
        let (a_re, a_im) = mag(&lo);
        let (b_re, b_im) = mag(&hi);
        let diff = ar.sqrt(&ar.add(&ar.sqr(&ar.sub(&a_re, &b_re)), &ar.sqr(&ar.sub(&a_im, &b_im))));
        let norm = ar.sqrt(&ar.add(&ar.sqr(&b_re), &ar.sqr(&b_im)));
        let rel = to_f64(&ar.div(&diff, &norm));
        assert!(rel <= 10f64.powi(-(d as i32 - 2)), "t {t} x {x} D {d}: {rel:e}");
    }
}

#[test]
fn bench_at_gamma_one() {
    let o = run(&["bench", "--gamma-list", "1", "--methods", "euler,product,corrected,log,gatteschi,slater", "--digits", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("method,gamma,terms,wall_time_ns,rel_err_vs_reference,min_denominator_modulus\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 6);
    for row in rows {
        let err: f64 = row[4].parse().unwrap();
        assert!(err <= 1e-20, "{row:?}");
        assert_eq!(row[3], "0");
    }
}

#[test]
fn bench_euler_beats_lambert_at_small_gamma() {
    let o = run(&["bench", "--gamma-list", "0.01", "--methods", "euler,log", "--digits", "20"]);
    let rows = csv_rows(&stdout(&o));
    let terms = |m: &str| rows.iter().find(|r| r[0] == m).unwrap()[2].parse::<usize>().unwrap();
    assert!(terms("euler") < terms("log"));
}

#[test]
fn bench_usage_and_io_errors() {
    let o = run(&["bench", "--gamma-list", "1", "--methods", ""]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "usage");
    let o = run(&["bench", "--gamma-list", "1", "--methods", "euler", "--out", "/nonexistent-dir/out.csv"]);
    assert!(!o.status.success());
    assert!(error_json(&o)["message"].is_string());
}

#[test]
fn bench_writes_file() {
    let path = std::env::temp_dir().join(format!("qprod-bench-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["bench", "--gamma-list", "2", "--methods", "euler", "--out", p]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(csv_rows(&text).len(), 1);
}

#[test]
fn plot_f_at_one() {
    let o = run(&["plot", "--function", "f", "--z-min", "1", "--z-max", "1", "--points", "1"]);
    let text = stdout(&o);
    assert!(text.starts_with("z,log_z,value\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let v: f64 = rows[0][2].parse().unwrap();
    assert!((v - 0.0866399).abs() < 1e-7);
}

#[test]
fn plot_g_vanishes_at_one() {
    let o = run(&["plot", "--function", "g", "--z-min", "0.5", "--z-max", "2", "--points", "3"]);
    let rows = csv_rows(&stdout(&o));
    let mid: f64 = rows[1][2].parse().unwrap();
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 1.0);
    assert!(mid.abs() < 1e-15);
}

#[test]
fn plot_r0_ratio_range() {
    let rows = csv_rows(&stdout(&run(&["plot", "--function", "R0ratio", "--points", "60"])));
    assert_eq!(rows.len(), 60);
    for r in rows {
        let v: f64 = r[2].parse().unwrap();
        assert!(v > 1.0 && v <= 1.0905001, "{r:?}");
    }
}

#[test]
fn plot_rejects_nonpositive_z() {
    let o = run(&["plot", "--function", "f", "--z-min", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "domain");
}

#[test]
fn validate_quick_passes() {
    let o = run(&["validate", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn working_digit_cap_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_qprod"))
        .args(["eval", "--t", "1", "--x", "0.5", "--digits", "200"])
        .env("QPROD_MAX_WORKING_DIGITS", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(error_json(&o)["message"].as_str().unwrap().contains("QPROD_MAX_WORKING_DIGITS"));
}
