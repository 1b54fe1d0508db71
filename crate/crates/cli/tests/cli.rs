//! Black-box tests of the command-line contract: configuration layering,
//! exit codes, diagnostics, and artifact layout.

mod common;

use std::fs;

use common::{effsec, exit_code, stderr_of, stdout_of, workdir};

#[test]
fn unknown_config_key_exits_one_and_names_it() {
    let dir = workdir("unknown-key");
    let conf = dir.join("run.conf");
    fs::write(&conf, "theta=0.5\nbogus_key=1\n").unwrap();
    let out = effsec(&[
        "eval",
        "--config",
        conf.to_str().unwrap(),
        "-o",
        dir.join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let err = stderr_of(&out);
    assert!(err.contains("bogus_key"), "{err}");
    assert!(err.contains(":2:"), "{err}");
}

#[test]
fn malformed_flag_value_exits_one() {
    let dir = workdir("bad-value");
    let out = effsec(&[
        "eval",
        "--method",
        "sideways",
        "-o",
        dir.join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("`method`"));
}

#[test]
fn missing_output_exits_one() {
    let out = effsec(&["eval", "--draws", "100"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("output"));
}

#[test]
fn unwritable_output_exits_one() {
    let out = effsec(&[
        "eval",
        "--draws",
        "2000",
        "-o",
        "/nonexistent-effsec-dir/x.csv",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("cannot write"));
}

#[test]
fn invalid_domain_value_exits_one() {
    let dir = workdir("bad-domain");
    let out = effsec(&[
        "eval",
        "--theta=-3",
        "--draws",
        "2000",
        "-o",
        dir.join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("theta"));
}

#[test]
fn eval_writes_table_and_sidecar() {
    let dir = workdir("eval");
    let csv = dir.join("eval.csv");
    let out = effsec(&[
        "eval",
        "--theta",
        "1",
        "--draws",
        "3000",
        "--seed",
        "9",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
    let table = fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next().unwrap(),
        "axis_value,r_e_bits_s_hz,gamma0,mean_iters_b,mean_iters_i,n_draws,seed"
    );
    let row = lines.next().unwrap();
    assert!(row.ends_with(",3000,9"), "{row}");
    assert_eq!(lines.next(), None);
    let meta = fs::read_to_string(dir.join("eval.csv.meta")).unwrap();
    assert!(meta.contains("command=eval\n"));
    assert!(meta.contains("seed=9\n"));
    assert!(meta.contains(&format!("version={}\n", env!("CARGO_PKG_VERSION"))));
    assert!(meta.contains("r_e_bits_per_frame="));
}

#[test]
fn quadrature_method_runs_without_draws() {
    let dir = workdir("quad");
    let csv = dir.join("quad.csv");
    let out = effsec(&[
        "eval",
        "--method",
        "quadrature",
        "--nodes",
        "16",
        "--theta",
        "0.01",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
    let table = fs::read_to_string(&csv).unwrap();
    // The quadrature path reports nodes^2 tensor points under seed 0.
    assert!(table.lines().nth(1).unwrap().ends_with(",256,0"), "{table}");
}

#[test]
fn fixed_policy_requires_arrival_bits() {
    let dir = workdir("fixed-arrival");
    let out = effsec(&[
        "simulate",
        "--policy",
        "fixed",
        "--frames",
        "10000",
        "-o",
        dir.join("q.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("arrival_bits"));
}

#[test]
fn arrival_keys_are_mutually_exclusive() {
    let dir = workdir("arrival-conflict");
    let out = effsec(&[
        "simulate",
        "--arrival_bits",
        "10",
        "--arrival_fraction",
        "0.9",
        "--frames",
        "10000",
        "--draws",
        "2000",
        "-o",
        dir.join("q.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("mutually exclusive"));
}

#[test]
fn simulate_fixed_policy_writes_tail_and_summary() {
    let dir = workdir("simulate-fixed");
    let csv = dir.join("queue.csv");
    let out = effsec(&[
        "simulate",
        "--policy",
        "fixed",
        "--mu_b",
        "1",
        "--mu_i",
        "1",
        "--arrival_bits",
        "60",
        "--frames",
        "20000",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        table.lines().next().unwrap(),
        "q_threshold_bits,tail_probability"
    );
    let meta = fs::read_to_string(dir.join("queue.csv.meta")).unwrap();
    assert!(meta.contains("policy=fixed\n"));
    assert!(meta.contains("arrival_bits_per_frame=6.00000000e1\n"));
    assert!(meta.contains("mean_service_bits_per_frame="));
    assert!(meta.contains("frames_busy_detected_busy="));
}

#[test]
fn failing_sweep_point_exits_two_but_keeps_survivors() {
    let dir = workdir("sweep-partial");
    let csv = dir.join("sweep.csv");
    // P_d = 1 removes the idle branch from the interference constraint,
    // making its optimal power unbounded: every grid point fails.
    let out = effsec(&[
        "sweep",
        "--grid",
        "0.01,1",
        "--draws",
        "2000",
        "--p_d",
        "1.0",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2, "{}", stderr_of(&out));
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 1, "header only: {table}");
    let meta = fs::read_to_string(dir.join("sweep.csv.meta")).unwrap();
    assert!(meta.contains("failed_points=2\n"));
    assert!(stderr_of(&out).contains("grid point"));
}

#[test]
fn selftest_prints_one_verdict_per_check() {
    let dir = workdir("selftest");
    let report = dir.join("selftest.txt");
    let out = effsec(&["selftest", "-o", report.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
    let text = stdout_of(&out);
    for name in [
        "laguerre-moments",
        "oracle-agreement",
        "calibration-residual",
        "mc-vs-quadrature",
        "capacity-bounds",
        "queue-service",
        "determinism",
    ] {
        assert!(
            text.contains(&format!("ok   {name}")),
            "missing {name}: {text}"
        );
    }
    assert_eq!(fs::read_to_string(&report).unwrap(), text);
}
