//! Deterministic text artifacts: CSV tables and metadata sidecars.
//!
//! Every floating-point value is printed with nine significant digits in
//! scientific notation, so repeated runs with the same configuration and
//! seed produce byte-identical files regardless of platform or worker
//! count.

use crate::capacity::{CapacityResult, SweepRow};
use crate::params::Scenario;
use crate::queue::SimResult;

/// Header of capacity and sweep tables.
pub const CAPACITY_HEADER: &str =
    "axis_value,r_e_bits_s_hz,gamma0,mean_iters_b,mean_iters_i,n_draws,seed";

/// Header of iteration-histogram tables.
pub const ITERATION_HEADER: &str = "iterations,probability";

/// Header of queue-tail tables.
pub const QUEUE_HEADER: &str = "q_threshold_bits,tail_probability";

/// Nine significant digits in scientific notation, e.g. `3.85174000e-1`.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// One capacity table row.
pub fn capacity_row(axis_value: f64, result: &CapacityResult) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        sig9(axis_value),
        sig9(result.r_e),
        sig9(result.gamma0),
        sig9(result.mean_iters_b),
        sig9(result.mean_iters_i),
        result.n_draws,
        result.seed
    )
}

/// Capacity table over sweep rows. Failed grid points carry no numbers,
/// so they are omitted here; the caller reports them through the sidecar
/// and diagnostics instead.
pub fn capacity_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CAPACITY_HEADER);
    out.push('\n');
    for row in rows {
        if let Ok(result) = &row.outcome {
            out.push_str(&capacity_row(row.axis_value, result));
            out.push('\n');
        }
    }
    out
}

/// Iteration-count histogram table.
pub fn iteration_csv(histogram: &[(u32, f64)]) -> String {
    let mut out = String::from(ITERATION_HEADER);
    out.push('\n');
    for &(iterations, probability) in histogram {
        out.push_str(&format!("{},{}\n", iterations, sig9(probability)));
    }
    out
}

/// Queue-tail table.
pub fn queue_tail_csv(tail: &[(f64, f64)]) -> String {
    let mut out = String::from(QUEUE_HEADER);
    out.push('\n');
    for &(q, p) in tail {
        out.push_str(&format!("{},{}\n", sig9(q), sig9(p)));
    }
    out
}

/// Line-oriented metadata sidecar: one `key=value` per line, in the
/// caller's order. Values must not contain newlines.
pub fn sidecar(pairs: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (key, value) in pairs {
        out.push_str(key);
        out.push('=');
        out.push_str(value);
        out.push('\n');
    }
    out
}

fn scenario_label(k: Scenario) -> &'static str {
    match k {
        Scenario::BusyDetectedBusy => "busy_detected_busy",
        Scenario::BusyDetectedIdle => "busy_detected_idle",
        Scenario::IdleDetectedBusy => "idle_detected_busy",
        Scenario::IdleDetectedIdle => "idle_detected_idle",
    }
}

/// Summary record of a simulation, as sidecar pairs: decay estimate,
/// mean service, stability, and the per-scenario outage tallies.
pub fn queue_summary_pairs(result: &SimResult) -> Vec<(&'static str, String)> {
    let mut pairs: Vec<(&'static str, String)> = vec![
        ("n_frames", result.n_frames.to_string()),
        ("mean_service_bits_per_frame", sig9(result.mean_service)),
        (
            "decay_estimate_per_bit",
            match result.decay_estimate {
                Some(d) => sig9(d),
                None => "none".to_string(),
            },
        ),
        ("security_outages", result.security_outages().to_string()),
        (
            "reliability_outages",
            result.reliability_outages().to_string(),
        ),
        ("unstable", result.unstable.to_string()),
    ];
    for (k, tally) in Scenario::ALL.iter().zip(&result.tallies) {
        // The labels are static per scenario; build them once.
        let label = scenario_label(*k);
        pairs.push((frames_key(label), tally.frames.to_string()));
        pairs.push((unreliable_key(label), tally.unreliable.to_string()));
        pairs.push((insecure_key(label), tally.insecure.to_string()));
    }
    pairs
}

// Sidecar keys are `&'static str`; map each scenario label to its three
// fixed key strings.
fn frames_key(label: &str) -> &'static str {
    match label {
        "busy_detected_busy" => "frames_busy_detected_busy",
        "busy_detected_idle" => "frames_busy_detected_idle",
        "idle_detected_busy" => "frames_idle_detected_busy",
        _ => "frames_idle_detected_idle",
    }
}

fn unreliable_key(label: &str) -> &'static str {
    match label {
        "busy_detected_busy" => "unreliable_busy_detected_busy",
        "busy_detected_idle" => "unreliable_busy_detected_idle",
        "idle_detected_busy" => "unreliable_idle_detected_busy",
        _ => "unreliable_idle_detected_idle",
    }
}

fn insecure_key(label: &str) -> &'static str {
    match label {
        "busy_detected_busy" => "insecure_busy_detected_busy",
        "busy_detected_idle" => "insecure_busy_detected_idle",
        "idle_detected_busy" => "insecure_idle_detected_busy",
        _ => "insecure_idle_detected_idle",
    }
}
