//! Command implementations.
//!
//! Each command computes its artifacts fully in memory, then writes the
//! CSV to the output path and the metadata sidecar next to it at
//! `<output>.meta`. Diagnostics go to stderr; only `selftest` prints to
//! stdout.

use std::fs;

use effsec::capacity::{maximize_capacity, quadrature_capacity, sweep, CapacityResult};
use effsec::params::SystemParams;
use effsec::queue::{simulate_replications, PolicySource, SimConfig};
use effsec::report::{
    capacity_csv, capacity_row, iteration_csv, queue_summary_pairs, queue_tail_csv, sidecar, sig9,
    CAPACITY_HEADER,
};
use effsec::selftest::run_all;
use effsec::solver::iteration_histogram;

use crate::settings::{Method, Policy, Settings};
use crate::Failure;

fn require_output(settings: &Settings) -> Result<&str, Failure> {
    settings.output.as_deref().ok_or_else(|| {
        Failure::Usage(
            "no output path; set `output` in the configuration file or pass --output".to_string(),
        )
    })
}

fn write_artifacts(path: &str, table: &str, meta: &str) -> Result<(), Failure> {
    fs::write(path, table).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
    let meta_path = format!("{path}.meta");
    fs::write(&meta_path, meta)
        .map_err(|e| Failure::Usage(format!("cannot write {meta_path}: {e}")))?;
    Ok(())
}

/// Headline numbers of one capacity evaluation, for the sidecar.
fn result_pairs(result: &CapacityResult, params: &SystemParams) -> Vec<(&'static str, String)> {
    vec![
        ("r_e_bits_s_hz", sig9(result.r_e)),
        (
            "r_e_bits_per_frame",
            sig9(result.r_e * params.bandwidth_b * params.frame_t),
        ),
        ("gamma0", sig9(result.gamma0)),
        ("ergodic_rate_bits_s_hz", sig9(result.ergodic_rate)),
        ("mean_iters_b", sig9(result.mean_iters_b)),
        ("mean_iters_i", sig9(result.mean_iters_i)),
    ]
}

/// One capacity row at the configured parameter point. The row's
/// `axis_value` column carries `theta`, the scalar an `eval` most often
/// varies between runs.
pub fn eval(settings: &Settings) -> Result<(), Failure> {
    let out = require_output(settings)?;
    let params = settings.params();
    let cfg = settings.solver();
    let result = match settings.method {
        Method::MonteCarlo => maximize_capacity(&params, &cfg, settings.seed, settings.draws)?,
        Method::Quadrature => quadrature_capacity(&params, &cfg, settings.nodes)?,
    };
    let mut csv = String::from(CAPACITY_HEADER);
    csv.push('\n');
    csv.push_str(&capacity_row(params.theta, &result));
    csv.push('\n');
    let mut pairs = settings.common_pairs("eval");
    pairs.push(("method", settings.method.name().to_string()));
    pairs.push(("draws", settings.draws.to_string()));
    pairs.push(("nodes", settings.nodes.to_string()));
    pairs.extend(result_pairs(&result, &params));
    write_artifacts(out, &csv, &sidecar(&pairs))
}

/// Capacity rows along the configured axis. Grid points that fail keep
/// their diagnostics on stderr and in the sidecar; surviving rows are
/// still written, and any failure turns into a nonzero exit afterwards.
pub fn sweep_cmd(settings: &Settings) -> Result<(), Failure> {
    let out = require_output(settings)?;
    let spec = settings.sweep_spec()?;
    let rows = sweep(&spec, &settings.solver(), settings.seed, settings.draws)?;
    let failures: Vec<(f64, &str)> = rows
        .iter()
        .filter_map(|row| {
            row.outcome
                .as_ref()
                .err()
                .map(|reason| (row.axis_value, reason.as_str()))
        })
        .collect();
    for (value, reason) in &failures {
        eprintln!("warning: grid point {value}: {reason}");
    }
    let mut pairs = settings.common_pairs("sweep");
    pairs.push(("draws", settings.draws.to_string()));
    pairs.push((
        "axis",
        match settings.axis {
            effsec::capacity::SweepAxis::Theta => "theta",
            effsec::capacity::SweepAxis::Snr => "snr_db",
            effsec::capacity::SweepAxis::Beta => "beta",
            effsec::capacity::SweepAxis::Sensing => "sensing",
        }
        .to_string(),
    ));
    pairs.push((
        "grid",
        spec.grid
            .iter()
            .map(|&v| sig9(v))
            .collect::<Vec<_>>()
            .join(","),
    ));
    if !spec.sensing.is_empty() {
        pairs.push((
            "sensing",
            spec.sensing
                .iter()
                .map(|&(p_f, p_d)| format!("{p_f}:{p_d}"))
                .collect::<Vec<_>>()
                .join(","),
        ));
    }
    pairs.push(("failed_points", failures.len().to_string()));
    if !failures.is_empty() {
        pairs.push((
            "failed_axis_values",
            failures
                .iter()
                .map(|&(v, _)| sig9(v))
                .collect::<Vec<_>>()
                .join(","),
        ));
    }
    write_artifacts(out, &capacity_csv(&rows), &sidecar(&pairs))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "{} of {} sweep points failed; artifacts contain the remainder",
            failures.len(),
            rows.len()
        )))
    }
}

/// Distribution of per-draw solver iteration counts after calibration.
pub fn iters(settings: &Settings) -> Result<(), Failure> {
    let out = require_output(settings)?;
    let histogram = iteration_histogram(
        &settings.params(),
        &settings.solver(),
        settings.seed,
        settings.draws,
    )?;
    let below = |cut: u32| -> f64 {
        histogram
            .iter()
            .filter(|&&(k, _)| k < cut)
            .map(|&(_, p)| p)
            .sum()
    };
    let mut pairs = settings.common_pairs("iters");
    pairs.push(("draws", settings.draws.to_string()));
    pairs.push(("p_below_5", sig9(below(5))));
    pairs.push(("p_below_14", sig9(below(14))));
    write_artifacts(out, &iteration_csv(&histogram), &sidecar(&pairs))
}

/// Frame-level queue simulation at the configured arrival rate.
pub fn simulate(settings: &Settings) -> Result<(), Failure> {
    let out = require_output(settings)?;
    let params = settings.params();
    let cfg = settings.solver();
    let mut pairs = settings.common_pairs("simulate");
    pairs.push(("frames", settings.frames.to_string()));
    pairs.push(("replications", settings.replications.to_string()));
    pairs.push(("policy", settings.policy.name().to_string()));
    let (policy, arrival) = match settings.policy {
        Policy::Threshold => {
            // Calibrate on `draws` realizations first; the simulator then
            // re-solves the policy per frame at the calibrated threshold.
            let cal = maximize_capacity(&params, &cfg, settings.seed, settings.draws)?;
            let bits_per_frame = cal.r_e * params.bandwidth_b * params.frame_t;
            let arrival = match (settings.arrival_bits, settings.arrival_fraction) {
                (Some(_), Some(_)) => {
                    return Err(Failure::Usage(
                        "`arrival_bits` and `arrival_fraction` are mutually exclusive".to_string(),
                    ))
                }
                (Some(bits), None) => bits,
                (None, fraction) => fraction.unwrap_or(0.95) * bits_per_frame,
            };
            pairs.push(("draws", settings.draws.to_string()));
            pairs.push(("gamma0", sig9(cal.gamma0)));
            pairs.push(("r_e_bits_s_hz", sig9(cal.r_e)));
            pairs.push(("r_e_bits_per_frame", sig9(bits_per_frame)));
            (PolicySource::Threshold(cal.gamma0), arrival)
        }
        Policy::Fixed => {
            let arrival = match (settings.arrival_bits, settings.arrival_fraction) {
                (Some(bits), None) => bits,
                (None, None) => {
                    return Err(Failure::Usage(
                        "the fixed policy requires `arrival_bits`".to_string(),
                    ))
                }
                _ => {
                    return Err(Failure::Usage(
                        "`arrival_fraction` requires the threshold policy".to_string(),
                    ))
                }
            };
            pairs.push(("mu_b", sig9(settings.mu_b)));
            pairs.push(("mu_i", sig9(settings.mu_i)));
            (
                PolicySource::Fixed {
                    mu_b: settings.mu_b,
                    mu_i: settings.mu_i,
                },
                arrival,
            )
        }
    };
    pairs.push(("arrival_bits_per_frame", sig9(arrival)));
    let sim = simulate_replications(
        &SimConfig {
            n_frames: settings.frames,
            arrival_bits: arrival,
            seed: settings.seed,
            params,
            policy,
            solver: cfg,
        },
        settings.replications,
    )?;
    pairs.extend(queue_summary_pairs(&sim));
    write_artifacts(out, &queue_tail_csv(&sim.queue_tail), &sidecar(&pairs))
}

/// Built-in verification suite; one verdict line per check on stdout,
/// mirrored to the output file when one is configured.
pub fn selftest(settings: &Settings) -> Result<(), Failure> {
    let checks = run_all();
    let mut text = String::new();
    let mut failed = 0usize;
    for check in &checks {
        let line = format!(
            "{} {} — {}",
            if check.passed { "ok  " } else { "FAIL" },
            check.name,
            check.detail
        );
        println!("{line}");
        text.push_str(&line);
        text.push('\n');
        if !check.passed {
            failed += 1;
        }
    }
    if let Some(out) = settings.output.as_deref() {
        write_artifacts(out, &text, &sidecar(&settings.common_pairs("selftest")))?;
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "{failed} of {} self-test checks failed",
            checks.len()
        )))
    }
}
