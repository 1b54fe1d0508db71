//! Built-in verification suite behind the `selftest` command.
//!
//! Each check re-derives an independent expectation at runtime (factorial
//! moments, a derivative-free oracle, analytic caps, an out-of-band
//! service estimate) and compares the library against it. The suite is a
//! quick field diagnostic for an installed binary; the full test battery
//! under `cargo test` remains the authority.

use crate::capacity::{ergodic_rate, maximize_capacity, quadrature_capacity};
use crate::error::Result;
use crate::fading::sample_fading;
use crate::params::{derive_constants, state_probabilities, SystemParams};
use crate::quadrature::GaussLaguerre;
use crate::queue::{simulate_queue, PolicySource, SimConfig};
use crate::report::capacity_row;
use crate::solver::{
    calibrate_gamma, oracle_policy, solve_branch, Branch, PolicyPair, SolverConfig,
};

/// One property check and its verdict.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured values, or the error that interrupted the check.
    pub detail: String,
}

/// Run every check in a fixed order.
pub fn run_all() -> Vec<Check> {
    vec![
        laguerre_moments(),
        oracle_agreement(),
        calibration_residual(),
        mc_vs_quadrature(),
        capacity_bounds(),
        queue_service(),
        determinism(),
    ]
}

fn verdict(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match body() {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// The 32-node rule must integrate polynomial moments of the unit
/// exponential exactly: E[Z^k] = k!.
fn laguerre_moments() -> Check {
    verdict("laguerre-moments", || {
        let rule = GaussLaguerre::new(32)?;
        let mut worst = 0.0f64;
        let mut factorial = 1.0;
        for k in 0..=10u32 {
            if k > 0 {
                factorial *= f64::from(k);
            }
            let moment = rule.integrate(|x| x.powi(k as i32));
            worst = worst.max((moment - factorial).abs() / factorial);
        }
        Ok((
            worst <= 1e-10,
            format!("worst moment error {worst:.2e} over k <= 10"),
        ))
    })
}

/// The fixed-point iteration must land on the same power as a
/// derivative-free golden-section search of the per-draw objective.
fn oracle_agreement() -> Check {
    verdict("oracle-agreement", || {
        let params = SystemParams::default();
        let consts = derive_constants(&params)?;
        let probs = state_probabilities(params.rho, params.p_d, params.p_f)?;
        let cfg = SolverConfig::default();
        let gamma0 = 0.05;
        let draws = sample_fading(7, 300, &params)?;
        let mut worst = 0.0f64;
        for draw in &draws {
            for branch in [Branch::Busy, Branch::Idle] {
                let (mu, _) = solve_branch(branch, draw, gamma0, &params, &consts, &probs, &cfg)?;
                let oracle = oracle_policy(branch, draw, gamma0, &params, &consts, &probs)?;
                worst = worst.max((mu - oracle).abs());
            }
        }
        Ok((
            worst <= 1e-6,
            format!("worst |mu - oracle| {worst:.2e} over 300 draws"),
        ))
    })
}

/// Calibration must meet the unit interference budget.
fn calibration_residual() -> Check {
    verdict("calibration-residual", || {
        let params = SystemParams::default();
        let consts = derive_constants(&params)?;
        let probs = state_probabilities(params.rho, params.p_d, params.p_f)?;
        let cfg = SolverConfig::default();
        let draws = sample_fading(1, 20_000, &params)?;
        let cal = calibrate_gamma(&draws, &params, &consts, &probs, &cfg)?;
        let residual = (cal.achieved_power - 1.0).abs();
        Ok((
            residual <= 1e-3,
            format!(
                "|achieved - 1| = {residual:.2e} at gamma0 = {:.4e}",
                cal.gamma0
            ),
        ))
    })
}

/// Monte Carlo and quadrature are independent evaluations of the same
/// expectation; a quick run must agree within 1.5% (the full-resolution
/// cross-check in the test suite holds 0.5%).
fn mc_vs_quadrature() -> Check {
    verdict("mc-vs-quadrature", || {
        let params = SystemParams {
            theta: 0.01,
            ..SystemParams::default()
        };
        let cfg = SolverConfig::default();
        let mc = maximize_capacity(&params, &cfg, 42, 30_000)?;
        let quad = quadrature_capacity(&params, &cfg, 32)?;
        let rel = (mc.r_e - quad.r_e).abs() / quad.r_e;
        Ok((
            rel <= 0.015,
            format!(
                "relative gap {rel:.2e} (mc {:.6}, quad {:.6})",
                mc.r_e, quad.r_e
            ),
        ))
    })
}

/// The capacity must respect both analytic caps: the ergodic service
/// rate (Jensen) and -ln(p_0)/(theta*B*T) from the no-service mass.
fn capacity_bounds() -> Check {
    verdict("capacity-bounds", || {
        let params = SystemParams {
            theta: 0.05,
            ..SystemParams::default()
        };
        let cfg = SolverConfig::default();
        let result = maximize_capacity(&params, &cfg, 9, 20_000)?;
        let probs = state_probabilities(params.rho, params.p_d, params.p_f)?;
        let cap = -probs.p_0.ln() / (params.theta * params.bandwidth_b * params.frame_t);
        let under_ergodic = result.r_e <= result.ergodic_rate * (1.0 + 1e-9);
        let under_cap = result.r_e <= cap * (1.0 + 1e-12);
        Ok((
            result.r_e > 0.0 && under_ergodic && under_cap,
            format!(
                "r_e {:.6} vs ergodic {:.6}, outage cap {cap:.6}",
                result.r_e, result.ergodic_rate
            ),
        ))
    })
}

/// The frame simulator's mean service must match an out-of-band Monte
/// Carlo estimate of the same expectation under a fixed feasible policy.
fn queue_service() -> Check {
    verdict("queue-service", || {
        let params = SystemParams::default();
        let probs = state_probabilities(params.rho, params.p_d, params.p_f)?;
        let pair = PolicyPair {
            mu_b: 1.0,
            mu_i: 1.0,
            iters_b: 0,
            iters_i: 0,
        };
        let draws = sample_fading(31, 100_000, &params)?;
        let policies = vec![pair; draws.len()];
        let predicted =
            params.bandwidth_b * params.frame_t * ergodic_rate(&draws, &policies, &params, &probs)?;
        let sim = simulate_queue(&SimConfig {
            n_frames: 100_000,
            arrival_bits: 0.0,
            seed: 77,
            params,
            policy: PolicySource::Fixed {
                mu_b: 1.0,
                mu_i: 1.0,
            },
            solver: SolverConfig::default(),
        })?;
        let rel = (sim.mean_service - predicted).abs() / predicted;
        Ok((
            rel <= 0.02,
            format!(
                "relative gap {rel:.2e} (simulated {:.3}, predicted {:.3} bits/frame)",
                sim.mean_service, predicted
            ),
        ))
    })
}

/// Identical seeds must reproduce identical artifacts byte for byte.
fn determinism() -> Check {
    verdict("determinism", || {
        let params = SystemParams {
            theta: 0.01,
            ..SystemParams::default()
        };
        let cfg = SolverConfig::default();
        let a = maximize_capacity(&params, &cfg, 5, 20_000)?;
        let b = maximize_capacity(&params, &cfg, 5, 20_000)?;
        let rows_equal = capacity_row(params.theta, &a) == capacity_row(params.theta, &b);
        let sim_cfg = SimConfig {
            n_frames: 10_000,
            arrival_bits: 50.0,
            seed: 5,
            params,
            policy: PolicySource::Fixed {
                mu_b: 1.0,
                mu_i: 1.0,
            },
            solver: cfg,
        };
        let t1 = crate::report::queue_tail_csv(&simulate_queue(&sim_cfg)?.queue_tail);
        let t2 = crate::report::queue_tail_csv(&simulate_queue(&sim_cfg)?.queue_tail);
        Ok((
            rows_equal && t1 == t2,
            format!(
                "capacity rows equal: {rows_equal}; queue tables equal: {}",
                t1 == t2
            ),
        ))
    })
}
