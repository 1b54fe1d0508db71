//! Frame-level queue simulation validating the effective-capacity law.
//!
//! Each frame independently draws a fading pair and one of the four
//! sensing scenarios, transmits at the policy's secure rate, and updates
//! a data buffer fed by a constant arrival stream:
//! `Q <- max(0, Q + arrival - service)`. If the arrival rate equals the
//! effective secure capacity at exponent `theta`, the stationary queue
//! tail must obey `Pr(Q >= q) ~ e^(-theta q)`; the simulator records the
//! empirical tail and fits its decay exponent so that claim can be
//! checked end to end, independently of the capacity formula.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fading::{exponential, FadingDraw};
use crate::params::{
    derive_constants, state_probabilities, DerivedConstants, Scenario, StateProbabilities,
    SystemParams,
};
use crate::rates::scenario_outcome;
use crate::solver::{solve_branch, Branch, PolicyPair, SolverConfig};
use crate::stats::linear_fit;

/// Number of thresholds in the logarithmic tail grid.
const TAIL_POINTS: usize = 50;
/// Tail-probability band used for the decay fit.
const FIT_P_MIN: f64 = 1e-5;
const FIT_P_MAX: f64 = 1e-1;
/// Minimum number of in-band points for a trustworthy fit.
const MIN_FIT_POINTS: usize = 5;
/// Fewest frames that leave enough post-warm-up samples for tail
/// estimation.
const MIN_FRAMES: usize = 10_000;

/// Where the per-frame transmit powers come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySource {
    /// Solve the optimal policy per frame at this calibrated
    /// interference threshold.
    Threshold(f64),
    /// Use one fixed power pair for every frame.
    Fixed { mu_b: f64, mu_i: f64 },
}

/// One simulation request.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Frames per replication; at least 10^4 so the tail is estimable.
    pub n_frames: usize,
    /// Constant arrival in bits per frame.
    pub arrival_bits: f64,
    /// Base RNG seed; replication `r` uses `seed + r`.
    pub seed: u64,
    pub params: SystemParams,
    pub policy: PolicySource,
    pub solver: SolverConfig,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.solver.validate()?;
        if self.n_frames < MIN_FRAMES {
            return Err(Error::param(
                "n_frames",
                format!(
                    "{} frames cannot resolve the queue tail; need at least {MIN_FRAMES}",
                    self.n_frames
                ),
            ));
        }
        if !(self.arrival_bits >= 0.0) || !self.arrival_bits.is_finite() {
            return Err(Error::param(
                "arrival_bits",
                format!("{} must be finite and non-negative", self.arrival_bits),
            ));
        }
        match self.policy {
            PolicySource::Threshold(gamma0) => {
                if !(gamma0 > 0.0) || !gamma0.is_finite() {
                    return Err(Error::param(
                        "gamma0",
                        format!("{gamma0} must be finite and positive"),
                    ));
                }
            }
            PolicySource::Fixed { mu_b, mu_i } => {
                if !(mu_b >= 0.0) || !mu_b.is_finite() || !(mu_i >= 0.0) || !mu_i.is_finite() {
                    return Err(Error::param(
                        "policy",
                        format!("fixed powers ({mu_b}, {mu_i}) must be finite and non-negative"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Reliability/security bookkeeping for one scenario across all frames.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScenarioTally {
    /// Frames in which this scenario occurred.
    pub frames: u64,
    /// Frames whose attempted rate exceeded the actual channel capacity.
    pub unreliable: u64,
    /// Frames whose confusion rate failed to cover the eavesdropper.
    pub insecure: u64,
}

/// Merged outcome of one or more replications.
#[derive(Debug, Clone)]
pub struct SimResult {
    /// `(q_threshold_bits, Pr(Q >= q))` on a logarithmic threshold grid;
    /// non-increasing in `q`.
    pub queue_tail: Vec<(f64, f64)>,
    /// Fitted tail decay in 1/bits; `None` when too little of the tail
    /// falls in the fit band.
    pub decay_estimate: Option<f64>,
    /// Mean delivered service in bits per frame.
    pub mean_service: f64,
    /// Per-scenario tallies in [`Scenario::ALL`] order.
    pub tallies: [ScenarioTally; 4],
    /// Arrival exceeds mean service: the queue has no stationary tail.
    pub unstable: bool,
    /// Total frames simulated across replications.
    pub n_frames: u64,
}

impl SimResult {
    /// Frames in which the eavesdropper could have decoded, any scenario.
    pub fn security_outages(&self) -> u64 {
        self.tallies.iter().map(|t| t.insecure).sum()
    }

    /// Frames the intended receiver failed to decode, any scenario.
    pub fn reliability_outages(&self) -> u64 {
        self.tallies.iter().map(|t| t.unreliable).sum()
    }
}

/// Raw per-replication output before merging.
struct RawSim {
    /// Post-warm-up queue lengths, in frame order.
    samples: Vec<f64>,
    service_sum: f64,
    tallies: [ScenarioTally; 4],
}

fn scenario_index(k: Scenario) -> usize {
    match k {
        Scenario::BusyDetectedBusy => 0,
        Scenario::BusyDetectedIdle => 1,
        Scenario::IdleDetectedBusy => 2,
        Scenario::IdleDetectedIdle => 3,
    }
}

/// Power pair for one frame. Only the branch selected by the sensing
/// decision is ever transmitted, so the threshold source solves just
/// that branch.
fn frame_policy(
    cfg: &SimConfig,
    detected_busy: bool,
    draw: &FadingDraw,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
) -> Result<PolicyPair> {
    match cfg.policy {
        PolicySource::Fixed { mu_b, mu_i } => Ok(PolicyPair {
            mu_b,
            mu_i,
            iters_b: 0,
            iters_i: 0,
        }),
        PolicySource::Threshold(gamma0) => {
            let branch = if detected_busy {
                Branch::Busy
            } else {
                Branch::Idle
            };
            let (mu, iters) = solve_branch(
                branch,
                draw,
                gamma0,
                &cfg.params,
                consts,
                probs,
                &cfg.solver,
            )?;
            Ok(if detected_busy {
                PolicyPair {
                    mu_b: mu,
                    mu_i: 0.0,
                    iters_b: iters,
                    iters_i: 0,
                }
            } else {
                PolicyPair {
                    mu_b: 0.0,
                    mu_i: mu,
                    iters_b: 0,
                    iters_i: iters,
                }
            })
        }
    }
}

/// One replication: sequential frame recursion from one seed.
///
/// Each frame consumes exactly three uniforms — main gain, eavesdropper
/// gain, scenario — so the stream stays aligned across parameter changes.
/// The first 10% of frames warm the queue up and are excluded from the
/// tail samples; tallies and the service mean cover every frame.
fn run_one(
    cfg: &SimConfig,
    seed: u64,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
) -> Result<RawSim> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let warmup = cfg.n_frames / 10;
    let mut queue = 0.0f64;
    let mut raw = RawSim {
        samples: Vec::with_capacity(cfg.n_frames - warmup),
        service_sum: 0.0,
        tallies: [ScenarioTally::default(); 4],
    };
    for frame in 0..cfg.n_frames {
        let z_m = exponential(&mut rng, cfg.params.sigma2_m);
        let z_e = exponential(&mut rng, cfg.params.sigma2_e);
        let u: f64 = rng.gen();
        let draw = FadingDraw { z_m, z_e };
        let k = Scenario::from_uniform(u, &cfg.params);
        let policy = frame_policy(cfg, k.detected_busy(), &draw, consts, probs)?;
        let outcome = scenario_outcome(k, &draw, &policy, &cfg.params, consts)?;
        let tally = &mut raw.tallies[scenario_index(k)];
        tally.frames += 1;
        if !outcome.reliable {
            tally.unreliable += 1;
        }
        if !outcome.secret {
            tally.insecure += 1;
        }
        raw.service_sum += outcome.service_bits;
        queue = (queue + cfg.arrival_bits - outcome.service_bits).max(0.0);
        if frame >= warmup {
            raw.samples.push(queue);
        }
    }
    Ok(raw)
}

/// Empirical `Pr(Q >= q)` on a [`TAIL_POINTS`]-point logarithmic grid
/// from `max(Q) * 1e-4` up to `max(Q)`. A queue that never left zero
/// reports zero probability on a fixed reference grid.
fn tail_histogram(mut samples: Vec<f64>) -> Vec<(f64, f64)> {
    let total = samples.len() as f64;
    let q_max = samples.iter().cloned().fold(0.0f64, f64::max);
    let steps = (TAIL_POINTS - 1) as f64;
    if q_max <= 0.0 {
        return (0..TAIL_POINTS)
            .map(|i| (1e4f64.powf(i as f64 / steps), 0.0))
            .collect();
    }
    samples.sort_unstable_by(f64::total_cmp);
    let lo = q_max * 1e-4;
    (0..TAIL_POINTS)
        .map(|i| {
            let q = (lo * (q_max / lo).powf(i as f64 / steps)).min(q_max);
            let below = samples.partition_point(|&s| s < q);
            (q, (samples.len() - below) as f64 / total)
        })
        .collect()
}

/// Least-squares decay exponent of `ln Pr(Q >= q)` over the thresholds
/// whose probability lies in `[1e-5, 1e-1]`, negated so a healthy tail
/// yields a positive rate in 1/bits.
pub fn estimate_decay(queue_tail: &[(f64, f64)]) -> Result<f64> {
    let band: Vec<(f64, f64)> = queue_tail
        .iter()
        .filter(|&&(_, p)| (FIT_P_MIN..=FIT_P_MAX).contains(&p))
        .map(|&(q, p)| (q, p.ln()))
        .collect();
    if band.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientTail(format!(
            "{} thresholds with probability in [{FIT_P_MIN:.0e}, {FIT_P_MAX:.0e}]; \
             need at least {MIN_FIT_POINTS}",
            band.len()
        )));
    }
    let (slope, _) = linear_fit(&band)?;
    Ok(-slope)
}

/// Simulate one replication; see [`simulate_replications`].
pub fn simulate_queue(cfg: &SimConfig) -> Result<SimResult> {
    simulate_replications(cfg, 1)
}

/// Run `replications` independent replications (seeds `seed`,
/// `seed + 1`, ...) in parallel and merge their tail samples and
/// tallies. The queue recursion itself is inherently sequential, so this
/// is the simulator's only parallel axis; the merge is in replication
/// order and deterministic regardless of worker count.
pub fn simulate_replications(cfg: &SimConfig, replications: usize) -> Result<SimResult> {
    cfg.validate()?;
    if replications == 0 {
        return Err(Error::EmptyInput(
            "simulate_replications needs at least one replication",
        ));
    }
    let consts = derive_constants(&cfg.params)?;
    let probs = state_probabilities(cfg.params.rho, cfg.params.p_d, cfg.params.p_f)?;
    let raws: Vec<Result<RawSim>> = (0..replications)
        .into_par_iter()
        .map(|r| run_one(cfg, cfg.seed.wrapping_add(r as u64), &consts, &probs))
        .collect();
    let mut samples = Vec::with_capacity(replications * (cfg.n_frames - cfg.n_frames / 10));
    let mut service_sum = 0.0;
    let mut tallies = [ScenarioTally::default(); 4];
    for raw in raws {
        let mut raw = raw?;
        samples.append(&mut raw.samples);
        service_sum += raw.service_sum;
        for (merged, t) in tallies.iter_mut().zip(raw.tallies) {
            merged.frames += t.frames;
            merged.unreliable += t.unreliable;
            merged.insecure += t.insecure;
        }
    }
    let n_frames = (replications * cfg.n_frames) as u64;
    let mean_service = service_sum / n_frames as f64;
    let queue_tail = tail_histogram(samples);
    let decay_estimate = estimate_decay(&queue_tail).ok();
    Ok(SimResult {
        queue_tail,
        decay_estimate,
        mean_service,
        tallies,
        unstable: cfg.arrival_bits > mean_service,
        n_frames,
    })
}
