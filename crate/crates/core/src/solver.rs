//! Optimal transmit-power policies and interference-budget calibration.
//!
//! The capacity-maximizing power levels have a threshold structure: a
//! branch (detected busy or detected idle) transmits only when the
//! fading advantage `z_m - z_e * scale` clears a price proportional to
//! `gamma0`, and the positive power level is the unique fixed point of a
//! monotonically decreasing convex map `H`. The solver mirrors the
//! bracketed fixed-point iteration exactly (its iteration counts are a
//! reported statistic, so the update rules matter, not just the answer);
//! an independent oracle minimizes the per-draw Lagrangian by
//! golden-section search instead and exists purely to cross-check the
//! fixed-point algebra. The outer loop calibrates `gamma0` by bisection
//! so the sensing-weighted average power meets the interference budget
//! with equality.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fading::{sample_fading, FadingDraw};
use crate::params::{DerivedConstants, StateProbabilities, SystemParams};

/// Which sensing decision a power level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Channel declared busy; power `mu_b`.
    Busy,
    /// Channel declared idle; power `mu_i`.
    Idle,
}

/// Tolerances and iteration budgets for the inner fixed-point loop and
/// the outer `gamma0` bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute tolerance on `|mu_new - mu_mid|` for the inner loop.
    pub fp_tolerance: f64,
    /// Inner-loop iteration budget per branch.
    pub max_fp_iters: u32,
    /// Accepted residual `|achieved_power - 1|` for calibration.
    pub gamma_tolerance: f64,
    /// Outer-loop budget counted in average-power evaluations.
    pub max_gamma_iters: u32,
    /// Initial `gamma0` bracket; expanded geometrically if it does not
    /// straddle the constraint.
    pub gamma_bracket: (f64, f64),
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            fp_tolerance: 1e-8,
            max_fp_iters: 500,
            gamma_tolerance: 1e-4,
            max_gamma_iters: 200,
            gamma_bracket: (1e-6, 1e3),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fp_tolerance > 0.0) {
            return Err(Error::param("fp_tolerance", "must be positive"));
        }
        if !(self.gamma_tolerance > 0.0) {
            return Err(Error::param("gamma_tolerance", "must be positive"));
        }
        if self.max_fp_iters == 0 {
            return Err(Error::param("max_fp_iters", "must be at least 1"));
        }
        if self.max_gamma_iters == 0 {
            return Err(Error::param("max_gamma_iters", "must be at least 1"));
        }
        let (lo, hi) = self.gamma_bracket;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::param("gamma_bracket", "requires 0 < low < high"));
        }
        Ok(())
    }
}

/// Normalized powers for one fading draw, with the iteration counts the
/// fixed-point loop needed (0 when a threshold or the degenerate
/// `z_e = 0` form short-circuits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyPair {
    pub mu_b: f64,
    pub mu_i: f64,
    pub iters_b: u32,
    pub iters_i: u32,
}

/// Outcome of calibrating `gamma0` against the interference budget.
#[derive(Debug, Clone)]
pub struct CalibrationResult {
    /// Power-price threshold meeting the constraint.
    pub gamma0: f64,
    /// Sensing-weighted average power at `gamma0`; within
    /// `gamma_tolerance` of 1 on success.
    pub achieved_power: f64,
    /// Number of average-power evaluations spent.
    pub gamma_iters: u32,
    /// Per-draw policies at the calibrated `gamma0`, aligned with the
    /// input draw set.
    pub policies: Vec<PolicyPair>,
}

/// Per-branch coefficients of the fixed-point map and the Lagrangian.
///
/// Both branches share one algebraic shape. With `b' = beta` (busy) or
/// `1` (idle), `scale = b' * alpha_i`, occupancy probability `p` and
/// sensing weight `w` (`p_d` busy, `1 - p_d` idle):
///
/// ```text
/// ratio(X) = ((b' + z_m SNR X) / (b' + z_e scale SNR X))^(-kappa)
/// H(X)     = ((z_m - z_e scale) sqrt(1 + Phi) - (z_m + z_e scale))
///            / (2 z_m z_e alpha_i SNR)
/// Phi      = 4 z_m z_e alpha_i p ratio(X) / (gamma0 w (z_m - z_e scale))
/// J(mu)    = p ratio(mu) + gamma0 kappa SNR w mu
/// ```
///
/// `H`'s fixed point is the stationary point of `J`, and `H(0) > 0`
/// exactly when the transmit threshold `z_m - z_e scale > gamma0 w b'/p`
/// holds strictly.
#[derive(Debug, Clone, Copy)]
struct BranchCoefs {
    name: &'static str,
    beta_eff: f64,
    scale: f64,
    p: f64,
    weight: f64,
    alpha_i: f64,
    snr: f64,
    kappa: f64,
}

impl BranchCoefs {
    fn new(
        branch: Branch,
        params: &SystemParams,
        consts: &DerivedConstants,
        probs: &StateProbabilities,
    ) -> Self {
        match branch {
            Branch::Busy => BranchCoefs {
                name: "busy",
                beta_eff: consts.beta,
                scale: consts.beta * consts.alpha_i,
                p: probs.p_b,
                weight: params.p_d,
                alpha_i: consts.alpha_i,
                snr: params.snr,
                kappa: consts.kappa,
            },
            Branch::Idle => BranchCoefs {
                name: "idle",
                beta_eff: 1.0,
                scale: consts.alpha_i,
                p: probs.p_i,
                weight: 1.0 - params.p_d,
                alpha_i: consts.alpha_i,
                snr: params.snr,
                kappa: consts.kappa,
            },
        }
    }

    /// Transmit threshold on `z_m - z_e * scale`.
    fn threshold(&self, gamma0: f64) -> f64 {
        gamma0 * self.weight * self.beta_eff / self.p
    }

    /// `ratio(X)`, the power-law factor of the fixed-point map.
    fn ratio_pow(&self, draw: &FadingDraw, x: f64) -> f64 {
        let s = self.snr;
        let num = self.beta_eff + draw.z_m * s * x;
        let den = self.beta_eff + draw.z_e * self.scale * s * x;
        (num / den).powf(-self.kappa)
    }

    /// The fixed-point map `H(x)`; requires `z_m z_e > 0` and
    /// `z_m > z_e * scale`.
    fn h(&self, draw: &FadingDraw, gamma0: f64, x: f64) -> f64 {
        let diff = draw.z_m - draw.z_e * self.scale;
        let phi = 4.0 * draw.z_m * draw.z_e * self.alpha_i * self.p * self.ratio_pow(draw, x)
            / (gamma0 * self.weight * diff);
        (diff * (1.0 + phi).sqrt() - (draw.z_m + draw.z_e * self.scale))
            / (2.0 * draw.z_m * draw.z_e * self.alpha_i * self.snr)
    }

    /// Per-draw Lagrangian whose minimizer over `mu >= 0` is the
    /// optimal power; the multiplier is `gamma0 * kappa * SNR`.
    fn lagrangian(&self, draw: &FadingDraw, gamma0: f64, mu: f64) -> f64 {
        self.p * self.ratio_pow(draw, mu) + gamma0 * self.kappa * self.snr * self.weight * mu
    }

    /// Closed-form optimum when `z_e = 0` (no eavesdropper link): the
    /// Lagrangian stationary point of `p (1 + z_m SNR mu / b')^(-kappa)`
    /// plus the linear power price.
    fn degenerate_mu(&self, draw: &FadingDraw, gamma0: f64) -> f64 {
        if draw.z_m == 0.0 {
            return 0.0;
        }
        let base = self.p * draw.z_m / (gamma0 * self.weight * self.beta_eff);
        if !(base > 1.0) {
            return 0.0;
        }
        self.beta_eff / (draw.z_m * self.snr) * (base.powf(1.0 / (self.kappa + 1.0)) - 1.0)
    }

    /// Solve one branch: threshold short-circuit, degenerate `z_e = 0`
    /// form, or the bracketed fixed-point iteration.
    fn solve(&self, draw: &FadingDraw, gamma0: f64, cfg: &SolverConfig) -> Result<(f64, u32)> {
        if self.p == 0.0 {
            // This sensing decision never occurs; its power is unused.
            return Ok((0.0, 0));
        }
        if self.weight == 0.0 {
            return Err(Error::param(
                "p_d",
                format!(
                    "the {} branch carries zero weight in the interference \
                     constraint, so its optimal power is unbounded",
                    self.name
                ),
            ));
        }
        if draw.z_e == 0.0 {
            return Ok((self.degenerate_mu(draw, gamma0), 0));
        }
        let diff = draw.z_m - draw.z_e * self.scale;
        if !(diff > self.threshold(gamma0)) {
            return Ok((0.0, 0));
        }

        // Bracketed fixed-point iteration. `mid` is the trial point and
        // each H evaluation inside the loop counts as one iteration.
        //
        // The damped-Picard update rules converge quickly when H is
        // mild (the regime the iteration-count statistics describe) but
        // can settle into a slow limit cycle of X -> H(H(X)) when H is
        // steep, which happens at the extreme gamma0 probes of
        // calibration bracketing. X - H(X) is strictly increasing, so
        // every evaluation also certifies on which side of the trial
        // point the fixed point lies; past a stall budget the loop
        // switches to bisecting that certified interval, which always
        // converges.
        const STALL_BUDGET: u32 = 64;
        let mut lo = 0.0;
        let mut hi = self.h(draw, gamma0, 0.0);
        let mut mid = 0.5 * hi;
        let mut certified: (f64, f64) = (0.0, hi);
        let mut iters = 0u32;
        let mut residual = f64::INFINITY;
        loop {
            iters += 1;
            if iters > cfg.max_fp_iters {
                return Err(Error::NonConvergence {
                    branch: self.name,
                    max_iters: cfg.max_fp_iters,
                    residual,
                });
            }
            let mu = self.h(draw, gamma0, mid);
            residual = (mu - mid).abs();
            if residual <= cfg.fp_tolerance {
                return Ok((mu.max(0.0), iters));
            }
            if mu > mid {
                certified.0 = certified.0.max(mid);
            } else {
                certified.1 = certified.1.min(mid);
            }
            if iters >= STALL_BUDGET {
                mid = 0.5 * (certified.0 + certified.1);
            } else if mu > hi {
                lo = mid;
                mid = 0.5 * (lo + hi);
            } else if mu > mid {
                lo = mid;
                mid = mu;
                hi = mu;
            } else if mu > lo {
                hi = mid;
                lo = mu;
                mid = mu;
            } else {
                hi = mid;
                mid = 0.5 * (lo + hi);
            }
        }
    }
}

/// Evaluate the fixed-point map `H_b` or `H_i` at `x`.
///
/// Defined when the threshold inequality holds at least with equality
/// (the boundary itself is admissible and gives `H(0) = 0`) and
/// `z_e > 0`; below the threshold the optimal power is identically zero
/// and the map is not meaningful, so that is an error, as is the
/// degenerate `z_e = 0` case handled by [`solve_policy`]'s closed form.
pub fn fixed_point_rhs(
    branch: Branch,
    x: f64,
    draw: &FadingDraw,
    gamma0: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
) -> Result<f64> {
    if !(gamma0 > 0.0) {
        return Err(Error::param("gamma0", format!("{gamma0} is not positive")));
    }
    if !(x >= 0.0) {
        return Err(Error::param("x", format!("{x} is negative")));
    }
    if draw.z_e == 0.0 {
        return Err(Error::param(
            "z_e",
            "the fixed-point map divides by z_e; use the degenerate closed form",
        ));
    }
    let coefs = BranchCoefs::new(branch, params, consts, probs);
    let diff = draw.z_m - draw.z_e * coefs.scale;
    if !(diff >= coefs.threshold(gamma0)) {
        return Err(Error::param(
            "threshold",
            format!(
                "z_m - z_e*scale = {diff} is below the {} transmit threshold \
                 {}; the optimal power is zero",
                coefs.name,
                coefs.threshold(gamma0)
            ),
        ));
    }
    Ok(coefs.h(draw, gamma0, x))
}

/// Compute both optimal powers for one draw at a given `gamma0`.
pub fn solve_policy(
    draw: &FadingDraw,
    gamma0: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
    cfg: &SolverConfig,
) -> Result<PolicyPair> {
    let (mu_b, iters_b) = solve_branch(Branch::Busy, draw, gamma0, params, consts, probs, cfg)?;
    let (mu_i, iters_i) = solve_branch(Branch::Idle, draw, gamma0, params, consts, probs, cfg)?;
    Ok(PolicyPair {
        mu_b,
        mu_i,
        iters_b,
        iters_i,
    })
}

/// Optimal power and iteration count for a single detection branch; the
/// quadrature path integrates each branch on its own grid and so solves
/// them one at a time.
#[allow(clippy::too_many_arguments)]
pub fn solve_branch(
    branch: Branch,
    draw: &FadingDraw,
    gamma0: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
    cfg: &SolverConfig,
) -> Result<(f64, u32)> {
    cfg.validate()?;
    if !(gamma0 > 0.0) {
        return Err(Error::param("gamma0", format!("{gamma0} is not positive")));
    }
    if !(params.theta > 0.0) {
        return Err(Error::param(
            "theta",
            "the power policy is defined for theta > 0",
        ));
    }
    BranchCoefs::new(branch, params, consts, probs).solve(draw, gamma0, cfg)
}

/// Per-draw branch Lagrangian `p * f(mu) + gamma0 * kappa * SNR * w * mu`,
/// the objective whose minimizer over `mu >= 0` is the optimal power.
///
/// Exposed for value-level oracle checks: when the objective is very flat
/// around its minimum, two near-optimal powers can sit far apart in `mu`
/// while their objective values agree to machine precision, and comparing
/// the values is the meaningful test.
#[allow(clippy::too_many_arguments)]
pub fn lagrangian(
    branch: Branch,
    draw: &FadingDraw,
    gamma0: f64,
    mu: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
) -> Result<f64> {
    if !(gamma0 > 0.0) {
        return Err(Error::param("gamma0", format!("{gamma0} is not positive")));
    }
    if !(mu >= 0.0) {
        return Err(Error::param("mu", format!("power {mu} is negative")));
    }
    Ok(BranchCoefs::new(branch, params, consts, probs).lagrangian(draw, gamma0, mu))
}

/// Transmit-activation boundary of a branch at a given `gamma0`, as
/// `(scale, offset)`: the optimal power is positive exactly when
/// `z_m > scale * z_e + offset`. A branch with zero scenario probability
/// never transmits, reported as an infinite offset.
///
/// The quadrature path shifts its main-gain axis to start on this line, so
/// the integrand it resolves is smooth.
pub fn activation_line(
    branch: Branch,
    gamma0: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
) -> Result<(f64, f64)> {
    if !(gamma0 > 0.0) {
        return Err(Error::param("gamma0", format!("{gamma0} is not positive")));
    }
    let coefs = BranchCoefs::new(branch, params, consts, probs);
    if coefs.p == 0.0 {
        return Ok((coefs.scale, f64::INFINITY));
    }
    if coefs.weight == 0.0 {
        return Err(Error::param(
            "p_d",
            format!(
                "the {} branch carries zero weight in the interference \
                 constraint, so its optimal power is unbounded",
                coefs.name
            ),
        ));
    }
    Ok((coefs.scale, coefs.threshold(gamma0)))
}

/// Independent check on [`solve_policy`]: minimize the per-draw
/// Lagrangian directly by golden-section search, never using the
/// fixed-point algebra.
pub fn oracle_policy(
    branch: Branch,
    draw: &FadingDraw,
    gamma0: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
) -> Result<f64> {
    if !(gamma0 > 0.0) {
        return Err(Error::param("gamma0", format!("{gamma0} is not positive")));
    }
    if !(params.theta > 0.0) {
        return Err(Error::param(
            "theta",
            "the power policy is defined for theta > 0",
        ));
    }
    let coefs = BranchCoefs::new(branch, params, consts, probs);
    if coefs.p == 0.0 {
        return Ok(0.0);
    }
    if coefs.weight == 0.0 {
        return Err(Error::param(
            "p_d",
            format!(
                "the {} branch carries zero weight in the interference \
                 constraint, so its optimal power is unbounded",
                coefs.name
            ),
        ));
    }
    let objective = |mu: f64| coefs.lagrangian(draw, gamma0, mu);

    // Bracket the minimizer. Above the threshold the fixed point lies in
    // [0, H(0)], so 10*H(0) is a safe upper end; otherwise (including
    // z_e = 0) double until the objective has risen past its value at 0,
    // which a convex objective guarantees brackets the argmin.
    let diff = draw.z_m - draw.z_e * coefs.scale;
    let hi = if draw.z_e > 0.0 && diff > coefs.threshold(gamma0) {
        10.0 * coefs.h(draw, gamma0, 0.0)
    } else {
        let at_zero = objective(0.0);
        let mut hi = 1.0;
        let mut doublings = 0u32;
        while objective(hi) <= at_zero {
            hi *= 2.0;
            doublings += 1;
            if doublings > 200 {
                return Err(Error::NonConvergence {
                    branch: "oracle bracket expansion",
                    max_iters: 200,
                    residual: hi,
                });
            }
        }
        hi
    };
    Ok(golden_min(objective, 0.0, hi, 1e-9))
}

/// Golden-section minimization of a unimodal function on `[a, b]` to an
/// interval of width `tol`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Sensing-weighted average power `p_d * mean(mu_b) + (1 - p_d) *
/// mean(mu_i)`, the left side of the interference constraint.
pub fn average_power(policies: &[PolicyPair], p_d: f64) -> Result<f64> {
    if policies.is_empty() {
        return Err(Error::EmptyInput("average_power needs at least one policy"));
    }
    let n = policies.len() as f64;
    let mut sum_b = 0.0;
    let mut sum_i = 0.0;
    for p in policies {
        sum_b += p.mu_b;
        sum_i += p.mu_i;
    }
    Ok(p_d * (sum_b / n) + (1.0 - p_d) * (sum_i / n))
}

/// Solve every draw at a fixed `gamma0`, in parallel, preserving draw
/// order.
pub fn solve_policies(
    draws: &[FadingDraw],
    gamma0: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
    cfg: &SolverConfig,
) -> Result<Vec<PolicyPair>> {
    draws
        .par_iter()
        .map(|d| solve_policy(d, gamma0, params, consts, probs, cfg))
        .collect()
}

/// Calibrate `gamma0` so the average interference power meets its budget
/// with equality.
///
/// The same draw set is reused for every trial (common random numbers),
/// making the achieved power a deterministic non-increasing function of
/// `gamma0`; bisection runs in log space after expanding the bracket
/// geometrically until it straddles the budget.
pub fn calibrate_gamma(
    draws: &[FadingDraw],
    params: &SystemParams,
    consts: &DerivedConstants,
    probs: &StateProbabilities,
    cfg: &SolverConfig,
) -> Result<CalibrationResult> {
    if draws.is_empty() {
        return Err(Error::EmptyInput("calibrate_gamma needs a draw set"));
    }
    let evaluate = |gamma0: f64| -> Result<(f64, Vec<PolicyPair>)> {
        let policies = solve_policies(draws, gamma0, params, consts, probs, cfg)?;
        let achieved = average_power(&policies, params.p_d)?;
        Ok((achieved, policies))
    };
    let (gamma0, achieved_power, gamma_iters, policies) = calibrate_on(evaluate, cfg)?;
    Ok(CalibrationResult {
        gamma0,
        achieved_power,
        gamma_iters,
        policies,
    })
}

/// Root-finds `gamma0` so that `evaluate`'s achieved power meets the unit
/// budget, carrying an arbitrary payload alongside the power value.
///
/// `evaluate` maps a `gamma0` trial to `(achieved_power, payload)`; the
/// payload of the accepted trial is returned. Shared by the Monte Carlo
/// and quadrature calibration paths, which differ only in how they take
/// the power expectation.
///
/// Returns `(gamma0, achieved_power, evaluation_count, payload)`.
pub(crate) fn calibrate_on<T>(
    mut evaluate: impl FnMut(f64) -> Result<(f64, T)>,
    cfg: &SolverConfig,
) -> Result<(f64, f64, u32, T)> {
    cfg.validate()?;
    let mut iters = 0u32;

    // Expand the bracket until achieved(lo) >= 1 >= achieved(hi),
    // returning immediately if any probe already meets the budget.
    let (mut lo, mut hi) = cfg.gamma_bracket;
    iters += 1;
    let (mut a_lo, mut payload) = evaluate(lo)?;
    while (a_lo - 1.0).abs() > cfg.gamma_tolerance && a_lo < 1.0 {
        lo /= 10.0;
        if lo < 1e-30 {
            return Err(Error::CalibrationFailure(format!(
                "average power stays below the budget even as gamma0 -> 0 \
                 (achieved {a_lo:.6} at gamma0 {:.3e})",
                lo * 10.0
            )));
        }
        iters += 1;
        (a_lo, payload) = evaluate(lo)?;
    }
    if (a_lo - 1.0).abs() <= cfg.gamma_tolerance {
        return Ok((lo, a_lo, iters, payload));
    }
    iters += 1;
    let (mut a_hi, mut payload) = evaluate(hi)?;
    while (a_hi - 1.0).abs() > cfg.gamma_tolerance && a_hi > 1.0 {
        hi *= 10.0;
        if hi > 1e30 {
            return Err(Error::CalibrationFailure(format!(
                "average power stays above the budget even as gamma0 -> inf \
                 (achieved {a_hi:.6} at gamma0 {:.3e})",
                hi / 10.0
            )));
        }
        iters += 1;
        (a_hi, payload) = evaluate(hi)?;
    }
    if (a_hi - 1.0).abs() <= cfg.gamma_tolerance {
        return Ok((hi, a_hi, iters, payload));
    }
    drop(payload);

    // Log-space bisection on the straddling bracket.
    while iters < cfg.max_gamma_iters {
        let mid = (lo * hi).sqrt();
        iters += 1;
        let (achieved, payload) = evaluate(mid)?;
        if (achieved - 1.0).abs() <= cfg.gamma_tolerance {
            return Ok((mid, achieved, iters, payload));
        }
        if achieved > 1.0 {
            lo = mid;
            a_lo = achieved;
        } else {
            hi = mid;
            a_hi = achieved;
        }
        if hi - lo <= f64::EPSILON * hi {
            return Err(Error::CalibrationFailure(format!(
                "bracket collapsed at gamma0 = {mid:.9e} with residuals \
                 {:.3e} / {:.3e}; the draw set cannot meet the budget to \
                 tolerance {:.1e}",
                a_lo - 1.0,
                a_hi - 1.0,
                cfg.gamma_tolerance
            )));
        }
    }
    Err(Error::CalibrationFailure(format!(
        "no gamma0 within tolerance after {iters} evaluations \
         (bracket [{lo:.6e}, {hi:.6e}], residuals {:.3e} / {:.3e})",
        a_lo - 1.0,
        a_hi - 1.0
    )))
}

/// Distribution of per-draw convergence effort after calibration:
/// `max(iters_b, iters_i)` mapped to its empirical probability, sorted
/// by iteration count.
pub fn iteration_histogram(
    params: &SystemParams,
    cfg: &SolverConfig,
    seed: u64,
    n: usize,
) -> Result<Vec<(u32, f64)>> {
    if n < 10_000 {
        return Err(Error::param(
            "n",
            format!("{n} draws are too few for an iteration histogram; need at least 10000"),
        ));
    }
    params.validate()?;
    let consts = crate::params::derive_constants(params)?;
    let probs = crate::params::state_probabilities(params.rho, params.p_d, params.p_f)?;
    let draws = sample_fading(seed, n, params)?;
    let cal = calibrate_gamma(&draws, params, &consts, &probs, cfg)?;
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for p in &cal.policies {
        *counts.entry(p.iters_b.max(p.iters_i)).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(k, v)| (k, v as f64 / n as f64))
        .collect())
}
