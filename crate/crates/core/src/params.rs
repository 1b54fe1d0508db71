//! System parameters, derived constants, and the four sensing scenarios.
//!
//! All exogenous scalars of the channel model live in [`SystemParams`]:
//! the primary-user activity prior, the sensing performance pair, noise
//! and interference variances at both secondary receivers, fading
//! variances, bandwidth, frame length, the normalized transmit-power
//! budget (SNR), and the QoS exponent theta.

use crate::error::{Error, Result};

/// Exogenous scalars of the cognitive-radio wiretap channel.
///
/// Power-like quantities are linear (not dB). `snr` is the interference
/// power budget normalized by receiver noise, `P_int / (B * sigma2_nm)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Probability that the primary users are active in a frame.
    pub rho: f64,
    /// Correct-detection probability (busy declared busy).
    pub p_d: f64,
    /// False-alarm probability (idle declared busy).
    pub p_f: f64,
    /// Noise variance at the intended receiver.
    pub sigma2_nm: f64,
    /// Noise variance at the eavesdropping receiver.
    pub sigma2_ne: f64,
    /// Primary-user interference power at the intended receiver.
    pub sigma2_sm: f64,
    /// Primary-user interference power at the eavesdropping receiver.
    pub sigma2_se: f64,
    /// Fading variance of the main channel (mean of `z_m`).
    pub sigma2_m: f64,
    /// Fading variance of the eavesdropper channel (mean of `z_e`).
    pub sigma2_e: f64,
    /// Channel bandwidth in Hz.
    pub bandwidth_b: f64,
    /// Frame duration in seconds.
    pub frame_t: f64,
    /// Transmit-power budget over noise, linear.
    pub snr: f64,
    /// QoS exponent (1/bits); larger means stricter buffer constraints.
    pub theta: f64,
}

impl Default for SystemParams {
    /// Baseline parameter set: unit variances everywhere, `rho = 0.1`,
    /// sensing pair (0.1, 0.9), B = 100 Hz, T = 1 s, SNR = 10 dB,
    /// `theta = 1`.
    fn default() -> Self {
        Self {
            rho: 0.1,
            p_d: 0.9,
            p_f: 0.1,
            sigma2_nm: 1.0,
            sigma2_ne: 1.0,
            sigma2_sm: 1.0,
            sigma2_se: 1.0,
            sigma2_m: 1.0,
            sigma2_e: 1.0,
            bandwidth_b: 100.0,
            frame_t: 1.0,
            snr: db_to_linear(10.0),
            theta: 1.0,
        }
    }
}

impl SystemParams {
    /// Check every field against its domain.
    pub fn validate(&self) -> Result<()> {
        check_probability("rho", self.rho)?;
        check_probability("p_d", self.p_d)?;
        check_probability("p_f", self.p_f)?;
        check_positive("sigma2_nm", self.sigma2_nm)?;
        check_positive("sigma2_ne", self.sigma2_ne)?;
        check_non_negative("sigma2_sm", self.sigma2_sm)?;
        check_non_negative("sigma2_se", self.sigma2_se)?;
        check_non_negative("sigma2_m", self.sigma2_m)?;
        check_non_negative("sigma2_e", self.sigma2_e)?;
        check_positive("bandwidth_b", self.bandwidth_b)?;
        check_positive("frame_t", self.frame_t)?;
        check_positive("snr", self.snr)?;
        check_non_negative("theta", self.theta)?;
        Ok(())
    }

    /// Interference-plus-noise to noise ratio at the intended receiver
    /// when the primary users are active (`beta >= 1`).
    pub fn beta(&self) -> f64 {
        1.0 + self.sigma2_sm / self.sigma2_nm
    }

    /// Replace the interference power at the intended receiver so that
    /// `beta()` equals the requested value (used by beta sweeps).
    pub fn with_beta(mut self, beta: f64) -> Self {
        self.sigma2_sm = (beta - 1.0) * self.sigma2_nm;
        self
    }
}

/// Convert a dB power ratio to linear.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Constants derived from [`SystemParams`] that appear in every rate
/// and power expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Interference-plus-noise ratio between the two receivers under
    /// active primary users.
    pub alpha_b: f64,
    /// Noise ratio between the two receivers under idle primary users.
    pub alpha_i: f64,
    /// Interference-plus-noise to noise ratio at the intended receiver.
    pub beta: f64,
    /// Rate-to-power exponent `theta * T * B / ln 2`; converts a rate in
    /// log2 units inside `exp(-theta * T * r)` into a plain power law.
    pub kappa: f64,
}

/// Compute `alpha_b`, `alpha_i`, `beta`, and `kappa` from validated
/// parameters. Rejects non-positive noise variances.
pub fn derive_constants(params: &SystemParams) -> Result<DerivedConstants> {
    check_positive("sigma2_nm", params.sigma2_nm)?;
    check_positive("sigma2_ne", params.sigma2_ne)?;
    check_non_negative("sigma2_sm", params.sigma2_sm)?;
    check_non_negative("sigma2_se", params.sigma2_se)?;
    check_non_negative("theta", params.theta)?;
    check_positive("frame_t", params.frame_t)?;
    check_positive("bandwidth_b", params.bandwidth_b)?;
    Ok(DerivedConstants {
        alpha_b: (params.sigma2_nm + params.sigma2_sm) / (params.sigma2_ne + params.sigma2_se),
        alpha_i: params.sigma2_nm / params.sigma2_ne,
        beta: params.beta(),
        kappa: params.theta * params.frame_t * params.bandwidth_b / std::f64::consts::LN_2,
    })
}

/// Stationary probabilities of the three service classes of the frame
/// state machine: detected busy, detected idle while idle, and the
/// zero-service miss-detection class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateProbabilities {
    /// Detected busy (correct detection or false alarm).
    pub p_b: f64,
    /// Idle and detected idle.
    pub p_i: f64,
    /// Busy but detected idle (miss-detection, zero service).
    pub p_0: f64,
}

impl StateProbabilities {
    /// Sum in the order that is exact in floating point: `p_i` is
    /// defined as `1 - (p_b + p_0)`, so `(p_b + p_0) + p_i == 1`.
    pub fn sum(&self) -> f64 {
        (self.p_b + self.p_0) + self.p_i
    }
}

/// Scenario probabilities from the activity prior and the sensing pair.
pub fn state_probabilities(rho: f64, p_d: f64, p_f: f64) -> Result<StateProbabilities> {
    check_probability("rho", rho)?;
    check_probability("p_d", p_d)?;
    check_probability("p_f", p_f)?;
    let p_b = rho * p_d + (1.0 - rho) * p_f;
    let p_0 = rho * (1.0 - p_d);
    // p_i = (1-rho)(1-p_f) analytically; defining it as the complement
    // keeps the three-way sum exactly 1.
    let p_i = 1.0 - (p_b + p_0);
    Ok(StateProbabilities { p_b, p_i, p_0 })
}

/// The four transmission scenarios: actual primary-user activity crossed
/// with the sensing decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Busy, detected busy (correct detection).
    BusyDetectedBusy,
    /// Busy, detected idle (miss-detection): zero service.
    BusyDetectedIdle,
    /// Idle, detected busy (false alarm).
    IdleDetectedBusy,
    /// Idle, detected idle (correct detection).
    IdleDetectedIdle,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::BusyDetectedBusy,
        Scenario::BusyDetectedIdle,
        Scenario::IdleDetectedBusy,
        Scenario::IdleDetectedIdle,
    ];

    /// Occurrence probability of this scenario per frame.
    pub fn probability(&self, params: &SystemParams) -> f64 {
        match self {
            Scenario::BusyDetectedBusy => params.rho * params.p_d,
            Scenario::BusyDetectedIdle => params.rho * (1.0 - params.p_d),
            Scenario::IdleDetectedBusy => (1.0 - params.rho) * params.p_f,
            Scenario::IdleDetectedIdle => (1.0 - params.rho) * (1.0 - params.p_f),
        }
    }

    /// Whether the channel was declared busy (transmit power `mu_b`).
    pub fn detected_busy(&self) -> bool {
        matches!(
            self,
            Scenario::BusyDetectedBusy | Scenario::IdleDetectedBusy
        )
    }

    /// Whether the primary users are actually active.
    pub fn actually_busy(&self) -> bool {
        matches!(
            self,
            Scenario::BusyDetectedBusy | Scenario::BusyDetectedIdle
        )
    }

    /// Map a uniform variate in [0, 1) onto a scenario using the
    /// cumulative scenario probabilities.
    pub fn from_uniform(u: f64, params: &SystemParams) -> Scenario {
        let c1 = params.rho * params.p_d;
        let c2 = params.rho;
        let c3 = params.rho + (1.0 - params.rho) * params.p_f;
        if u < c1 {
            Scenario::BusyDetectedBusy
        } else if u < c2 {
            Scenario::BusyDetectedIdle
        } else if u < c3 {
            Scenario::IdleDetectedBusy
        } else {
            Scenario::IdleDetectedIdle
        }
    }

    /// Index 0..4 in the order of [`Scenario::ALL`].
    pub fn index(&self) -> usize {
        match self {
            Scenario::BusyDetectedBusy => 0,
            Scenario::BusyDetectedIdle => 1,
            Scenario::IdleDetectedBusy => 2,
            Scenario::IdleDetectedIdle => 3,
        }
    }
}

/// Validated parameter set with its derived constants and state
/// probabilities, bundled because nearly every operation needs all
/// three. Immutable after construction.
#[derive(Debug, Clone, Copy)]
pub struct Model {
    pub params: SystemParams,
    pub consts: DerivedConstants,
    pub probs: StateProbabilities,
}

impl Model {
    pub fn new(params: SystemParams) -> Result<Model> {
        params.validate()?;
        let consts = derive_constants(&params)?;
        let probs = state_probabilities(params.rho, params.p_d, params.p_f)?;
        Ok(Model {
            params,
            consts,
            probs,
        })
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::param(name, format!("{value} is not in [0, 1]")));
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::param(name, format!("{value} is not positive")));
    }
    Ok(())
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::param(name, format!("{value} is negative")));
    }
    Ok(())
}
