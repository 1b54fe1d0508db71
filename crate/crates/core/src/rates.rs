//! Instantaneous secrecy capacities and the proposed transmission-rate
//! policy.
//!
//! Four scenarios arise from crossing actual primary-user activity with
//! the sensing decision. Each has its own pair of effective SNRs: busy
//! scenarios divide the main-channel SNR by `beta` (primary
//! interference) and scale the eavesdropper SNR by `alpha_b / beta`;
//! idle scenarios use the clean ratios. The transmitter does not know
//! the actual activity, only the sensing decision, so the rate policy
//! protects against the strongest eavesdropper channel consistent with
//! that decision: the confusion rate of a detected-busy frame is pinned
//! to the idle-eavesdropper capacity, which is never smaller than the
//! busy one.

use crate::error::{Error, Result};
use crate::fading::FadingDraw;
use crate::params::{DerivedConstants, Scenario, SystemParams};
use crate::solver::PolicyPair;

/// Relative slack for reliability/secrecy flag comparisons; absorbs the
/// rounding difference between algebraically equal SNR scalings.
const FLAG_TOL: f64 = 1e-9;

/// What one frame actually delivered under a given scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    /// The intended receiver could decode the attempted rate.
    pub reliable: bool,
    /// The confusion rate covered the eavesdropper's actual capacity.
    pub secret: bool,
    /// Bits removed from the transmit buffer this frame.
    pub service_bits: f64,
}

/// Effective SNRs `(zeta_m, zeta_e)` of scenario `k` at power `mu`.
fn scenario_zetas(
    k: Scenario,
    draw: &FadingDraw,
    mu: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
) -> (f64, f64) {
    let s = params.snr * mu;
    if k.actually_busy() {
        (
            draw.z_m * s / consts.beta,
            draw.z_e * consts.alpha_b * s / consts.beta,
        )
    } else {
        (draw.z_m * s, draw.z_e * consts.alpha_i * s)
    }
}

/// Instantaneous secure channel capacity of scenario `k` in bits/s:
/// `[B log2(1 + zeta_m) - B log2(1 + zeta_e)]+`.
pub fn secrecy_capacity(
    k: Scenario,
    draw: &FadingDraw,
    mu: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::param("mu", format!("{mu} is negative")));
    }
    let (zeta_m, zeta_e) = scenario_zetas(k, draw, mu, params, consts);
    let b = params.bandwidth_b;
    Ok((b * (1.0 + zeta_m).log2() - b * (1.0 + zeta_e).log2()).max(0.0))
}

/// Main-rate and confusion-rate portions of the transmission attempted
/// under a sensing decision, in bits/s. The secure rate is their
/// clamped difference.
fn attempted_terms(
    detected_busy: bool,
    draw: &FadingDraw,
    mu: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
) -> (f64, f64) {
    let s = params.snr * mu;
    let b = params.bandwidth_b;
    let zeta_m = if detected_busy {
        draw.z_m * s / consts.beta
    } else {
        draw.z_m * s
    };
    // Detected busy or idle, the confusion rate assumes the eavesdropper
    // channel is free of primary interference (its strongest form).
    let zeta_e = draw.z_e * consts.alpha_i * s;
    (b * (1.0 + zeta_m).log2(), b * (1.0 + zeta_e).log2())
}

/// Secure transmission rate of the proposed policy in bits/s.
///
/// Detected busy: `[B log2(1 + z_m SNR mu / beta) - B log2(1 + z_e
/// alpha_i SNR mu)]+`, zero whenever `z_m <= z_e beta alpha_i`. Detected
/// idle: the scenario-4 secrecy capacity, zero whenever `z_m <= z_e
/// alpha_i`.
pub fn secure_rate(
    detected_busy: bool,
    draw: &FadingDraw,
    mu: f64,
    params: &SystemParams,
    consts: &DerivedConstants,
) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::param("mu", format!("{mu} is negative")));
    }
    let (main, confusion) = attempted_terms(detected_busy, draw, mu, params, consts);
    Ok((main - confusion).max(0.0))
}

/// Judge one frame: was the attempted rate decodable by the intended
/// receiver, did the confusion rate cover the eavesdropper's actual
/// capacity, and how many bits left the buffer.
///
/// The flags are computed from the actual scenario capacities, not
/// assumed. Service follows the frame state machine: a miss-detected
/// frame (busy, sensed idle) is retransmitted and contributes zero
/// service even in the corner case `beta = 1` where the decode would
/// succeed.
pub fn scenario_outcome(
    k: Scenario,
    draw: &FadingDraw,
    policy: &PolicyPair,
    params: &SystemParams,
    consts: &DerivedConstants,
) -> Result<Outcome> {
    if !(policy.mu_b >= 0.0) {
        return Err(Error::param("mu_b", format!("{} is negative", policy.mu_b)));
    }
    if !(policy.mu_i >= 0.0) {
        return Err(Error::param("mu_i", format!("{} is negative", policy.mu_i)));
    }
    let detected_busy = k.detected_busy();
    let mu = if detected_busy {
        policy.mu_b
    } else {
        policy.mu_i
    };
    let rate = secure_rate(detected_busy, draw, mu, params, consts)?;
    if rate == 0.0 {
        // No transmission attempted: nothing to decode or leak.
        return Ok(Outcome {
            reliable: true,
            secret: true,
            service_bits: 0.0,
        });
    }
    let (main, confusion) = attempted_terms(detected_busy, draw, mu, params, consts);
    let (zeta_m, zeta_e) = scenario_zetas(k, draw, mu, params, consts);
    let b = params.bandwidth_b;
    let c_m = b * (1.0 + zeta_m).log2();
    let c_e = b * (1.0 + zeta_e).log2();
    let reliable = main <= c_m + FLAG_TOL * (1.0 + c_m.abs());
    let secret = c_e <= confusion + FLAG_TOL * (1.0 + confusion.abs());
    let service_bits = if k == Scenario::BusyDetectedIdle || !reliable {
        0.0
    } else {
        params.frame_t * rate
    };
    Ok(Outcome {
        reliable,
        secret,
        service_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::sample_fading;
    use crate::params::{derive_constants, Model};
    use proptest::prelude::*;

    /// Unit-bandwidth, unit-SNR parameters with unit variances
    /// (`beta = 2`, `alpha_b = alpha_i = 1`).
    fn unit_model() -> Model {
        Model::new(SystemParams {
            bandwidth_b: 1.0,
            snr: 1.0,
            ..SystemParams::default()
        })
        .unwrap()
    }

    fn pair(mu_b: f64, mu_i: f64) -> PolicyPair {
        PolicyPair {
            mu_b,
            mu_i,
            iters_b: 0,
            iters_i: 0,
        }
    }

    #[test]
    fn s4_capacity_direct_substitution() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 3.0, z_e: 1.0 };
        let c =
            secrecy_capacity(Scenario::IdleDetectedIdle, &draw, 1.0, &m.params, &m.consts).unwrap();
        // log2(4) - log2(2) = 1 bit/s.
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn capacity_clamps_to_zero_when_eavesdropper_wins() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 1.0, z_e: 2.0 };
        for k in Scenario::ALL {
            let c = secrecy_capacity(k, &draw, 1.0, &m.params, &m.consts).unwrap();
            assert_eq!(c, 0.0, "scenario {k:?} not clamped");
        }
    }

    #[test]
    fn zero_power_means_zero_capacity() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 5.0, z_e: 0.1 };
        for k in Scenario::ALL {
            assert_eq!(
                secrecy_capacity(k, &draw, 0.0, &m.params, &m.consts).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn negative_power_rejected() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 1.0, z_e: 1.0 };
        assert!(secrecy_capacity(
            Scenario::IdleDetectedIdle,
            &draw,
            -0.5,
            &m.params,
            &m.consts
        )
        .is_err());
        assert!(secure_rate(true, &draw, -0.5, &m.params, &m.consts).is_err());
        assert!(scenario_outcome(
            Scenario::IdleDetectedIdle,
            &draw,
            &pair(-1.0, 0.0),
            &m.params,
            &m.consts
        )
        .is_err());
    }

    #[test]
    fn busy_rate_direct_substitution() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 3.0, z_e: 1.0 };
        let r = secure_rate(true, &draw, 1.0, &m.params, &m.consts).unwrap();
        // log2(2.5) - log2(2) = log2(1.25).
        assert!((r - 1.25f64.log2()).abs() < 1e-12);
        assert!((r - 0.321928).abs() < 1e-6);
    }

    #[test]
    fn no_eavesdropper_means_no_penalty() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 3.0, z_e: 0.0 };
        let r_busy = secure_rate(true, &draw, 1.0, &m.params, &m.consts).unwrap();
        assert_eq!(r_busy, (1.0 + 1.5f64).log2());
        let r_idle = secure_rate(false, &draw, 1.0, &m.params, &m.consts).unwrap();
        assert_eq!(r_idle, 4.0f64.log2());
    }

    #[test]
    fn busy_rate_zero_exactly_at_clamp_boundary() {
        let m = unit_model();
        // z_m = z_e * beta * alpha_i with beta = 2, alpha_i = 1.
        let draw = FadingDraw { z_m: 2.0, z_e: 1.0 };
        let r = secure_rate(true, &draw, 1.0, &m.params, &m.consts).unwrap();
        assert_eq!(r, 0.0);
        // Idle boundary: z_m = z_e * alpha_i.
        let draw = FadingDraw { z_m: 1.0, z_e: 1.0 };
        let r = secure_rate(false, &draw, 1.0, &m.params, &m.consts).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn busy_rate_never_exceeds_s1_capacity() {
        let m = Model::new(SystemParams::default()).unwrap();
        for draw in sample_fading(17, 2000, &m.params).unwrap() {
            for mu in [0.1, 1.0, 4.0] {
                let r = secure_rate(true, &draw, mu, &m.params, &m.consts).unwrap();
                let c1 =
                    secrecy_capacity(Scenario::BusyDetectedBusy, &draw, mu, &m.params, &m.consts)
                        .unwrap();
                assert!(
                    r <= c1 + 1e-12,
                    "policy rate {r} exceeds S1 capacity {c1} at {draw:?}"
                );
            }
        }
    }

    #[test]
    fn miss_detection_gives_zero_service() {
        let m = unit_model();
        for draw in sample_fading(5, 200, &m.params).unwrap() {
            let o = scenario_outcome(
                Scenario::BusyDetectedIdle,
                &draw,
                &pair(1.0, 1.0),
                &m.params,
                &m.consts,
            )
            .unwrap();
            assert_eq!(o.service_bits, 0.0);
            assert!(o.secret, "miss-detected frame leaked at {draw:?}");
        }
    }

    #[test]
    fn miss_detection_with_transmission_is_unreliable() {
        let m = unit_model();
        // Strong main channel: the idle-rate attempt exceeds the actual
        // interference-limited capacity because beta = 2.
        let draw = FadingDraw { z_m: 8.0, z_e: 0.5 };
        let o = scenario_outcome(
            Scenario::BusyDetectedIdle,
            &draw,
            &pair(1.0, 1.0),
            &m.params,
            &m.consts,
        )
        .unwrap();
        assert!(!o.reliable);
        assert!(o.secret);
        assert_eq!(o.service_bits, 0.0);
    }

    #[test]
    fn zero_power_outcome_is_clean() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 9.0, z_e: 0.1 };
        let o = scenario_outcome(
            Scenario::BusyDetectedBusy,
            &draw,
            &pair(0.0, 1.0),
            &m.params,
            &m.consts,
        )
        .unwrap();
        assert_eq!(o.service_bits, 0.0);
        assert!(o.reliable && o.secret);
    }

    #[test]
    fn false_alarm_outcome_matches_policy_rate() {
        let m = unit_model();
        let draw = FadingDraw { z_m: 3.0, z_e: 1.0 };
        let o = scenario_outcome(
            Scenario::IdleDetectedBusy,
            &draw,
            &pair(1.0, 1.0),
            &m.params,
            &m.consts,
        )
        .unwrap();
        assert!(o.reliable);
        assert!(o.secret);
        assert!((o.service_bits - 0.321928).abs() < 1e-6);
    }

    #[test]
    fn all_scenarios_secret_and_correct_under_baseline() {
        // The policy's confusion rate must cover the eavesdropper in
        // every scenario, and reliability can only fail on
        // miss-detection.
        let m = Model::new(SystemParams::default()).unwrap();
        for draw in sample_fading(23, 2000, &m.params).unwrap() {
            for k in Scenario::ALL {
                let o = scenario_outcome(k, &draw, &pair(0.7, 1.3), &m.params, &m.consts).unwrap();
                assert!(o.secret, "security outage in {k:?} at {draw:?}");
                if k != Scenario::BusyDetectedIdle {
                    assert!(o.reliable, "outage outside scenario 2: {k:?} at {draw:?}");
                }
            }
        }
    }

    #[test]
    fn secrecy_holds_with_asymmetric_interference() {
        // sigma2_se = 0 makes alpha_b = beta * alpha_i, the equality
        // edge of the confusion-rate guarantee.
        let params = SystemParams {
            sigma2_se: 0.0,
            ..SystemParams::default()
        };
        let consts = derive_constants(&params).unwrap();
        for draw in sample_fading(31, 1000, &params).unwrap() {
            for k in Scenario::ALL {
                let o = scenario_outcome(k, &draw, &pair(1.0, 1.0), &params, &consts).unwrap();
                assert!(o.secret, "security outage in {k:?} at {draw:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn rate_non_negative_and_monotone_in_z_m(
            z_m in 0.0..40.0f64,
            z_e in 0.0..40.0f64,
            mu in 0.0..8.0f64,
            detected_busy: bool,
        ) {
            let m = Model::new(SystemParams::default()).unwrap();
            let lo = FadingDraw { z_m, z_e };
            let hi = FadingDraw { z_m: z_m + 0.5, z_e };
            let r_lo = secure_rate(detected_busy, &lo, mu, &m.params, &m.consts).unwrap();
            let r_hi = secure_rate(detected_busy, &hi, mu, &m.params, &m.consts).unwrap();
            prop_assert!(r_lo >= 0.0);
            prop_assert!(r_hi >= r_lo - 1e-9);
        }

        #[test]
        fn rate_non_increasing_in_z_e(
            z_m in 0.0..40.0f64,
            z_e in 0.0..40.0f64,
            mu in 0.0..8.0f64,
            detected_busy: bool,
        ) {
            let m = Model::new(SystemParams::default()).unwrap();
            let lo = FadingDraw { z_m, z_e };
            let hi = FadingDraw { z_m, z_e: z_e + 0.5 };
            let r_lo = secure_rate(detected_busy, &lo, mu, &m.params, &m.consts).unwrap();
            let r_hi = secure_rate(detected_busy, &hi, mu, &m.params, &m.consts).unwrap();
            prop_assert!(r_hi <= r_lo + 1e-9);
        }

        #[test]
        fn rate_non_decreasing_in_mu_above_threshold(
            z_e in 0.01..10.0f64,
            gap in 0.1..10.0f64,
            mu in 0.0..8.0f64,
            detected_busy: bool,
        ) {
            let m = Model::new(SystemParams::default()).unwrap();
            // beta = 2, alpha_i = 1: place z_m strictly above the clamp
            // threshold for the chosen branch.
            let threshold = if detected_busy { 2.0 * z_e } else { z_e };
            let draw = FadingDraw { z_m: threshold + gap, z_e };
            let r_lo = secure_rate(detected_busy, &draw, mu, &m.params, &m.consts).unwrap();
            let r_hi = secure_rate(detected_busy, &draw, mu + 0.25, &m.params, &m.consts).unwrap();
            prop_assert!(r_hi >= r_lo - 1e-9);
        }

        #[test]
        fn capacity_matches_rate_in_scenario_four(
            z_m in 0.0..40.0f64,
            z_e in 0.0..40.0f64,
            mu in 0.0..8.0f64,
        ) {
            let m = Model::new(SystemParams::default()).unwrap();
            let draw = FadingDraw { z_m, z_e };
            let c4 = secrecy_capacity(Scenario::IdleDetectedIdle, &draw, mu, &m.params, &m.consts)
                .unwrap();
            let r_i = secure_rate(false, &draw, mu, &m.params, &m.consts).unwrap();
            prop_assert!((c4 - r_i).abs() <= 1e-12 * (1.0 + c4.abs()));
        }
    }
}
