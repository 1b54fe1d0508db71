//! Fading-gain sampling for the main and eavesdropper channels.
//!
//! Both channels experience independent Rayleigh fading, so the power
//! gains `z_m` and `z_e` are exponential with means `sigma2_m` and
//! `sigma2_e`. Sampling is by inverse CDF from a counter-based seeded
//! generator, which makes every draw set reproducible from a single
//! `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// One joint fading realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    /// Power gain of the main (intended) channel.
    pub z_m: f64,
    /// Power gain of the eavesdropper channel.
    pub z_e: f64,
}

/// Draw `n` joint fading realizations deterministically from `seed`.
///
/// Each draw consumes exactly two uniforms, first for `z_m`, then for
/// `z_e`, regardless of the variances. A degenerate variance of zero
/// still consumes its uniform and yields a gain of exactly zero, so the
/// generator stream stays aligned across parameter sweeps that share a
/// seed.
pub fn sample_fading(seed: u64, n: usize, params: &SystemParams) -> Result<Vec<FadingDraw>> {
    if n == 0 {
        return Err(Error::EmptyInput("sample_fading requires n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(n);
    for _ in 0..n {
        let z_m = exponential(&mut rng, params.sigma2_m);
        let z_e = exponential(&mut rng, params.sigma2_e);
        draws.push(FadingDraw { z_m, z_e });
    }
    Ok(draws)
}

/// Inverse-CDF exponential variate with the given mean. Always consumes
/// one uniform; a zero mean collapses to a point mass at zero.
pub(crate) fn exponential<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    let u: f64 = rng.gen::<f64>();
    if mean == 0.0 {
        return 0.0;
    }
    // u is in [0, 1), so 1 - u is in (0, 1] and the log is finite.
    mean * -(1.0 - u).ln()
}
