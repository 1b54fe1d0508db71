//! Gauss–Laguerre quadrature for expectations over exponential fading.
//!
//! Both channel power gains are exponentially distributed, so any expectation
//! of the form `E[f(z_m, z_e)]` is a double integral against `e^{-x}` weight
//! functions after rescaling by the means. An `n`-point rule integrates
//! polynomials up to degree `2n - 1` exactly and converges rapidly for the
//! smooth rate integrands used here, which makes it a deterministic
//! cross-check for Monte Carlo estimates.

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Laguerre rule on `[0, ∞)` with
/// weight function `e^{-x}`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Convergence threshold for the Newton refinement of each root.
const ROOT_TOLERANCE: f64 = 3e-14;

/// Newton iterations allowed per root; the asymptotic initial guesses keep
/// the actual count in single digits.
const MAX_NEWTON_ITERS: u32 = 40;

impl GaussLaguerre {
    /// Computes the rule by Newton iteration on the Laguerre recurrence,
    /// seeding each root from standard asymptotic guesses.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "quadrature order must be at least 1"));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..n {
            // Initial guesses: the first two roots from small-root asymptotics,
            // later roots by extrapolating the spacing of their predecessors.
            if i == 0 {
                z = 3.0 / (1.0 + 2.4 * nf);
            } else if i == 1 {
                z += 15.0 / (1.0 + 2.5 * nf);
            } else {
                let ai = (i - 1) as f64;
                z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2]);
            }
            let mut converged = false;
            let mut deriv = 0.0;
            let mut prev = 0.0;
            for _ in 0..MAX_NEWTON_ITERS {
                // Evaluate L_n and L_{n-1} by the three-term recurrence.
                let mut p1 = 1.0;
                let mut p2 = 0.0;
                for k in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let kf = k as f64;
                    p1 = ((2.0 * kf + 1.0 - z) * p2 - kf * p3) / (kf + 1.0);
                }
                // x L_n'(x) = n (L_n(x) - L_{n-1}(x)).
                deriv = nf * (p1 - p2) / z;
                prev = p2;
                let step = p1 / deriv;
                z -= step;
                if step.abs() <= ROOT_TOLERANCE * z.max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NonConvergence {
                    branch: "laguerre root",
                    max_iters: MAX_NEWTON_ITERS,
                    residual: z,
                });
            }
            nodes[i] = z;
            weights[i] = -1.0 / (deriv * nf * prev);
        }
        Ok(Self { nodes, weights })
    }

    /// Number of nodes in the rule.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when the rule has no nodes; never observed for a constructed rule.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Abscissas in strictly increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights aligned with [`Self::nodes`]; they sum to 1.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Approximates `∫₀^∞ f(x) e^{-x} dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Approximates `E[f(Z)]` for `Z` exponential with the given mean. A zero
    /// mean denotes the degenerate point mass at the origin, matching the
    /// convention of the fading sampler.
    pub fn expect_exponential(&self, mean: f64, f: impl Fn(f64) -> f64) -> f64 {
        if mean == 0.0 {
            return f(0.0);
        }
        self.integrate(|x| f(mean * x))
    }

    /// Approximates `E[f(Z_m, Z_e)]` for independent exponential gains with
    /// means `sigma2_m` and `sigma2_e` via the tensor-product rule.
    pub fn expect_fading(&self, sigma2_m: f64, sigma2_e: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.expect_exponential(sigma2_m, |z_m| {
            self.expect_exponential(sigma2_e, |z_e| f(z_m, z_e))
        })
    }

    /// Tensor-product grid as `(z_m, z_e, weight)` triples with gains already
    /// scaled by the means, in row-major node order. Zero-mean axes collapse
    /// to the single gain 0 with unit marginal weight.
    pub fn fading_grid(&self, sigma2_m: f64, sigma2_e: f64) -> Vec<(f64, f64, f64)> {
        let axis = |mean: f64| -> Vec<(f64, f64)> {
            if mean == 0.0 {
                vec![(0.0, 1.0)]
            } else {
                self.nodes
                    .iter()
                    .zip(&self.weights)
                    .map(|(&x, &w)| (mean * x, w))
                    .collect()
            }
        };
        let main = axis(sigma2_m);
        let eave = axis(sigma2_e);
        let mut grid = Vec::with_capacity(main.len() * eave.len());
        for &(z_m, w_m) in &main {
            for &(z_e, w_e) in &eave {
                grid.push((z_m, z_e, w_m * w_e));
            }
        }
        grid
    }
}
