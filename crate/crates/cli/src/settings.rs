//! Merged run configuration.
//!
//! Three layers, later wins: built-in defaults, a flat `key=value`
//! configuration file, then command-line flags of the same names. Every
//! key is validated at assignment time so file entries and flags report
//! identical diagnostics.

use std::fs;
use std::path::Path;

use effsec::capacity::{SweepAxis, SweepSpec};
use effsec::params::{db_to_linear, SystemParams};
use effsec::report::sig9;
use effsec::solver::SolverConfig;
use effsec::Result;

/// Capacity estimator selection for `eval`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Monte Carlo over `draws` fading realizations (default).
    MonteCarlo,
    /// Tensor Gauss-Laguerre quadrature with `nodes` points per axis.
    Quadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::MonteCarlo => "mc",
            Method::Quadrature => "quadrature",
        }
    }
}

/// Transmit-power policy for `simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Calibrate `gamma0` first, then solve the optimal policy per frame.
    Threshold,
    /// One fixed `(mu_b, mu_i)` pair for every frame.
    Fixed,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Threshold => "threshold",
            Policy::Fixed => "fixed",
        }
    }
}

/// Every configuration key with its merged value.
#[derive(Debug, Clone)]
pub struct Settings {
    // Channel model. `snr_db` is the dB interface value; conversion to
    // the linear budget happens in [`Settings::params`].
    pub theta: f64,
    pub snr_db: f64,
    pub rho: f64,
    pub p_d: f64,
    pub p_f: f64,
    pub sigma2_nm: f64,
    pub sigma2_ne: f64,
    pub sigma2_sm: f64,
    pub sigma2_se: f64,
    pub sigma2_m: f64,
    pub sigma2_e: f64,
    pub bandwidth: f64,
    pub frame: f64,
    // Solver tolerances and budgets.
    pub fp_tolerance: f64,
    pub max_fp_iters: u32,
    pub gamma_tolerance: f64,
    pub max_gamma_iters: u32,
    // Run control.
    pub seed: u64,
    pub draws: usize,
    pub nodes: usize,
    pub method: Method,
    /// Rayon pool size; 0 keeps the library default. Reductions are in
    /// fixed order, so this cannot change any artifact byte.
    pub threads: usize,
    pub output: Option<String>,
    // Sweep axis.
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub sensing: Vec<(f64, f64)>,
    // Queue simulation.
    pub frames: usize,
    pub arrival_bits: Option<f64>,
    pub arrival_fraction: Option<f64>,
    pub replications: usize,
    pub policy: Policy,
    pub mu_b: f64,
    pub mu_i: f64,
}

impl Default for Settings {
    /// Baseline channel (unit variances, sensing (0.1, 0.9), B = 100 Hz,
    /// T = 1 s, SNR = 10 dB, theta = 1), default solver tolerances, and
    /// run sizes matching the baseline experiments.
    fn default() -> Self {
        let solver = SolverConfig::default();
        Self {
            theta: 1.0,
            snr_db: 10.0,
            rho: 0.1,
            p_d: 0.9,
            p_f: 0.1,
            sigma2_nm: 1.0,
            sigma2_ne: 1.0,
            sigma2_sm: 1.0,
            sigma2_se: 1.0,
            sigma2_m: 1.0,
            sigma2_e: 1.0,
            bandwidth: 100.0,
            frame: 1.0,
            fp_tolerance: solver.fp_tolerance,
            max_fp_iters: solver.max_fp_iters,
            gamma_tolerance: solver.gamma_tolerance,
            max_gamma_iters: solver.max_gamma_iters,
            seed: 42,
            draws: 100_000,
            nodes: 32,
            method: Method::MonteCarlo,
            threads: 0,
            output: None,
            axis: SweepAxis::Theta,
            grid: vec![1e-3, 1e-2, 1e-1, 1.0, 10.0],
            sensing: vec![(0.4, 0.6), (0.1, 0.9)],
            frames: 1_000_000,
            arrival_bits: None,
            arrival_fraction: None,
            replications: 1,
            policy: Policy::Threshold,
            mu_b: 1.0,
            mu_i: 1.0,
        }
    }
}

fn float(key: &str, value: &str) -> std::result::Result<f64, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value for `{key}`: `{value}` is not a number"))
}

fn integer<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value for `{key}`: `{value}` is not a non-negative integer"))
}

/// Comma-separated floats, e.g. `1e-3,1e-2,0.1,1,10`.
fn parse_grid(value: &str) -> std::result::Result<Vec<f64>, String> {
    value
        .split(',')
        .map(|item| float("grid", item.trim()))
        .collect()
}

/// Comma-separated `P_f:P_d` pairs, e.g. `0.1:0.9,0.2:0.8`.
fn parse_sensing(value: &str) -> std::result::Result<Vec<(f64, f64)>, String> {
    value
        .split(',')
        .map(|item| {
            let item = item.trim();
            let Some((p_f, p_d)) = item.split_once(':') else {
                return Err(format!(
                    "invalid value for `sensing`: `{item}` is not a `P_f:P_d` pair"
                ));
            };
            Ok((float("sensing", p_f.trim())?, float("sensing", p_d.trim())?))
        })
        .collect()
}

impl Settings {
    /// Assign one key. Unknown keys and malformed values are reported
    /// with the key named, for both file entries and flags.
    pub fn apply(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "theta" => self.theta = float(key, value)?,
            "snr_db" => self.snr_db = float(key, value)?,
            "rho" => self.rho = float(key, value)?,
            "p_d" => self.p_d = float(key, value)?,
            "p_f" => self.p_f = float(key, value)?,
            "sigma2_nm" => self.sigma2_nm = float(key, value)?,
            "sigma2_ne" => self.sigma2_ne = float(key, value)?,
            "sigma2_sm" => self.sigma2_sm = float(key, value)?,
            "sigma2_se" => self.sigma2_se = float(key, value)?,
            "sigma2_m" => self.sigma2_m = float(key, value)?,
            "sigma2_e" => self.sigma2_e = float(key, value)?,
            "bandwidth" => self.bandwidth = float(key, value)?,
            "frame" => self.frame = float(key, value)?,
            "fp_tolerance" => self.fp_tolerance = float(key, value)?,
            "max_fp_iters" => self.max_fp_iters = integer(key, value)?,
            "gamma_tolerance" => self.gamma_tolerance = float(key, value)?,
            "max_gamma_iters" => self.max_gamma_iters = integer(key, value)?,
            "seed" => self.seed = integer(key, value)?,
            "draws" => self.draws = integer(key, value)?,
            "nodes" => self.nodes = integer(key, value)?,
            "method" => {
                self.method = match value {
                    "mc" => Method::MonteCarlo,
                    "quadrature" => Method::Quadrature,
                    _ => {
                        return Err(format!(
                        "invalid value for `method`: expected `mc` or `quadrature`, got `{value}`"
                    ))
                    }
                }
            }
            "threads" => self.threads = integer(key, value)?,
            "output" => self.output = Some(value.to_string()),
            "axis" => {
                self.axis = match value {
                    "theta" => SweepAxis::Theta,
                    "snr_db" => SweepAxis::Snr,
                    "beta" => SweepAxis::Beta,
                    "sensing" => SweepAxis::Sensing,
                    _ => {
                        return Err(format!(
                            "invalid value for `axis`: expected `theta`, `snr_db`, `beta`, or \
                             `sensing`, got `{value}`"
                        ))
                    }
                }
            }
            "grid" => self.grid = parse_grid(value)?,
            "sensing" => self.sensing = parse_sensing(value)?,
            "frames" => self.frames = integer(key, value)?,
            "arrival_bits" => self.arrival_bits = Some(float(key, value)?),
            "arrival_fraction" => self.arrival_fraction = Some(float(key, value)?),
            "replications" => self.replications = integer(key, value)?,
            "policy" => {
                self.policy = match value {
                    "threshold" => Policy::Threshold,
                    "fixed" => Policy::Fixed,
                    _ => {
                        return Err(format!(
                            "invalid value for `policy`: expected `threshold` or `fixed`, got \
                             `{value}`"
                        ))
                    }
                }
            }
            "mu_b" => self.mu_b = float(key, value)?,
            "mu_i" => self.mu_i = float(key, value)?,
            _ => return Err(format!("unknown configuration key `{key}`")),
        }
        Ok(())
    }

    /// Apply a `key=value` file: one assignment per line, `#` comments
    /// and blank lines ignored.
    pub fn load_file(&mut self, path: &Path) -> std::result::Result<(), String> {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "{}:{}: expected `key=value`, got `{line}`",
                    path.display(),
                    index + 1
                ));
            };
            self.apply(key.trim(), value.trim())
                .map_err(|e| format!("{}:{}: {e}", path.display(), index + 1))?;
        }
        Ok(())
    }

    /// Channel parameters with the dB budget converted to linear.
    pub fn params(&self) -> SystemParams {
        SystemParams {
            rho: self.rho,
            p_d: self.p_d,
            p_f: self.p_f,
            sigma2_nm: self.sigma2_nm,
            sigma2_ne: self.sigma2_ne,
            sigma2_sm: self.sigma2_sm,
            sigma2_se: self.sigma2_se,
            sigma2_m: self.sigma2_m,
            sigma2_e: self.sigma2_e,
            bandwidth_b: self.bandwidth,
            frame_t: self.frame,
            snr: db_to_linear(self.snr_db),
            theta: self.theta,
        }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            fp_tolerance: self.fp_tolerance,
            max_fp_iters: self.max_fp_iters,
            gamma_tolerance: self.gamma_tolerance,
            max_gamma_iters: self.max_gamma_iters,
            ..SolverConfig::default()
        }
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let fixed = self.params();
        match self.axis {
            SweepAxis::Sensing => SweepSpec::sensing_pairs(self.sensing.clone(), fixed),
            axis => SweepSpec::new(axis, self.grid.clone(), fixed),
        }
    }

    /// Sidecar pairs shared by every command: provenance, seed, and the
    /// full channel and solver configuration.
    pub fn common_pairs(&self, command: &'static str) -> Vec<(&'static str, String)> {
        vec![
            ("command", command.to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("seed", self.seed.to_string()),
            ("threads", self.threads.to_string()),
            ("theta", sig9(self.theta)),
            ("snr_db", sig9(self.snr_db)),
            ("rho", sig9(self.rho)),
            ("p_d", sig9(self.p_d)),
            ("p_f", sig9(self.p_f)),
            ("sigma2_nm", sig9(self.sigma2_nm)),
            ("sigma2_ne", sig9(self.sigma2_ne)),
            ("sigma2_sm", sig9(self.sigma2_sm)),
            ("sigma2_se", sig9(self.sigma2_se)),
            ("sigma2_m", sig9(self.sigma2_m)),
            ("sigma2_e", sig9(self.sigma2_e)),
            ("bandwidth", sig9(self.bandwidth)),
            ("frame", sig9(self.frame)),
            ("fp_tolerance", sig9(self.fp_tolerance)),
            ("max_fp_iters", self.max_fp_iters.to_string()),
            ("gamma_tolerance", sig9(self.gamma_tolerance)),
            ("max_gamma_iters", self.max_gamma_iters.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_valid_params_and_solver() {
        let settings = Settings::default();
        settings.params().validate().unwrap();
        settings.solver().validate().unwrap();
        settings.sweep_spec().unwrap();
        assert!((settings.params().snr - 10.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = Settings::default().apply("bogus", "1").unwrap_err();
        assert!(err.contains("unknown configuration key `bogus`"), "{err}");
    }

    #[test]
    fn malformed_value_is_named() {
        let err = Settings::default().apply("theta", "fast").unwrap_err();
        assert!(err.contains("`theta`"), "{err}");
        assert!(err.contains("fast"), "{err}");
    }

    #[test]
    fn grid_and_sensing_parse() {
        let mut settings = Settings::default();
        settings.apply("grid", "1e-3, 0.5,2").unwrap();
        assert_eq!(settings.grid, vec![1e-3, 0.5, 2.0]);
        settings.apply("sensing", "0.1:0.9, 0.2:0.8").unwrap();
        assert_eq!(settings.sensing, vec![(0.1, 0.9), (0.2, 0.8)]);
        assert!(Settings::default().apply("sensing", "0.1-0.9").is_err());
    }

    #[test]
    fn file_layers_under_flags() {
        let dir = std::env::temp_dir().join("effsec-settings-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        fs::write(&path, "# baseline\ntheta = 0.01\nseed=7\n\ndraws=5000\n").unwrap();
        let mut settings = Settings::default();
        settings.load_file(&path).unwrap();
        assert_eq!(settings.theta, 0.01);
        assert_eq!(settings.seed, 7);
        assert_eq!(settings.draws, 5000);
        // A later flag assignment wins over the file.
        settings.apply("theta", "0.1").unwrap();
        assert_eq!(settings.theta, 0.1);
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let dir = std::env::temp_dir().join("effsec-settings-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.conf");
        fs::write(&path, "theta=1\nwhat is this\n").unwrap();
        let err = Settings::default().load_file(&path).unwrap_err();
        assert!(err.contains(":2:"), "{err}");
    }
}
