//! `effsec` — batch front-end for effective-secure-capacity experiments.
//!
//! Five commands over one shared configuration surface: `eval` (one
//! capacity row), `sweep` (rows along a parameter axis), `iters` (solver
//! iteration histogram), `simulate` (frame-level queue validation), and
//! `selftest` (built-in verification suite). Configuration comes from
//! built-in defaults, then a flat `key=value` file, then flags named
//! after the keys; identical configurations and seeds produce
//! byte-identical artifacts.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use settings::Settings;

/// How a run failed, mapped onto the exit-code contract.
pub(crate) enum Failure {
    /// Bad configuration, arguments, or paths; exit 1.
    Usage(String),
    /// The computation itself failed (non-convergence, calibration,
    /// unusable tail); exit 2.
    Numerical(String),
}

impl From<effsec::Error> for Failure {
    fn from(e: effsec::Error) -> Self {
        match e {
            // Domain violations reach here only through user-supplied
            // values, so they are usage errors.
            effsec::Error::InvalidParameter { .. }
            | effsec::Error::EmptyInput(_)
            | effsec::Error::ThetaZero => Failure::Usage(e.to_string()),
            effsec::Error::NonConvergence { .. }
            | effsec::Error::CalibrationFailure(_)
            | effsec::Error::InsufficientTail(_) => Failure::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "effsec",
    version,
    about = "Effective secure capacity of a sensing-based secondary link: \
             evaluation, sweeps, solver diagnostics, and queue simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One capacity row at the configured parameter point.
    Eval(Job),
    /// Capacity rows along a one-dimensional parameter grid.
    Sweep(Job),
    /// Histogram of solver iteration counts after calibration.
    Iters(Job),
    /// Frame-level queue simulation at the configured arrival rate.
    Simulate(Job),
    /// Run the built-in verification suite.
    Selftest(Job),
}

impl Command {
    fn job(&self) -> &Job {
        match self {
            Command::Eval(job)
            | Command::Sweep(job)
            | Command::Iters(job)
            | Command::Simulate(job)
            | Command::Selftest(job) => job,
        }
    }
}

#[derive(Args)]
struct Job {
    /// Flat `key=value` configuration file; flags below override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Artifact path; the metadata sidecar lands at `<output>.meta`.
    #[arg(short, long, value_name = "PATH")]
    output: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

/// Command-line forms of the configuration keys. Each flag carries the
/// exact key name and overrides that key; values are validated by the
/// same code path as file entries.
#[derive(Args, Default)]
struct Overrides {
    /// QoS exponent theta (1/bits).
    #[arg(long = "theta", value_name = "X")]
    theta: Option<String>,
    /// Interference power budget in dB.
    #[arg(long = "snr_db", value_name = "DB")]
    snr_db: Option<String>,
    /// Primary-user activity prior.
    #[arg(long = "rho", value_name = "P")]
    rho: Option<String>,
    /// Detection probability of the sensor.
    #[arg(long = "p_d", value_name = "P")]
    p_d: Option<String>,
    /// False-alarm probability of the sensor.
    #[arg(long = "p_f", value_name = "P")]
    p_f: Option<String>,
    /// Noise variance at the intended receiver.
    #[arg(long = "sigma2_nm", value_name = "X")]
    sigma2_nm: Option<String>,
    /// Noise variance at the eavesdropping receiver.
    #[arg(long = "sigma2_ne", value_name = "X")]
    sigma2_ne: Option<String>,
    /// Primary interference power at the intended receiver.
    #[arg(long = "sigma2_sm", value_name = "X")]
    sigma2_sm: Option<String>,
    /// Primary interference power at the eavesdropping receiver.
    #[arg(long = "sigma2_se", value_name = "X")]
    sigma2_se: Option<String>,
    /// Main-channel fading variance.
    #[arg(long = "sigma2_m", value_name = "X")]
    sigma2_m: Option<String>,
    /// Eavesdropper-channel fading variance.
    #[arg(long = "sigma2_e", value_name = "X")]
    sigma2_e: Option<String>,
    /// Bandwidth in Hz.
    #[arg(long = "bandwidth", value_name = "HZ")]
    bandwidth: Option<String>,
    /// Frame duration in seconds.
    #[arg(long = "frame", value_name = "S")]
    frame: Option<String>,
    /// Inner fixed-point tolerance on the power iterate.
    #[arg(long = "fp_tolerance", value_name = "X")]
    fp_tolerance: Option<String>,
    /// Inner fixed-point iteration budget.
    #[arg(long = "max_fp_iters", value_name = "N")]
    max_fp_iters: Option<String>,
    /// Accepted residual of the interference constraint.
    #[arg(long = "gamma_tolerance", value_name = "X")]
    gamma_tolerance: Option<String>,
    /// Calibration budget in average-power evaluations.
    #[arg(long = "max_gamma_iters", value_name = "N")]
    max_gamma_iters: Option<String>,
    /// Base RNG seed.
    #[arg(long = "seed", value_name = "N")]
    seed: Option<String>,
    /// Fading draws per Monte Carlo estimate.
    #[arg(long = "draws", value_name = "N")]
    draws: Option<String>,
    /// Quadrature nodes per axis (method=quadrature).
    #[arg(long = "nodes", value_name = "N")]
    nodes: Option<String>,
    /// Capacity estimator: `mc` or `quadrature`.
    #[arg(long = "method", value_name = "NAME")]
    method: Option<String>,
    /// Worker threads; 0 keeps the library default.
    #[arg(long = "threads", value_name = "N")]
    threads: Option<String>,
    /// Sweep axis: `theta`, `snr_db`, `beta`, or `sensing`.
    #[arg(long = "axis", value_name = "NAME")]
    axis: Option<String>,
    /// Comma-separated, strictly increasing axis values.
    #[arg(long = "grid", value_name = "LIST")]
    grid: Option<String>,
    /// Comma-separated `P_f:P_d` pairs for the sensing axis.
    #[arg(long = "sensing", value_name = "PAIRS")]
    sensing: Option<String>,
    /// Frames per simulation replication.
    #[arg(long = "frames", value_name = "N")]
    frames: Option<String>,
    /// Constant arrival in bits per frame.
    #[arg(long = "arrival_bits", value_name = "BITS")]
    arrival_bits: Option<String>,
    /// Arrival as a fraction of the calibrated capacity (threshold
    /// policy only; default 0.95).
    #[arg(long = "arrival_fraction", value_name = "F")]
    arrival_fraction: Option<String>,
    /// Independent simulation replications to merge.
    #[arg(long = "replications", value_name = "N")]
    replications: Option<String>,
    /// Simulation policy: `threshold` or `fixed`.
    #[arg(long = "policy", value_name = "NAME")]
    policy: Option<String>,
    /// Fixed busy-branch power (policy=fixed).
    #[arg(long = "mu_b", value_name = "X")]
    mu_b: Option<String>,
    /// Fixed idle-branch power (policy=fixed).
    #[arg(long = "mu_i", value_name = "X")]
    mu_i: Option<String>,
}

impl Overrides {
    fn entries(&self) -> [(&'static str, &Option<String>); 32] {
        [
            ("theta", &self.theta),
            ("snr_db", &self.snr_db),
            ("rho", &self.rho),
            ("p_d", &self.p_d),
            ("p_f", &self.p_f),
            ("sigma2_nm", &self.sigma2_nm),
            ("sigma2_ne", &self.sigma2_ne),
            ("sigma2_sm", &self.sigma2_sm),
            ("sigma2_se", &self.sigma2_se),
            ("sigma2_m", &self.sigma2_m),
            ("sigma2_e", &self.sigma2_e),
            ("bandwidth", &self.bandwidth),
            ("frame", &self.frame),
            ("fp_tolerance", &self.fp_tolerance),
            ("max_fp_iters", &self.max_fp_iters),
            ("gamma_tolerance", &self.gamma_tolerance),
            ("max_gamma_iters", &self.max_gamma_iters),
            ("seed", &self.seed),
            ("draws", &self.draws),
            ("nodes", &self.nodes),
            ("method", &self.method),
            ("threads", &self.threads),
            ("axis", &self.axis),
            ("grid", &self.grid),
            ("sensing", &self.sensing),
            ("frames", &self.frames),
            ("arrival_bits", &self.arrival_bits),
            ("arrival_fraction", &self.arrival_fraction),
            ("replications", &self.replications),
            ("policy", &self.policy),
            ("mu_b", &self.mu_b),
            ("mu_i", &self.mu_i),
        ]
    }
}

fn build_settings(job: &Job) -> Result<Settings, Failure> {
    let mut settings = Settings::default();
    if let Some(path) = &job.config {
        settings.load_file(path).map_err(Failure::Usage)?;
    }
    for (key, value) in job.overrides.entries() {
        if let Some(value) = value {
            settings.apply(key, value).map_err(Failure::Usage)?;
        }
    }
    if let Some(path) = &job.output {
        settings.output = Some(path.clone());
    }
    Ok(settings)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let settings = build_settings(cli.command.job())?;
    if settings.threads > 0 {
        // Every parallel reduction is in fixed order, so the pool size
        // only caps parallelism; it cannot change an artifact byte. The
        // call fails harmlessly if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(settings.threads)
            .build_global();
    }
    match &cli.command {
        Command::Eval(_) => commands::eval(&settings),
        Command::Sweep(_) => commands::sweep_cmd(&settings),
        Command::Iters(_) => commands::iters(&settings),
        Command::Simulate(_) => commands::simulate(&settings),
        Command::Selftest(_) => commands::selftest(&settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
