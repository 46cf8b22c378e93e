//! `hypspec`: batch runner for the verification scenarios.
//!
//! Exit codes: 0 when every assertion passes, 2 when one fails, 1 on input
//! or solver errors and 64 on usage errors.

mod config;
mod report;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::RunConfig;

const EXIT_ASSERTION: u8 = 2;
const EXIT_ERROR: u8 = 1;
const EXIT_USAGE: u8 = 64;

/// Environment variable overriding the thread count.
const THREADS_ENV: &str = "HYPSPEC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "hypspec",
    version,
    about = "Numerical checks for essential spectra of submanifolds in hyperbolic space",
    after_help = scenarios::help_text()
)]
struct Cli {
    /// Scenario to run (see --list).
    scenario: Option<String>,
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV, plot and summary files [default: hypspec-out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dimensions m, comma separated.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Spectral parameters lambda, comma separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Outer radii or windows R, comma separated.
    #[arg(long = "R", value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Inner radii r (delta offsets for delta-ratio and tangent-cone), comma separated.
    #[arg(long = "r", value_delimiter = ',')]
    inner: Option<Vec<f64>>,
    /// Mollifier width; 0 disables smoothing.
    #[arg(long)]
    sigma: Option<f64>,
    /// Angle in degrees: tilted-cap angle, tilted-strip angle or cone latitude.
    #[arg(long)]
    theta: Option<f64>,
    /// Built-in patch ids, comma separated.
    #[arg(long, value_delimiter = ',')]
    geometry: Option<Vec<String>>,
    /// Mesh file for fem-spectrum.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Point-cloud file for tangent-cone and barrier.
    #[arg(long)]
    cloud: Option<PathBuf>,
    /// Random seed [default: 7].
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; HYPSPEC_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
    /// Sample count (psi-residual, mean-curvature).
    #[arg(long)]
    samples: Option<usize>,
    /// Candidate domains per annulus (cheeger).
    #[arg(long)]
    candidates: Option<usize>,
    /// List the scenarios and exit.
    #[arg(long)]
    list: bool,
}

impl Cli {
    fn overrides(&self) -> RunConfig {
        RunConfig {
            scenario: self.scenario.clone(),
            output: self.out.clone(),
            threads: self.threads,
            seed: self.seed,
            m: self.m.clone(),
            lambda: self.lambda.clone(),
            radii: self.radii.clone(),
            sigma: self.sigma,
            inner: self.inner.clone(),
            theta: self.theta,
            geometry: self.geometry.clone(),
            mesh: self.mesh.clone(),
            cloud: self.cloud.clone(),
            samples: self.samples,
            candidates: self.candidates,
            tolerances: Default::default(),
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn failure(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_ERROR)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if cli.list {
        for s in scenarios::SCENARIOS {
            let tag = s.criterion.map_or("-".to_string(), |c| c.to_string());
            println!("{:<18} {tag:>2}  {}", s.name, s.about);
        }
        return ExitCode::SUCCESS;
    }
    let file = match &cli.config {
        Some(path) => match RunConfig::from_file(path) {
            Ok(cfg) => cfg,
            Err(e) => return failure(e),
        },
        None => RunConfig::default(),
    };
    let cfg = file.merge(cli.overrides());
    if let Err(e) = cfg.validate() {
        return usage(e);
    }
    let Some(name) = cfg.scenario.clone() else {
        return usage("no scenario given (see --list)");
    };
    let Some(scenario) = scenarios::find(&name) else {
        return usage(format!("unknown scenario '{name}' (see --list)"));
    };
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'")),
        },
        Err(_) => cfg.threads,
    };
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return failure(e);
        }
    }
    let report = match (scenario.run)(&cfg) {
        Ok(r) => r,
        Err(e) => return failure(e),
    };
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("hypspec-out"));
    if let Err(e) = report.write(&dir) {
        return failure(e);
    }
    print!("{}", report.summary());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ASSERTION)
    }
}
