//! `nashlab`: reproducible runs of the sharp-constant computations.
//!
//! Exit codes: 0 success with every invariant satisfied, 1 a numerical
//! invariant failed, 2 usage or domain error.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nashlab::constants::{exponents, figure_data, kgn};
use nashlab::heat::{
    default_half_width, evolve_convolution_1d, evolve_gaussian, is_monotone_decay, DecaySample,
};
use nashlab::io::{write_decay_csv, write_figure_csv, write_profile_csv, write_sweep_csv};
use nashlab::radial::{norm_triple, RadialProfile};
use nashlab::shooting::{shoot, sweep_p, ShootingResult};
use nashlab::specfun::{nash_constant, optimal_profile};
use nashlab::verify::{run_suite, SuiteConfig};
use nashlab::Error;

const SEED_ENV: &str = "NASHLAB_SEED";
const CERTIFY: f64 = 1e-6;
const SCALING_TOL: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "nashlab",
    version,
    about = "Sharp Nash and Gagliardo-Nirenberg constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Constants and comparison bounds on a real-d grid.
    ///
    /// Columns: d, lambda1 (Neumann eigenvalue of the unit ball), c_nash
    /// (sharp Nash constant), c1 (log-Sobolev bound), c2 (Fourier bound),
    /// sobolev (sharp Sobolev constant, empty for d ≤ 2), lower (Gaussian
    /// lower bound 1/(2πd)).
    Constants {
        #[arg(long, default_value_t = 1.0)]
        d_min: f64,
        #[arg(long, default_value_t = 10.0)]
        d_max: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Ground state for one (d, p); summary JSON on stdout.
    Shoot {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Write the profile CSV (r,u,du) here.
        #[arg(long)]
        profile_out: Option<PathBuf>,
    },
    /// Ground states along a list of exponents (CSV p,h,R,mu,cgn).
    Sweep {
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// L² decay against the Nash and Young envelopes (CSV t,l2,nash_env,young_env).
    Heat {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Scenario::Gaussian)]
        scenario: Scenario,
        /// Width of the initial Gaussian.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Convolution grid size (bump scenario).
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Inequality checks on a seeded corpus (JSON report).
    Verify {
        #[arg(long)]
        d: usize,
        /// Overridden by the NASHLAB_SEED environment variable.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal profile 1 - φ₁ on the unit ball (CSV r,u,du).
    Profile {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1025)]
        knots: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scenario {
    /// Heat kernel data G(ε, ·), analytic evolution.
    Gaussian,
    /// 1 + cos on [-π, π] by quadrature convolution (d = 1).
    Bump,
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Io(_) | Error::Csv(_) | Error::InvalidProfile(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Constants {
            d_min,
            d_max,
            n,
            format,
            output,
        } => cmd_constants(d_min, d_max, n, format, &output),
        Command::Shoot {
            d,
            p,
            tol,
            profile_out,
        } => cmd_shoot(d, p, tol, profile_out),
        Command::Sweep {
            d,
            p,
            tol,
            format,
            output,
        } => cmd_sweep(d, &p, tol, format, &output),
        Command::Heat {
            d,
            scenario,
            eps,
            t_max,
            steps,
            n,
            output,
        } => cmd_heat(d, scenario, eps, t_max, steps, n, &output),
        Command::Verify {
            d,
            seed,
            samples,
            output,
        } => cmd_verify(d, seed, samples, &output),
        Command::Profile { d, knots, output } => cmd_profile(d, knots, &output),
    }
}

/// Six significant digits for human-facing summaries.
fn round6(x: f64) -> f64 {
    if x.is_finite() && x != 0.0 {
        format!("{x:.5e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn check_dim(d: usize) -> Outcome {
    if (1..=10).contains(&d) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("d = {d} outside 1..=10")))
    }
}

fn cmd_constants(d_min: f64, d_max: f64, n: usize, format: Format, output: &Output) -> Outcome {
    if !(d_min <= d_max) {
        return Err(Failure::Usage(format!(
            "--d-min {d_min} exceeds --d-max {d_max}"
        )));
    }
    let rows = figure_data(d_min, d_max, n)?;
    let mut out = output.open()?;
    match format {
        Format::Csv => write_figure_csv(&mut out, &rows)?,
        Format::Json => write_json(&mut out, &rows)?,
    }
    match rows.iter().find(|r| !r.ordering_holds()) {
        Some(r) => Err(Failure::Invariant(format!(
            "bound ordering fails at d = {}",
            r.d
        ))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct ShootSummary {
    d: usize,
    p: f64,
    h: f64,
    support_radius: f64,
    mu: f64,
    cgn: f64,
    kgn: f64,
    res1: f64,
    res2: f64,
    match_residual: f64,
    grad: f64,
    lp: f64,
    l2: f64,
    certified: bool,
}

fn summarize(s: &ShootingResult) -> Result<ShootSummary, Failure> {
    let c = s.cgn()?;
    let k = kgn(s.p, s.mu, s.d, c)?;
    let certified =
        s.res1.abs() <= CERTIFY && s.res2.abs() <= CERTIFY && (k - 1.0).abs() <= SCALING_TOL;
    Ok(ShootSummary {
        d: s.d,
        p: s.p,
        h: round6(s.h),
        support_radius: round6(s.support_radius),
        mu: round6(s.mu),
        cgn: round6(c),
        kgn: round6(k),
        res1: round6(s.res1),
        res2: round6(s.res2),
        match_residual: round6(s.match_residual),
        grad: round6(s.norms.grad),
        lp: round6(s.norms.lp),
        l2: round6(s.norms.l2),
        certified,
    })
}

fn check_p(p: f64) -> Outcome {
    if p > 1.0 && p < 2.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("p = {p} outside (1, 2)")))
    }
}

fn cmd_shoot(d: usize, p: f64, tol: f64, profile_out: Option<PathBuf>) -> Outcome {
    check_dim(d)?;
    check_p(p)?;
    let s = shoot(p, d, tol)?;
    if let Some(path) = profile_out {
        write_profile_csv(BufWriter::new(File::create(path)?), &s.profile)?;
    }
    let summary = summarize(&s)?;
    write_json(&mut io::stdout().lock(), &summary)?;
    if summary.certified {
        Ok(())
    } else {
        Err(Failure::Invariant("ground state not certified".into()))
    }
}

fn cmd_sweep(d: usize, ps: &[f64], tol: f64, format: Format, output: &Output) -> Outcome {
    check_dim(d)?;
    for &p in ps {
        check_p(p)?;
    }
    let rows = sweep_p(d, ps, tol)?;
    let mut out = output.open()?;
    match format {
        Format::Csv => write_sweep_csv(&mut out, &rows)?,
        Format::Json => write_json(&mut out, &rows)?,
    }
    let c_nash = nash_constant(d as f64)?;
    for e in &rows {
        if e.res1.abs() > CERTIFY || e.res2.abs() > CERTIFY {
            return Err(Failure::Invariant(format!(
                "p = {}: Pohozaev residuals too large",
                e.p
            )));
        }
        if (kgn(e.p, e.mu, d, e.cgn)? - 1.0).abs() > SCALING_TOL {
            return Err(Failure::Invariant(format!(
                "p = {}: scaling relation fails",
                e.p
            )));
        }
        let holder = c_nash.powf(-exponents(e.p, d as f64).holder());
        if e.cgn > holder * (1.0 + CERTIFY) {
            return Err(Failure::Invariant(format!(
                "p = {}: C_GN above the Hölder bound",
                e.p
            )));
        }
    }
    let decreasing_p = ps.windows(2).all(|w| w[1] < w[0]);
    if decreasing_p && rows.windows(2).any(|w| w[1].radius_gap >= w[0].radius_gap) {
        return Err(Failure::Invariant(
            "support radius gap not decreasing".into(),
        ));
    }
    Ok(())
}

fn cmd_heat(
    d: usize,
    scenario: Scenario,
    eps: f64,
    t_max: f64,
    steps: usize,
    n: usize,
    output: &Output,
) -> Outcome {
    check_dim(d)?;
    if !(t_max > 0.0) || steps == 0 {
        return Err(Failure::Usage("need --t-max > 0 and --steps ≥ 1".into()));
    }
    let times = (0..=steps).map(|k| t_max * k as f64 / steps as f64);
    let samples: Vec<DecaySample> = match scenario {
        Scenario::Gaussian => times
            .map(|t| evolve_gaussian(eps, t, d))
            .collect::<Result<_, _>>()?,
        Scenario::Bump => {
            if d != 1 {
                return Err(Failure::Usage(
                    "the bump scenario is one-dimensional".into(),
                ));
            }
            let pi = std::f64::consts::PI;
            let u0 =
                RadialProfile::sample(1, pi, 4097, |r| 1.0 + r.cos(), Some(&|r: f64| -r.sin()))?;
            let t0 = norm_triple(&u0, 1.0)?;
            let half_width = default_half_width(pi, t_max);
            times
                .map(|t| {
                    if t == 0.0 {
                        Ok(DecaySample {
                            t,
                            l2: t0.l2.sqrt(),
                            nash_env: t0.l2.sqrt(),
                            young_env: f64::INFINITY,
                        })
                    } else {
                        evolve_convolution_1d(&u0, t, half_width, n)
                    }
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut out = output.open()?;
    write_decay_csv(&mut out, &samples)?;
    if let Some(s) = samples.iter().find(|s| s.excess() > CERTIFY) {
        return Err(Failure::Invariant(format!(
            "l2 above the envelopes at t = {}",
            s.t
        )));
    }
    if !is_monotone_decay(&samples) {
        return Err(Failure::Invariant("l2 not monotone in t".into()));
    }
    Ok(())
}

fn cmd_verify(d: usize, seed: u64, samples: usize, output: &Output) -> Outcome {
    check_dim(d)?;
    let seed = match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v} is not an unsigned integer")))?,
        Err(_) => seed,
    };
    let cfg = SuiteConfig {
        samples,
        ..SuiteConfig::new(d, seed)
    };
    let reports = run_suite(&cfg)?;
    let mut out = output.open()?;
    write_json(&mut out, &reports)?;
    match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(Failure::Invariant(format!("check {} failed", r.name))),
        None => Ok(()),
    }
}

fn cmd_profile(d: usize, knots: usize, output: &Output) -> Outcome {
    check_dim(d)?;
    let u = optimal_profile(d, knots)?;
    let mut out = output.open()?;
    write_profile_csv(&mut out, &u)?;
    Ok(())
}
