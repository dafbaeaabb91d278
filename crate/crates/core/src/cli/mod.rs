//! Command-line front end.

mod commands;
pub mod config;

pub use commands::write_figures;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use crate::specfun::BesselFamily;
use crate::time_domain::Kernel;
use crate::waves::Representation;
use config::{Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "viscotube", version, about = "Memory kernels and transient waves in viscous flow through elastic tubes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Config file of `key = value` lines (falls back to $VISCOTUBE_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Viscous time scale.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Use exactly this many series terms.
    #[arg(long, global = true)]
    pub terms: Option<usize>,
    /// Absolute tail tolerance of adaptive series truncation.
    #[arg(long = "tail-eps", global = true)]
    pub tail_eps: Option<f64>,
    /// Output directory; results go to stdout when absent (figures default to `.`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long = "t-min", global = true)]
    pub t_min: Option<f64>,
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Space grid points logarithmically.
    #[arg(long, global = true)]
    pub log: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write fig1.csv .. fig4.csv: Φ, Ψ (with asymptotes), G and J.
    Figures,
    /// Run the self-check suite; exits non-zero if any check fails.
    Validate,
    /// Zeros of J0 or J2.
    Zeros {
        #[arg(long, default_value = "j0")]
        family: BesselFamily,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Evaluate phi, psi, g or j on the time grid.
    Kernel {
        #[arg(long, default_value = "phi")]
        which: Kernel,
        /// Evaluate at this single time instead of the grid.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Friction kernel versus frequency, or friction for a pressure-gradient history.
    Womersley {
        /// Angular frequencies (comma separated).
        #[arg(long, value_delimiter = ',')]
        omega: Vec<f64>,
        #[arg(long = "omega-min", default_value_t = 1e-3)]
        omega_min: f64,
        #[arg(long = "omega-max", default_value_t = 1e4)]
        omega_max: f64,
        /// Delimited file with a time column and one gradient column per station.
        #[arg(long)]
        history: Option<PathBuf>,
        /// Fluid density used with --history.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
    },
    /// Signalling problem on x = j*dx, t = k*dt.
    Wave(WaveArgs),
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    /// `step`, `gaussian`, or a path to a two-column `t,Y0` file.
    #[arg(long, default_value = "step")]
    pub input: String,
    #[arg(long, default_value_t = 0.75)]
    pub center: f64,
    #[arg(long, default_value_t = 0.125)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, default_value_t = 0.03)]
    pub dx: f64,
    #[arg(long, default_value_t = 100)]
    pub stations: usize,
    #[arg(long, default_value_t = 0.003)]
    pub dt: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value = "relaxation")]
    pub representation: Representation,
    /// Switch the memory kernel off.
    #[arg(long)]
    pub inviscid: bool,
    /// Use the finite-difference solver instead of Laplace inversion.
    #[arg(long)]
    pub oracle: bool,
    /// Contour nodes of the inversion.
    #[arg(long, default_value_t = 48)]
    pub nodes: usize,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            tau: self.tau,
            terms: self.terms,
            tail_eps: self.tail_eps,
            out: self.out.clone(),
            t_min: self.t_min,
            t_max: self.t_max,
            points: self.points,
            log: self.log.then_some(true),
            ..Default::default()
        }
    }
}

/// Parse arguments, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    run_with_output(args, &mut stdout.lock())
}

/// As [`run`], writing results to `out` instead of standard output.
pub fn run_with_output<I, T>(args: I, out: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };
    let cfg = RunConfig::load(cli.global.config.as_deref(), &cli.global.overrides())?;
    commands::dispatch(&cli.command, &cfg, out)
}
