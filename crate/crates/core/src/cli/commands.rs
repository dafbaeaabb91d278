use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::{Command, WaveArgs};
use crate::error::{Error, Result};
use crate::specfun::zeros;
use crate::table::{csv_row, format_number};
use crate::time_domain::{asymptotic, evaluate, Kernel, KernelSpec, Regime, Truncation};
use crate::validation::{log_grid, run_suite};
use crate::waves::{solve_signalling, time_domain_oracle, InputSignal, SignallingProblem};
use crate::womersley::{
    friction_history, friction_kernel_frequency, womersley_number, FrictionModel, PressureGradientHistory,
    TubeParams,
};
use crate::laplace::InversionConfig;

pub(super) fn dispatch(command: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Figures => {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in write_figures(&dir, cfg)? {
                writeln!(out, "{}", path.display())?;
            }
            Ok(0)
        }
        Command::Validate => {
            let checks = run_suite()?;
            let all_pass = checks.iter().all(|c| c.passed());
            emit(cfg, "validate.csv", out, |w| {
                writeln!(w, "name,measured,tolerance,status")?;
                for c in &checks {
                    writeln!(w, "{c}")?;
                }
                Ok(())
            })?;
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Zeros { family, count } => {
            let table = zeros(*family, *count)?;
            emit(cfg, &format!("zeros_{family}.csv").to_lowercase(), out, |w| {
                writeln!(w, "n,zero")?;
                for (n, z) in table.zeros().iter().enumerate() {
                    writeln!(w, "{},{}", n + 1, format_number(*z))?;
                }
                Ok(())
            })?;
            Ok(0)
        }
        Command::Kernel { which, t } => {
            let spec = kernel_spec(*which, cfg, cfg.truncation());
            let times = match t {
                Some(t) => vec![*t],
                None => cfg.grid.times()?,
            };
            let rows = times
                .iter()
                .map(|&t| evaluate(t, &spec).map(|r| (t, r)))
                .collect::<Result<Vec<_>>>()?;
            emit(cfg, &format!("kernel_{which}.csv").to_lowercase(), out, |w| {
                writeln!(w, "t,{which},tail_estimate,terms_used")?;
                for (t, r) in &rows {
                    writeln!(w, "{},{}", csv_row(&[*t, r.value, r.tail_estimate]), r.terms_used)?;
                }
                Ok(())
            })?;
            Ok(0)
        }
        Command::Womersley {
            omega,
            omega_min,
            omega_max,
            history,
            rho,
        } => {
            // Unit radius with ν = 1/τ reproduces the configured time scale.
            let params = TubeParams::circular(1.0, 1.0 / cfg.tau, *rho, 1.0 / std::f64::consts::PI)?;
            match history {
                Some(path) => womersley_history(path, &params, cfg, out)?,
                None => {
                    let omegas = if omega.is_empty() {
                        log_grid(*omega_min, *omega_max, cfg.grid.points.min(1000))
                    } else {
                        omega.clone()
                    };
                    let rows = omegas
                        .iter()
                        .map(|&w| Ok((w, womersley_number(w, &params)?, friction_kernel_frequency(w, cfg.tau)?)))
                        .collect::<Result<Vec<_>>>()?;
                    emit(cfg, "womersley.csv", out, |w| {
                        writeln!(w, "omega,alpha,re,im,modulus,phase")?;
                        for (omega, alpha, v) in &rows {
                            writeln!(w, "{}", csv_row(&[*omega, *alpha, v.re, v.im, v.norm(), v.arg()]))?;
                        }
                        Ok(())
                    })?;
                }
            }
            Ok(0)
        }
        Command::Wave(args) => {
            let problem = wave_problem(args, cfg)?;
            let field = if args.oracle {
                time_domain_oracle(&problem)?
            } else {
                solve_signalling(&problem)?
            };
            emit(cfg, "wave.csv", out, |w| field.write_csv(w))?;
            Ok(0)
        }
    }
}

/// Write to `<out>/<name>` when an output directory is configured (and
/// report the path), otherwise to `out`.
fn emit<F>(cfg: &RunConfig, name: &str, out: &mut dyn Write, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match &cfg.out {
        Some(dir) => {
            let path = create_in(dir, name)?;
            let mut file = BufWriter::new(File::create(&path)?);
            body(&mut file)?;
            file.flush()?;
            writeln!(out, "{}", path.display())?;
        }
        None => body(out)?,
    }
    Ok(())
}

fn create_in(dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}

fn kernel_spec(which: Kernel, cfg: &RunConfig, truncation: Truncation) -> KernelSpec {
    let scale = match which {
        Kernel::G => cfg.g0,
        Kernel::J => cfg.j0,
        _ => 1.0,
    };
    KernelSpec::new(which, cfg.tau).with_scale(scale).with_truncation(truncation)
}

/// `fig1.csv` .. `fig4.csv` on 400 log-spaced times in `[1e-3, 10] τ`;
/// `G` and `J` also get their `t = 0` values.
pub fn write_figures(dir: &Path, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let truncation = cfg.figure_truncation();
    let tau = cfg.tau;
    let times: Vec<f64> = log_grid(1e-3, 10.0, 400).into_iter().map(|t| t * tau).collect();
    let mut written = Vec::new();

    for (name, which) in [("fig1.csv", Kernel::Phi), ("fig2.csv", Kernel::Psi)] {
        let spec = kernel_spec(which, cfg, truncation);
        let path = create_in(dir, name)?;
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "t,{which},short_time,long_time")?;
        for &t in &times {
            let v = evaluate(t, &spec)?.value;
            let short = asymptotic(which, Regime::Short, t, tau)?;
            let long = asymptotic(which, Regime::Long, t, tau)?;
            writeln!(w, "{}", csv_row(&[t, v, short, long]))?;
        }
        w.flush()?;
        written.push(path);
    }

    for (name, which) in [("fig3.csv", Kernel::G), ("fig4.csv", Kernel::J)] {
        let spec = kernel_spec(which, cfg, truncation);
        let path = create_in(dir, name)?;
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "t,{which}")?;
        for t in std::iter::once(0.0).chain(times.iter().copied()) {
            writeln!(w, "{}", csv_row(&[t, evaluate(t, &spec)?.value]))?;
        }
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

fn womersley_history(path: &Path, params: &TubeParams, cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let history = PressureGradientHistory::from_delimited(&text)?;
    let friction = friction_history(&history, params)?;
    emit(cfg, "friction.csv", out, |w| {
        let header: Vec<String> = (1..=friction.len()).map(|j| format!("f0_{j}")).collect();
        writeln!(w, "t,{}", header.join(","))?;
        for k in 0..history.samples() {
            let mut row = vec![k as f64 * history.dt()];
            row.extend(friction.iter().map(|f| f[k]));
            writeln!(w, "{}", csv_row(&row))?;
        }
        Ok(())
    })
}

fn wave_problem(args: &WaveArgs, cfg: &RunConfig) -> Result<SignallingProblem> {
    let input = match args.input.to_ascii_lowercase().as_str() {
        "step" => InputSignal::Step,
        "gaussian" => InputSignal::GaussianPulse {
            center: args.center,
            width: args.width,
        },
        _ => {
            let text = std::fs::read_to_string(&args.input)
                .map_err(|e| Error::Config(format!("cannot read input signal '{}': {e}", args.input)))?;
            InputSignal::from_delimited(&text)?
        }
    };
    if args.stations == 0 {
        return Err(Error::Config("need at least one station".into()));
    }
    let xs = (0..args.stations).map(|j| j as f64 * args.dx).collect();
    let mut problem = SignallingProblem::new(input, xs, args.dt, args.steps);
    problem.c0 = args.c0;
    problem.tau = cfg.tau;
    problem.representation = args.representation;
    problem.friction = if args.inviscid {
        FrictionModel::Inviscid
    } else {
        FrictionModel::Viscous
    };
    problem.inversion = InversionConfig::talbot(args.nodes);
    Ok(problem)
}
