//! Signalling problem for the dissipative wave equation
//!
//! ```text
//! Y_tt = c0² [1 − Φ(t) ∗] Y_xx        (relaxation form)
//! [1 + Ψ(t) ∗] Y_tt = c0² Y_xx        (creep form)
//! ```
//!
//! on `x ≥ 0`, with `Y(0, t) = Y0(t)` prescribed, the medium at rest for
//! `t ≤ 0` and no waves arriving from `x = +∞`. In the Laplace domain
//!
//! ```text
//! Ỹ(x, s) = Ỹ0(s) exp(−x s / (c0 √(1 − Φ̃(s)))) = Ỹ0(s) exp(−x s √(1 + Ψ̃(s)) / c0).
//! ```
//!
//! [`solve_signalling`] inverts this per station; [`time_domain_oracle`]
//! integrates the relaxation form directly on a coarse grid.

mod oracle;
mod spectral;

pub use oracle::time_domain_oracle;
pub use spectral::solve_signalling;

use std::io::Write;

use crate::error::{require_positive, Error, Result};
use crate::laplace::InversionConfig;
use crate::table::{format_number, parse_uniform_columns};
use crate::womersley::FrictionModel;

/// Boundary history `Y0(t)` at `x = 0`; zero for `t < 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSignal {
    /// Unit step `H(t)`.
    Step,
    /// `exp(−(t − center)² / (2 width²))`.
    GaussianPulse { center: f64, width: f64 },
    /// Uniform samples from `t = 0`, joined linearly and held after the last one.
    Samples { dt: f64, values: Vec<f64> },
}

impl InputSignal {
    /// Read a two-column `t, Y0` series.
    pub fn from_delimited(text: &str) -> Result<Self> {
        let (dt, mut columns) = parse_uniform_columns(text)?;
        if columns.len() != 1 {
            return Err(Error::Config(format!(
                "input signal needs exactly one value column, found {}",
                columns.len()
            )));
        }
        let signal = InputSignal::Samples {
            dt,
            values: columns.remove(0),
        };
        signal.validate()?;
        Ok(signal)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InputSignal::Step => Ok(()),
            InputSignal::GaussianPulse { center, width } => {
                require_positive("pulse width", *width)?;
                if !center.is_finite() {
                    return Err(Error::Domain(format!("pulse center must be finite, got {center}")));
                }
                Ok(())
            }
            InputSignal::Samples { dt, values } => {
                require_positive("input dt", *dt)?;
                if values.is_empty() {
                    return Err(Error::Config("input signal has no samples".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config("input signal contains non-finite samples".into()));
                }
                Ok(())
            }
        }
    }

    /// `Y0(t)`.
    pub fn value(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            InputSignal::Step => 1.0,
            InputSignal::GaussianPulse { center, width } => {
                let r = (t - center) / width;
                (-0.5 * r * r).exp()
            }
            InputSignal::Samples { dt, values } => {
                let pos = t / dt;
                let i = pos.floor() as usize;
                if i + 1 >= values.len() {
                    return *values.last().unwrap_or(&0.0);
                }
                let w = pos - i as f64;
                values[i] + w * (values[i + 1] - values[i])
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// Exponent built from `√(1 − Φ̃)`.
    Relaxation,
    /// Exponent built from `√(1 + Ψ̃)`.
    Creep,
}

impl std::str::FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "relaxation" => Ok(Representation::Relaxation),
            "creep" => Ok(Representation::Creep),
            other => Err(Error::Config(format!("unknown representation '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignallingProblem {
    pub input: InputSignal,
    /// Wavefront speed.
    pub c0: f64,
    pub tau: f64,
    /// Stations, `x ≥ 0`.
    pub xs: Vec<f64>,
    /// Output time step; samples at `t_k = k dt`.
    pub dt: f64,
    /// Number of output times.
    pub steps: usize,
    pub representation: Representation,
    /// [`FrictionModel::Inviscid`] switches the memory kernel off.
    pub friction: FrictionModel,
    pub inversion: InversionConfig,
}

impl SignallingProblem {
    pub fn new(input: InputSignal, xs: Vec<f64>, dt: f64, steps: usize) -> Self {
        Self {
            input,
            c0: 1.0,
            tau: 1.0,
            xs,
            dt,
            steps,
            representation: Representation::Relaxation,
            friction: FrictionModel::Viscous,
            inversion: InversionConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.input.validate()?;
        require_positive("c0", self.c0)?;
        require_positive("tau", self.tau)?;
        require_positive("dt", self.dt)?;
        self.inversion.validate()?;
        if self.steps == 0 {
            return Err(Error::Config("time grid needs at least one step".into()));
        }
        if self.xs.is_empty() {
            return Err(Error::Config("no stations given".into()));
        }
        if let Some(x) = self.xs.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(Error::Domain(format!("stations must satisfy x >= 0, got {x}")));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.steps).map(|k| k as f64 * self.dt).collect()
    }
}

/// `Y(x_j, t_k)`, one row per station.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveField {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl WaveField {
    pub fn station(&self, j: usize) -> &[f64] {
        &self.values[j]
    }

    /// Largest pointwise difference to another field on the same grid.
    pub fn max_abs_diff(&self, other: &WaveField) -> Result<f64> {
        if self.xs.len() != other.xs.len() || self.ts.len() != other.ts.len() {
            return Err(Error::Config("fields live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs()))
            .fold(0.0, f64::max))
    }

    /// CSV with header `x,t,Y`, stations in order and times within each station.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,t,Y")?;
        for (x, row) in self.xs.iter().zip(&self.values) {
            for (t, y) in self.ts.iter().zip(row) {
                writeln!(out, "{},{},{}", format_number(*x), format_number(*t), format_number(*y))?;
            }
        }
        Ok(())
    }
}
