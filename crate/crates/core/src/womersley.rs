//! Wall friction of oscillatory and transient flow in a rigid-walled
//! section of an elastic tube.
//!
//! The cross-section-averaged momentum balance reads
//!
//! ```text
//! U_t = −Λ/ρ + f0,    f0 = Φ(t) ∗ Λ(x, t)/ρ,    Λ = ∂p/∂x
//! ```
//!
//! so a constant gradient `Λ0` settles at `f0 = Λ0/ρ`, `U_t = 0`, and the
//! Poiseuille balance `−8U/τ = Λ0/ρ` gives `U = −Λ0 τ/(8ρ)`: flow runs
//! against the pressure gradient.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::laplace::phi_hat_complex;
use crate::table::parse_uniform_columns;
use crate::time_domain::ProductWeights;

/// Memory weights are dropped once the remaining kernel mass is below this.
const MEMORY_CUTOFF: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubeParams {
    /// Unperturbed radius.
    pub r0: f64,
    /// Kinematic viscosity.
    pub nu: f64,
    /// Fluid density.
    pub rho: f64,
    /// Unperturbed cross-section area, `π R0²`.
    pub a0: f64,
    /// Wall stiffness `dp/dA` at the operating point.
    pub dpda0: f64,
}

impl TubeParams {
    pub fn new(r0: f64, nu: f64, rho: f64, a0: f64, dpda0: f64) -> Result<Self> {
        for (name, v) in [("R0", r0), ("nu", nu), ("rho", rho), ("A0", a0), ("dp/dA", dpda0)] {
            require_positive(name, v)?;
        }
        let circle = PI * r0 * r0;
        if ((a0 - circle) / circle).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "A0 = {a0} is not the circular area pi*R0^2 = {circle}"
            )));
        }
        Ok(Self { r0, nu, rho, a0, dpda0 })
    }

    /// Parameters with `A0 = π R0²`.
    pub fn circular(r0: f64, nu: f64, rho: f64, dpda0: f64) -> Result<Self> {
        Self::new(r0, nu, rho, PI * r0 * r0, dpda0)
    }

    /// Viscous time scale `τ = R0²/ν`.
    pub fn tau(&self) -> f64 {
        self.r0 * self.r0 / self.nu
    }

    /// Moens–Korteweg speed `c0 = √(A0 (dp/dA) / ρ)`.
    pub fn c0(&self) -> f64 {
        (self.a0 * self.dpda0 / self.rho).sqrt()
    }
}

/// Womersley number `α = R0 √(ω/ν) = √(ωτ)`.
pub fn womersley_number(omega: f64, params: &TubeParams) -> Result<f64> {
    require_finite("omega", omega)?;
    if omega < 0.0 {
        return Err(Error::Domain(format!("angular frequency must be non-negative, got {omega}")));
    }
    Ok((omega * params.tau()).sqrt())
}

/// Frequency response `Φ̂(ω)` of the friction kernel: a gradient
/// `Λ0 sin ωt` produces `f0 → (Λ0/ρ) |Φ̂| sin(ωt + arg Φ̂)`.
///
/// Since `J_ν(iz) = i^ν I_ν(z)`, the Bessel quotient at `i^{3/2}√(ωτ)` is a
/// modified Bessel quotient at `√(iωτ)`: this is `Φ̃(s)` at `s = iω`.
pub fn friction_kernel_frequency(omega: f64, tau: f64) -> Result<Complex64> {
    require_positive("tau", tau)?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("angular frequency must be positive, got {omega}")));
    }
    phi_hat_complex(Complex64::new(0.0, omega), tau)
}

/// Quasi-steady friction `f0 = −8U/τ`.
pub fn poiseuille_friction(u: f64, tau: f64) -> Result<f64> {
    require_positive("tau", tau)?;
    Ok(-8.0 * u / tau)
}

/// Pressure gradient `Λ(x_j, t_k)` sampled at `t_k = k dt`, one row per station.
///
/// Samples are joined linearly; the tube is at rest for `t < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PressureGradientHistory {
    dt: f64,
    stations: Vec<Vec<f64>>,
}

impl PressureGradientHistory {
    pub fn new(dt: f64, stations: Vec<Vec<f64>>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        let len = stations.first().map_or(0, Vec::len);
        if len == 0 {
            return Err(Error::Config("pressure-gradient history is empty".into()));
        }
        for (j, row) in stations.iter().enumerate() {
            if row.len() != len {
                return Err(Error::Config(format!(
                    "station {j} has {} samples, expected {len}",
                    row.len()
                )));
            }
            if let Some(k) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Config(format!("station {j} sample {k} is not finite")));
            }
        }
        Ok(Self { dt, stations })
    }

    /// Parse delimited text: a time column then one column per station.
    ///
    /// Commas, semicolons, tabs or spaces separate fields. Blank lines,
    /// `#` comments and a non-numeric header are skipped. Times must start
    /// at 0 and be uniformly spaced.
    pub fn from_delimited(text: &str) -> Result<Self> {
        let (dt, stations) = parse_uniform_columns(text)?;
        Self::new(dt, stations)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn stations(&self) -> &[Vec<f64>] {
        &self.stations
    }

    pub fn samples(&self) -> usize {
        self.stations[0].len()
    }
}

/// How the friction term enters the acceleration law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrictionModel {
    /// Transient Womersley friction through the memory kernel `Φ`.
    Viscous,
    /// No friction: `Φ ≡ 0`.
    Inviscid,
}

fn memory_weights(history: &PressureGradientHistory, tau: f64) -> Result<ProductWeights> {
    ProductWeights::relaxation_memory(tau, history.dt(), history.samples(), MEMORY_CUTOFF)
}

/// Friction `f0(x_j, t_k) = (Φ ∗ Λ)/ρ` at every sample, one row per station.
pub fn friction_history(history: &PressureGradientHistory, params: &TubeParams) -> Result<Vec<Vec<f64>>> {
    let weights = memory_weights(history, params.tau())?;
    Ok(history
        .stations()
        .iter()
        .map(|row| {
            (0..row.len())
                .map(|k| weights.convolve_at(row, k) / params.rho)
                .collect()
        })
        .collect())
}

/// Acceleration `U_t = −[1 − Φ ∗]Λ/ρ` at every sample.
pub fn acceleration_history(
    history: &PressureGradientHistory,
    params: &TubeParams,
    model: FrictionModel,
) -> Result<Vec<Vec<f64>>> {
    match model {
        FrictionModel::Inviscid => Ok(history
            .stations()
            .iter()
            .map(|row| row.iter().map(|l| -l / params.rho).collect())
            .collect()),
        FrictionModel::Viscous => {
            let friction = friction_history(history, params)?;
            Ok(history
                .stations()
                .iter()
                .zip(friction)
                .map(|(row, f)| row.iter().zip(f).map(|(l, f)| -l / params.rho + f).collect())
                .collect())
        }
    }
}

/// Settled response of the time-domain friction to `Λ = ρ sin ωt`, fitted
/// as `a sin ωt + b cos ωt` and returned as `a + ib`, to be compared with
/// [`friction_kernel_frequency`].
///
/// The step is `min(τ/50, period/200)`; the fit starts after
/// `max(10 periods, 3τ)` and covers two periods.
pub fn sinusoidal_response(omega: f64, tau: f64) -> Result<Complex64> {
    require_positive("omega", omega)?;
    require_positive("tau", tau)?;
    let period = TAU / omega;
    let dt = (tau / 50.0).min(period / 200.0);
    let start = (10.0 * period).max(3.0 * tau);
    let first = (start / dt).ceil() as usize;
    let window = (2.0 * period / dt).round() as usize;
    let samples = first + window + 1;
    let forcing: Vec<f64> = (0..samples).map(|k| (omega * k as f64 * dt).sin()).collect();
    let weights = ProductWeights::relaxation_memory(tau, dt, samples, MEMORY_CUTOFF)?;

    // Normal equations of the two-parameter least-squares fit.
    let (mut ss, mut sc, mut cc, mut ys, mut yc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in first..samples {
        let (s, c) = (omega * k as f64 * dt).sin_cos();
        let y = weights.convolve_at(&forcing, k);
        ss += s * s;
        sc += s * c;
        cc += c * c;
        ys += y * s;
        yc += y * c;
    }
    let det = ss * cc - sc * sc;
    Ok(Complex64::new((ys * cc - yc * sc) / det, (yc * ss - ys * sc) / det))
}
