//! Explicit finite differences for the relaxation form, as an independent
//! check on the spectral solver.

use super::{SignallingProblem, WaveField};
use crate::error::{Error, Result};
use crate::time_domain::ProductWeights;
use crate::womersley::FrictionModel;

const MAX_STATIONS: usize = 200;
const MAX_STEPS: usize = 2000;
const MEMORY_CUTOFF: f64 = 1e-13;

/// Integrate `Y_tt = c0² [1 − Φ ∗] Y_xx` with leapfrog in time and a
/// fourth-order difference in space (one-sided next to the
/// ends). The memory term uses the same product-integration weights as the
/// friction history, applied to `Y_xx` taken as linear in time between steps.
///
/// The stations must form a uniform grid starting at `x = 0`; the last one
/// is held at zero. The representation field of the problem is ignored.
pub fn time_domain_oracle(problem: &SignallingProblem) -> Result<WaveField> {
    problem.validate()?;
    let xs = &problem.xs;
    let nx = xs.len();
    let nt = problem.steps;
    if nx < 3 {
        return Err(Error::Config("finite differences need at least three stations".into()));
    }
    if nx > MAX_STATIONS || nt > MAX_STEPS {
        return Err(Error::Config(format!(
            "grid {nx}x{nt} exceeds the {MAX_STATIONS}x{MAX_STEPS} limit of the finite-difference check"
        )));
    }
    let dx = xs[1] - xs[0];
    if xs[0] != 0.0 || !(dx > 0.0) || xs.iter().enumerate().any(|(j, x)| (x - j as f64 * dx).abs() > 1e-9 * dx) {
        return Err(Error::Config("stations must be uniformly spaced from x = 0".into()));
    }
    let dt = problem.dt;
    if dt > dx / problem.c0 {
        return Err(Error::Config(format!(
            "time step {dt} exceeds the stability limit dx/c0 = {}",
            dx / problem.c0
        )));
    }

    let weights = match problem.friction {
        FrictionModel::Viscous => ProductWeights::relaxation_memory(problem.tau, dt, nt, MEMORY_CUTOFF)?
            .weights()
            .to_vec(),
        FrictionModel::Inviscid => Vec::new(),
    };

    let c2dt2 = (problem.c0 * dt).powi(2);
    let inv_dx2 = 1.0 / (dx * dx);
    let second_difference = |y: &[f64]| -> Vec<f64> {
        let mut d2 = vec![0.0; nx];
        for j in 1..nx - 1 {
            d2[j] = if nx < 6 {
                (y[j - 1] - 2.0 * y[j] + y[j + 1]) * inv_dx2
            } else if j == 1 {
                (10.0 * y[0] - 15.0 * y[1] - 4.0 * y[2] + 14.0 * y[3] - 6.0 * y[4] + y[5]) * inv_dx2 / 12.0
            } else if j == nx - 2 {
                let k = nx - 1;
                (10.0 * y[k] - 15.0 * y[k - 1] - 4.0 * y[k - 2] + 14.0 * y[k - 3] - 6.0 * y[k - 4] + y[k - 5]) * inv_dx2
                    / 12.0
            } else {
                (-y[j - 2] + 16.0 * y[j - 1] - 30.0 * y[j] + 16.0 * y[j + 1] - y[j + 2]) * inv_dx2 / 12.0
            };
        }
        d2
    };

    let mut values = vec![vec![0.0; nt]; nx];
    let mut history: Vec<Vec<f64>> = Vec::with_capacity(nt);
    let mut prev = vec![0.0; nx];
    let mut cur = vec![0.0; nx];
    cur[0] = problem.input.value(0.0);
    for n in 0..nt {
        for (j, row) in values.iter_mut().enumerate() {
            row[n] = cur[j];
        }
        if n + 1 == nt {
            break;
        }
        history.push(second_difference(&cur));
        let d2 = &history[n];
        let mut accel = d2.clone();
        for (m, w) in weights.iter().enumerate().take(n + 1) {
            let past = &history[n - m];
            for j in 1..nx - 1 {
                accel[j] -= w * past[j];
            }
        }
        let mut next = vec![0.0; nx];
        for j in 1..nx - 1 {
            next[j] = if n == 0 {
                cur[j] + 0.5 * c2dt2 * accel[j]
            } else {
                2.0 * cur[j] - prev[j] + c2dt2 * accel[j]
            };
        }
        next[0] = problem.input.value((n + 1) as f64 * dt);
        prev = std::mem::replace(&mut cur, next);
    }

    Ok(WaveField {
        xs: xs.clone(),
        ts: problem.times(),
        values,
    })
}
