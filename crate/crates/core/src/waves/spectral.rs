//! Per-station Laplace inversion with the wavefront delay factored out.
//!
//! Writing the exponent as `−(x/c0)(s + E(s))`, the step response
//! `g_x(u) = L⁻¹[exp(−(x/c0) E(s))/s]` is smooth in `u = t − x/c0`, vanishes
//! at `u = 0` and is what the contour actually sees. Other inputs follow by
//! superposition of ramps: with `Y0` linear between samples,
//!
//! ```text
//! Y(x, t) = Y0(0) g_x(u) + Σ_i σ_i [Γ_x(u − t_i) − Γ_x(u − t_{i+1})],
//! Γ_x = L⁻¹[exp(−(x/c0) E(s))/s²],
//! ```
//!
//! where `σ_i` is the slope on `[t_i, t_{i+1}]`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{InputSignal, Representation, SignallingProblem, WaveField};
use crate::error::{Error, Result};
use crate::specfun::bessel_i_ratio;
use crate::womersley::FrictionModel;

/// `E(s) = s (1/√(1 − Φ̃) − 1) = s (√(1 + Ψ̃) − 1)`, in a form free of
/// cancellation where `Φ̃` is small.
fn excess_exponent(s: Complex64, tau: f64, representation: Representation) -> Result<Complex64> {
    let z = (s * tau).sqrt();
    let r2 = bessel_i_ratio(2, z)?;
    Ok(match representation {
        Representation::Relaxation => {
            let r1 = bessel_i_ratio(1, z)?;
            let phi = 2.0 * r1 / z;
            let q = (r1 * r2).sqrt();
            s * phi / (q * (1.0 + q))
        }
        Representation::Creep => {
            let psi = 2.0 / (z * r2);
            let w = (1.0 + psi).sqrt();
            s * psi / (w + 1.0)
        }
    })
}

struct Station {
    index: usize,
    delay: f64,
    /// First output index with `t_k ≥ x/c0`.
    first: usize,
}

/// Solve the signalling problem by inverting `Ỹ(x, s)` at every station.
///
/// Stations sharing the same sub-step offset of their arrival time share
/// the contour nodes, so `E(s)` is evaluated once per node for all of them.
pub fn solve_signalling(problem: &SignallingProblem) -> Result<WaveField> {
    problem.validate()?;
    let n = problem.steps;
    let dt = problem.dt;
    let ts = problem.times();
    let step_input = matches!(problem.input, InputSignal::Step);
    let inviscid = problem.friction == FrictionModel::Inviscid;

    let samples: Vec<f64> = (0..=n).map(|k| problem.input.value(k as f64 * dt)).collect();
    let slopes: Vec<f64> = samples.windows(2).map(|w| (w[1] - w[0]) / dt).collect();

    let mut values = vec![vec![0.0; n]; problem.xs.len()];
    // Keyed by the arrival offset in units of 1e-9 dt.
    let mut groups: BTreeMap<i64, (f64, Vec<Station>)> = BTreeMap::new();
    for (index, &x) in problem.xs.iter().enumerate() {
        if x == 0.0 {
            values[index].copy_from_slice(&samples[..n]);
            continue;
        }
        let delay = x / problem.c0;
        let first = (delay / dt - 1e-9).ceil().max(0.0) as usize;
        if first >= n {
            continue;
        }
        let offset = (first as f64 * dt - delay).max(0.0);
        let key = (offset / dt * 1e9).round() as i64;
        groups
            .entry(key)
            .or_insert_with(|| (offset, Vec::new()))
            .1
            .push(Station { index, delay, first });
    }

    for (offset, stations) in groups.values() {
        let nodes = stations.iter().map(|st| n - st.first).max().unwrap_or(0);
        let mut response = vec![vec![0.0; nodes]; stations.len()];
        let mut ramp = vec![vec![0.0; nodes]; stations.len()];
        for m in 0..nodes {
            let u = m as f64 * dt + offset;
            if u <= 1e-9 * dt {
                // Behind the front only the inviscid field jumps.
                for r in response.iter_mut() {
                    r[m] = if inviscid { 1.0 } else { 0.0 };
                }
                continue;
            }
            let rule = problem.inversion.rule(u)?;
            let points = rule.points();
            let excess: Vec<Complex64> = if inviscid {
                vec![Complex64::new(0.0, 0.0); points.len()]
            } else {
                points
                    .iter()
                    .map(|&s| {
                        excess_exponent(s, problem.tau, problem.representation).map_err(|e| {
                            Error::Numerical(format!("kernel evaluation failed at t' = {u}, s = {s}: {e}"))
                        })
                    })
                    .collect::<Result<_>>()?
            };
            for (slot, st) in stations.iter().enumerate() {
                if m >= n - st.first {
                    continue;
                }
                let attenuation: Vec<Complex64> = points
                    .iter()
                    .zip(&excess)
                    .map(|(&s, &e)| (-st.delay * e).exp() / s)
                    .collect();
                let at_station = |r: Result<f64>| {
                    r.map_err(|e| Error::Numerical(format!("station x = {}: {e}", problem.xs[st.index])))
                };
                response[slot][m] = at_station(rule.combine(&attenuation))?;
                if !step_input {
                    let integrated: Vec<Complex64> =
                        attenuation.iter().zip(points).map(|(a, s)| a / s).collect();
                    ramp[slot][m] = at_station(rule.combine(&integrated))?;
                }
            }
        }

        for (slot, st) in stations.iter().enumerate() {
            let out = &mut values[st.index][st.first..];
            let g = &response[slot];
            if step_input {
                out.copy_from_slice(&g[..out.len()]);
                continue;
            }
            let big_g = &ramp[slot];
            for (m, y) in out.iter_mut().enumerate() {
                let mut acc = samples[0] * g[m];
                for i in 0..=m {
                    let lower = if m > i { big_g[m - i - 1] } else { 0.0 };
                    acc += slopes[i] * (big_g[m - i] - lower);
                }
                *y = acc;
            }
        }
    }

    Ok(WaveField {
        xs: problem.xs.clone(),
        ts,
        values,
    })
}
