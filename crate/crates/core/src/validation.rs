//! Self-checks of the identities tying the kernels, series and solvers
//! together. Each check reports an error measure and the tolerance it must
//! stay within.

use std::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::laplace::{invert_laplace, one_minus_phi_hat, phi_hat_complex, psi_hat, psi_hat_complex, InversionConfig};
use crate::specfun::{nth_zero, BesselFamily};
use crate::table::format_number;
use crate::time_domain::{
    asymptotic, creep_compliance, phi, psi, relaxation_creep_convolution, relaxation_modulus, sneddon_sums,
    Kernel, KernelSpec, Regime, Truncation,
};
use crate::waves::{solve_signalling, time_domain_oracle, InputSignal, Representation, SignallingProblem};
use crate::womersley::{friction_history, friction_kernel_frequency, sinusoidal_response, FrictionModel, PressureGradientHistory, TubeParams};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    /// Error measure; the check passes when it does not exceed `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.name,
            format_number(self.measured),
            format_number(self.tolerance),
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// `n` points spaced evenly in `log10` between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)).collect()
}

/// Sign violations of `(−1)^k f^{(k)} ≥ 0` for `k = 1, 2`, from divided
/// differences. Changes below `rel_tol` times the local magnitude of `f`
/// (per unit step, for slopes) are treated as rounding noise.
pub fn monotonicity_violations(ts: &[f64], fs: &[f64], rel_tol: f64) -> usize {
    let d1: Vec<f64> = ts.windows(2).zip(fs.windows(2)).map(|(t, f)| (f[1] - f[0]) / (t[1] - t[0])).collect();
    let first = fs
        .windows(2)
        .filter(|f| f[1] - f[0] > rel_tol * f[0].abs().max(f[1].abs()))
        .count();
    let second = (0..d1.len().saturating_sub(1))
        .filter(|&i| {
            let scale = fs[i..i + 3].iter().fold(0.0f64, |m, f| m.max(f.abs()));
            let step = (ts[i + 1] - ts[i]).min(ts[i + 2] - ts[i + 1]);
            d1[i + 1] - d1[i] < -rel_tol * scale / step
        })
        .count();
    first + second
}

fn reciprocity_defect() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in log_grid(1e-4, 1e6, 200) {
        let defect = ((1.0 + psi_hat(s, 1.0)?) * one_minus_phi_hat(s, 1.0)? - 1.0).abs();
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// Largest gap between series and inverted transforms at `t/τ ∈ {0.01, 0.1, 1, 5}`;
/// `Ψ` is compared without its constant `8/τ`.
pub fn series_inversion_gap(which: Kernel) -> Result<f64> {
    let cfg = InversionConfig::default();
    let spec = KernelSpec::new(which, 1.0).with_truncation(Truncation::TailBound(1e-14));
    let mut worst: f64 = 0.0;
    for t in [0.01, 0.1, 1.0, 5.0] {
        let (series, inverted) = match which {
            Kernel::Phi => (
                phi(t, &spec)?.value,
                invert_laplace(|s| phi_hat_complex(s, 1.0).unwrap_or(Complex64::new(f64::NAN, 0.0)), t, &cfg)?,
            ),
            _ => (
                psi(t, &spec)?.value - 8.0,
                invert_laplace(
                    |s| psi_hat_complex(s, 1.0).map(|v| v - 8.0 / s).unwrap_or(Complex64::new(f64::NAN, 0.0)),
                    t,
                    &cfg,
                )?,
            ),
        };
        worst = worst.max((series - inverted).abs());
    }
    Ok(worst)
}

fn rate_identity_gap() -> Result<(f64, f64)> {
    let fixed = Truncation::Fixed(200);
    let g = KernelSpec::new(Kernel::G, 1.0).with_truncation(fixed);
    let j = KernelSpec::new(Kernel::J, 1.0).with_truncation(fixed);
    let p = KernelSpec::new(Kernel::Phi, 1.0).with_truncation(fixed);
    let q = KernelSpec::new(Kernel::Psi, 1.0).with_truncation(fixed);
    let (mut worst_g, mut worst_j): (f64, f64) = (0.0, 0.0);
    for k in 0..=38 {
        let t = 0.1 + 0.05 * k as f64;
        let h = 1e-4 * t;
        let dg = (relaxation_modulus(t + h, &g)?.value - relaxation_modulus(t - h, &g)?.value) / (2.0 * h);
        let dj = (creep_compliance(t + h, &j)?.value - creep_compliance(t - h, &j)?.value) / (2.0 * h);
        let phi_t = phi(t, &p)?.value;
        let psi_t = psi(t, &q)?.value;
        worst_g = worst_g.max((dg + phi_t).abs() / phi_t);
        worst_j = worst_j.max((dj - psi_t).abs() / psi_t);
    }
    Ok((worst_g, worst_j))
}

fn unit_tube() -> Result<TubeParams> {
    TubeParams::circular(1.0, 1.0, 1.0, 1.0 / std::f64::consts::PI)
}

/// The acceptance wave grid: 100 stations `x = 0.03 j`, 1000 steps of `0.003`.
pub fn acceptance_wave_problem(input: InputSignal) -> SignallingProblem {
    let xs = (0..100).map(|j| j as f64 * 0.03).collect();
    SignallingProblem::new(input, xs, 0.003, 1000)
}

pub fn gaussian_input() -> InputSignal {
    InputSignal::GaussianPulse { center: 0.75, width: 0.125 }
}

/// Run every check. Only setup failures produce `Err`; failed checks are
/// reported in the list.
pub fn run_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let l1 = nth_zero(BesselFamily::J0, 1)?;
    let m1 = nth_zero(BesselFamily::J2, 1)?;
    checks.push(Check::new("zeros.lambda1_squared", (l1 * l1 - 5.7832).abs(), 0.005));
    checks.push(Check::new("zeros.mu1_squared", (m1 * m1 - 26.375).abs(), 0.01));

    let (s0, s2) = sneddon_sums(10_000)?;
    checks.push(Check::new("sneddon.j0_tail_10000", 1.0 - s0, 1.3e-4));
    checks.push(Check::new("sneddon.j2_tail_10000", 1.0 / 3.0 - s2, 1.5e-4));
    let mut growth = 0;
    let mut last = (0.0, 0.0);
    for n in [1, 10, 100, 1000, 10_000] {
        let s = sneddon_sums(n)?;
        if s.0 <= last.0 || s.1 <= last.1 {
            growth += 1;
        }
        last = s;
    }
    checks.push(Check::new("sneddon.monotone_growth_violations", growth as f64, 0.0));

    checks.push(Check::new("laplace.reciprocity", reciprocity_defect()?, 1e-11));
    checks.push(Check::new("oracle.phi_series_vs_inversion", series_inversion_gap(Kernel::Phi)?, 1e-6));
    checks.push(Check::new("oracle.psi_series_vs_inversion", series_inversion_gap(Kernel::Psi)?, 1e-6));

    let ts = log_grid(1e-3, 10.0, 200);
    for which in [Kernel::Phi, Kernel::Psi] {
        let spec = KernelSpec::new(which, 1.0);
        let fs = ts.iter().map(|&t| crate::time_domain::evaluate(t, &spec).map(|r| r.value)).collect::<Result<Vec<_>>>()?;
        let offset = if which == Kernel::Psi { 8.0 } else { 0.0 };
        let shifted: Vec<f64> = fs.iter().map(|f| f - offset).collect();
        checks.push(Check::new(
            format!("monotone.{which}_sign_violations"),
            monotonicity_violations(&ts, &shifted, 0.0) as f64,
            0.0,
        ));
    }
    let j_spec = KernelSpec::new(Kernel::J, 1.0);
    let js = ts.iter().map(|&t| creep_compliance(t, &j_spec).map(|r| r.value)).collect::<Result<Vec<_>>>()?;
    let dj: Vec<f64> = ts.windows(2).zip(js.windows(2)).map(|(t, f)| (f[1] - f[0]) / (t[1] - t[0])).collect();
    let mids: Vec<f64> = ts.windows(2).map(|t| 0.5 * (t[0] + t[1])).collect();
    let bernstein = js.iter().filter(|&&j| j < 0.0).count() + dj.iter().filter(|&&d| d < 0.0).count()
        + monotonicity_violations(&mids, &dj, 1e-12);
    checks.push(Check::new("monotone.J_bernstein_violations", bernstein as f64, 0.0));

    let (rate_g, rate_j) = rate_identity_gap()?;
    checks.push(Check::new("rate.dG_plus_g0_phi", rate_g, 1e-5));
    checks.push(Check::new("rate.dJ_minus_j0_psi", rate_j, 1e-5));

    for t in [0.5, 1.0, 2.0] {
        let v = relaxation_creep_convolution(t, 1.0, 1.0, 4000)?;
        checks.push(Check::new(format!("reciprocity.convolution_t{t}"), (v - t).abs() / t, 1e-4));
    }

    let phi_spec = KernelSpec::new(Kernel::Phi, 1.0).with_truncation(Truncation::Fixed(2000));
    let short = phi(1e-4, &phi_spec)?.value * (std::f64::consts::PI * 1e-4).sqrt() / 2.0;
    checks.push(Check::new("asymptotic.phi_short_ratio", (short - 1.0).abs(), 0.02));
    let long = phi(2.0, &KernelSpec::new(Kernel::Phi, 1.0))?.value / asymptotic(Kernel::Phi, Regime::Long, 2.0, 1.0)?;
    checks.push(Check::new("asymptotic.phi_long_ratio", (long - 1.0).abs(), 1e-6));
    let psi_long = psi(2.0, &KernelSpec::new(Kernel::Psi, 1.0))?.value - asymptotic(Kernel::Psi, Regime::Long, 2.0, 1.0)?;
    checks.push(Check::new("asymptotic.psi_long_gap", psi_long.abs(), 1e-6));

    let g10k = relaxation_modulus(0.0, &KernelSpec::new(Kernel::G, 1.0))?.value;
    checks.push(Check::new("endpoint.G0", (g10k - 1.0).abs(), 2e-4));
    let j0 = creep_compliance(0.0, &KernelSpec::new(Kernel::J, 1.0))?.value;
    checks.push(Check::new("endpoint.J0", (j0 - 1.0).abs(), 2e-4));
    let j1 = creep_compliance(1.0, &KernelSpec::new(Kernel::J, 1.0))?.value;
    checks.push(Check::new("endpoint.J_linear_at_tau", (j1 - (4.0 / 3.0 + 8.0)).abs(), 1e-8));

    let params = unit_tube()?;
    let dt: f64 = 0.02;
    let n = (10.0 / dt).round() as usize + 1;
    let history = PressureGradientHistory::new(dt, vec![vec![1.0; n]])?;
    let steady = friction_history(&history, &params)?[0][n - 1];
    checks.push(Check::new("womersley.steady_friction", (steady - 1.0).abs(), 1e-3));
    for omega in [0.1, 1.0, 10.0, 100.0] {
        let measured = sinusoidal_response(omega, 1.0)?;
        let exact = friction_kernel_frequency(omega, 1.0)?;
        checks.push(Check::new(
            format!("womersley.modulus_w{omega}"),
            (measured.norm() / exact.norm() - 1.0).abs(),
            0.01,
        ));
        checks.push(Check::new(
            format!("womersley.phase_w{omega}"),
            (measured.arg() / exact.arg() - 1.0).abs(),
            0.01,
        ));
    }

    checks.extend(wave_checks()?);
    Ok(checks)
}

fn wave_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut inviscid = acceptance_wave_problem(InputSignal::Step);
    inviscid.friction = FrictionModel::Inviscid;
    let field = solve_signalling(&inviscid)?;
    let mut worst: f64 = 0.0;
    for (j, &x) in field.xs.iter().enumerate() {
        for (k, &t) in field.ts.iter().enumerate() {
            let lag = t - x;
            if lag.abs() > 1e-9 {
                let exact = if lag > 0.0 { 1.0 } else { 0.0 };
                worst = worst.max((field.values[j][k] - exact).abs());
            }
        }
    }
    checks.push(Check::new("wave.inviscid_translation", worst, 1e-6));

    let relax = solve_signalling(&acceptance_wave_problem(InputSignal::Step))?;
    let mut before_front: f64 = 0.0;
    for (j, &x) in relax.xs.iter().enumerate() {
        for (k, &t) in relax.ts.iter().enumerate() {
            if t < x {
                before_front = before_front.max(relax.values[j][k].abs());
            }
        }
    }
    checks.push(Check::new("wave.causality", before_front, 1e-6));

    let mut creep_problem = acceptance_wave_problem(InputSignal::Step);
    creep_problem.representation = Representation::Creep;
    let creep = solve_signalling(&creep_problem)?;
    checks.push(Check::new("wave.representation_agreement", relax.max_abs_diff(&creep)?, 1e-6));

    let pulse = acceptance_wave_problem(gaussian_input());
    let spectral = solve_signalling(&pulse)?;
    let oracle = time_domain_oracle(&pulse)?;
    checks.push(Check::new("wave.spectral_vs_oracle", spectral.max_abs_diff(&oracle)?, 0.02));

    let peaks: Vec<f64> = spectral.values.iter().map(|row| row.iter().cloned().fold(0.0, f64::max)).collect();
    let rises = peaks.windows(2).filter(|p| p[1] > p[0] + 1e-12).count();
    checks.push(Check::new("wave.peak_attenuation_violations", rises as f64, 0.0));

    checks.push(Check::new("wave.front_smoothing_violations", front_smoothing_violations(&relax, 1.0) as f64, 0.0));
    Ok(checks)
}

/// Samples in `x/c0 < t ≤ x/c0 + window` (unit `c0`) where the step response falls.
pub fn front_smoothing_violations(field: &crate::waves::WaveField, window: f64) -> usize {
    let mut count = 0;
    for (j, &x) in field.xs.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let row = &field.values[j];
        for k in 1..row.len() {
            let t = field.ts[k];
            if t > x && t <= x + window && row[k] < row[k - 1] - 1e-12 {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_formatting() {
        let c = Check::new("demo", 1e-12, 1e-11);
        assert!(c.passed());
        assert_eq!(c.to_string(), "demo,1e-12,1e-11,pass");
        assert!(!Check::new("demo", 2.0, 1.0).passed());
    }

    #[test]
    fn grids_and_sign_counts() {
        let g = log_grid(1e-3, 10.0, 5);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[4] - 10.0).abs() < 1e-12);
        let f: Vec<f64> = g.iter().map(|t| (-t).exp()).collect();
        assert_eq!(monotonicity_violations(&g, &f, 0.0), 0);
        let f: Vec<f64> = g.iter().map(|t| t * t).collect();
        assert!(monotonicity_violations(&g, &f, 0.0) > 0);
    }
}
