//! Time-domain memory and material functions as Dirichlet series over Bessel zeros.
//!
//! With `λn` the zeros of `J0`, `μn` the zeros of `J2` and `x = t/τ`:
//!
//! ```text
//! Φ(t) = (4/τ) Σ exp(−λn² x)
//! Ψ(t) = 8/τ + (4/τ) Σ exp(−μn² x)
//! G(t) = G(0⁺) Σ (4/λn²) exp(−λn² x)
//! J(t) = J(0⁺) [4/3 + 8x − Σ (4/μn²) exp(−μn² x)]
//! ```
//!
//! Every evaluation reports the number of terms used and a bound on the
//! neglected tail. For coefficients that do not increase with `n` and
//! exponents whose gaps `λ_{n+1}² − λ_n²` do not shrink, the tail after `N`
//! terms is bounded by the geometric series
//!
//! ```text
//! c_{N+1} e^{−λ_{N+1}² x} / (1 − e^{−(λ_{N+2}² − λ_{N+1}²) x}).
//! ```

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::specfun::{zero, BesselFamily};

/// Default absolute tail tolerance of adaptive evaluations.
pub const DEFAULT_TAIL_EPS: f64 = 1e-10;

/// Adaptive truncation never stops before `λ_N² t/τ` reaches this value.
const MIN_DECAY_EXPONENT: f64 = 30.0;

const MAX_TERMS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// Relaxation memory function `Φ`.
    Phi,
    /// Creep memory function `Ψ`.
    Psi,
    /// Relaxation modulus `G`.
    G,
    /// Creep compliance `J`.
    J,
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi" => Ok(Kernel::Phi),
            "psi" => Ok(Kernel::Psi),
            "g" | "relaxation" => Ok(Kernel::G),
            "j" | "creep" => Ok(Kernel::J),
            other => Err(Error::Config(format!("unknown kernel '{other}' (expected phi, psi, g or j)"))),
        }
    }
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kernel::Phi => "phi",
            Kernel::Psi => "psi",
            Kernel::G => "G",
            Kernel::J => "J",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// Exactly `N` terms.
    Fixed(usize),
    /// As many terms as needed for a tail bound below `eps` (absolute).
    TailBound(f64),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::TailBound(DEFAULT_TAIL_EPS)
    }
}

impl Truncation {
    fn validate(&self) -> Result<()> {
        match *self {
            Truncation::Fixed(0) => Err(Error::Config("fixed truncation needs at least one term".into())),
            Truncation::TailBound(eps) if !(eps > 0.0 && eps.is_finite()) => Err(Error::Config(format!(
                "tail tolerance must be positive, got {eps}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Which function to evaluate, its time scale, its amplitude and how to truncate.
///
/// `scale` is `G(0⁺)` for [`Kernel::G`] and `J(0⁺)` for [`Kernel::J`]; the
/// memory functions ignore it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub which: Kernel,
    pub tau: f64,
    pub scale: f64,
    pub truncation: Truncation,
}

impl KernelSpec {
    pub fn new(which: Kernel, tau: f64) -> Self {
        Self {
            which,
            tau,
            scale: 1.0,
            truncation: Truncation::default(),
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("tau", self.tau)?;
        require_positive("scale", self.scale)?;
        self.truncation.validate()
    }
}

/// A series value with its truncation bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    /// Bound on the absolute truncation error of `value`.
    pub tail_estimate: f64,
    pub terms_used: usize,
}

impl SeriesResult {
    fn exact(value: f64) -> Self {
        Self {
            value,
            tail_estimate: 0.0,
            terms_used: 0,
        }
    }
}

/// Closed values of `Σ 4/z_n^{2p}` (Rayleigh sums), used at `x = 0`.
fn closed_sum(family: BesselFamily, power: u32) -> Option<f64> {
    match (family, power) {
        (BesselFamily::J0, 1) => Some(1.0),
        (BesselFamily::J0, 2) => Some(1.0 / 8.0),
        (BesselFamily::J0, 3) => Some(1.0 / 48.0),
        (BesselFamily::J2, 1) => Some(1.0 / 3.0),
        (BesselFamily::J2, 2) => Some(1.0 / 144.0),
        _ => None,
    }
}

/// `Σ_n (4 / z_n^{2·power}) exp(−z_n² x)` over the positive zeros `z_n` of `family`.
///
/// At `x = 0` the closed sum is returned for `power >= 1`; `power = 0`
/// diverges there.
pub fn dirichlet_sum(family: BesselFamily, power: u32, x: f64, truncation: Truncation) -> Result<SeriesResult> {
    truncation.validate()?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("series argument t/tau must be non-negative, got {x}")));
    }
    if x == 0.0 {
        return closed_sum(family, power).map(SeriesResult::exact).ok_or_else(|| {
            Error::Domain(format!(
                "the {family} series with power {power} diverges at t = 0 (t^(-1/2) short-time singularity)"
            ))
        });
    }
    let coefficient = |z: f64| 4.0 * (z * z).powi(-(power as i32));
    let tail_after = |n: usize| -> Result<f64> {
        let next = zero(family, n + 1)?;
        let after = zero(family, n + 2)?;
        let gap = (after * after - next * next) * x;
        Ok(coefficient(next) * (-next * next * x).exp() / -(-gap).exp_m1())
    };

    let mut terms = Vec::new();
    let mut tail;
    loop {
        let n = terms.len() + 1;
        if n > MAX_TERMS {
            return Err(Error::Numerical(format!(
                "{family} series at t/tau = {x} needs more than {MAX_TERMS} terms"
            )));
        }
        let z = zero(family, n)?;
        terms.push(coefficient(z) * (-z * z * x).exp());
        match truncation {
            Truncation::Fixed(count) => {
                if n >= count {
                    tail = tail_after(n)?;
                    break;
                }
            }
            Truncation::TailBound(eps) => {
                if z * z * x >= MIN_DECAY_EXPONENT {
                    tail = tail_after(n)?;
                    if tail <= eps {
                        break;
                    }
                }
            }
        }
    }
    // Smallest terms first.
    let value = terms.iter().rev().sum();
    if !tail.is_finite() {
        tail = f64::INFINITY;
    }
    Ok(SeriesResult {
        value,
        tail_estimate: tail,
        terms_used: terms.len(),
    })
}

/// Rescale the requested absolute tolerance to the raw series.
fn raw_truncation(truncation: Truncation, factor: f64) -> Truncation {
    match truncation {
        Truncation::TailBound(eps) => Truncation::TailBound(eps / factor),
        fixed => fixed,
    }
}

fn check_positive_time(t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "memory functions need t > 0 (they diverge like t^(-1/2) at t = 0), got {t}"
        )));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("t must be non-negative, got {t}")));
    }
    Ok(())
}

/// Relaxation memory function `Φ(t)`.
pub fn phi(t: f64, spec: &KernelSpec) -> Result<SeriesResult> {
    spec.validate()?;
    check_positive_time(t)?;
    let factor = 1.0 / spec.tau;
    let raw = dirichlet_sum(BesselFamily::J0, 0, t / spec.tau, raw_truncation(spec.truncation, factor))?;
    Ok(SeriesResult {
        value: factor * raw.value,
        tail_estimate: factor * raw.tail_estimate,
        terms_used: raw.terms_used,
    })
}

/// Creep memory function `Ψ(t)`.
pub fn psi(t: f64, spec: &KernelSpec) -> Result<SeriesResult> {
    spec.validate()?;
    check_positive_time(t)?;
    let factor = 1.0 / spec.tau;
    let raw = dirichlet_sum(BesselFamily::J2, 0, t / spec.tau, raw_truncation(spec.truncation, factor))?;
    Ok(SeriesResult {
        value: factor * (8.0 + raw.value),
        tail_estimate: factor * raw.tail_estimate,
        terms_used: raw.terms_used,
    })
}

/// Relaxation modulus `G(t)`; exactly `G(0⁺)` at `t = 0`.
pub fn relaxation_modulus(t: f64, spec: &KernelSpec) -> Result<SeriesResult> {
    spec.validate()?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(SeriesResult::exact(spec.scale));
    }
    let raw = dirichlet_sum(BesselFamily::J0, 1, t / spec.tau, raw_truncation(spec.truncation, spec.scale))?;
    Ok(SeriesResult {
        value: spec.scale * raw.value,
        tail_estimate: spec.scale * raw.tail_estimate,
        terms_used: raw.terms_used,
    })
}

/// Creep compliance `J(t)`; exactly `J(0⁺)` at `t = 0`.
pub fn creep_compliance(t: f64, spec: &KernelSpec) -> Result<SeriesResult> {
    spec.validate()?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(SeriesResult::exact(spec.scale));
    }
    let x = t / spec.tau;
    let raw = dirichlet_sum(BesselFamily::J2, 1, x, raw_truncation(spec.truncation, spec.scale))?;
    Ok(SeriesResult {
        value: spec.scale * (4.0 / 3.0 + 8.0 * x - raw.value),
        tail_estimate: spec.scale * raw.tail_estimate,
        terms_used: raw.terms_used,
    })
}

/// Evaluate whichever function `spec.which` names.
pub fn evaluate(t: f64, spec: &KernelSpec) -> Result<SeriesResult> {
    match spec.which {
        Kernel::Phi => phi(t, spec),
        Kernel::Psi => psi(t, spec),
        Kernel::G => relaxation_modulus(t, spec),
        Kernel::J => creep_compliance(t, spec),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Short,
    Long,
}

/// Closed-form short- and long-time forms of `Φ` and `Ψ`:
///
/// ```text
/// Φ ~ 2/√(πτ) t^{-1/2}  (t → 0),   Φ ~ (4/τ) e^{−λ1² t/τ}        (t → ∞)
/// Ψ ~ 2/√(πτ) t^{-1/2}  (t → 0),   Ψ ~ 8/τ + (4/τ) e^{−μ1² t/τ}  (t → ∞)
/// ```
pub fn asymptotic(which: Kernel, regime: Regime, t: f64, tau: f64) -> Result<f64> {
    require_positive("tau", tau)?;
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Domain(format!("asymptotic forms need t > 0, got {t}")));
    }
    let short = || 2.0 / (PI * tau).sqrt() / t.sqrt();
    match (which, regime) {
        (Kernel::Phi | Kernel::Psi, Regime::Short) => Ok(short()),
        (Kernel::Phi, Regime::Long) => {
            let l1 = zero(BesselFamily::J0, 1)?;
            Ok(4.0 / tau * (-l1 * l1 * t / tau).exp())
        }
        (Kernel::Psi, Regime::Long) => {
            let m1 = zero(BesselFamily::J2, 1)?;
            Ok(8.0 / tau + 4.0 / tau * (-m1 * m1 * t / tau).exp())
        }
        (other, _) => Err(Error::Domain(format!(
            "asymptotic forms are defined for phi and psi, not {other}"
        ))),
    }
}

/// Partial sums `(Σ_{n≤N} 4/λn², Σ_{n≤N} 4/μn²)`, which tend to `1` and `1/3`.
pub fn sneddon_sums(count: usize) -> Result<(f64, f64)> {
    if count == 0 {
        return Err(Error::Domain("sneddon_sums needs at least one term".into()));
    }
    let partial = |family| -> Result<f64> {
        let mut terms = Vec::with_capacity(count);
        for n in 1..=count {
            let z = zero(family, n)?;
            terms.push(4.0 / (z * z));
        }
        Ok(terms.iter().rev().sum())
    };
    Ok((partial(BesselFamily::J0)?, partial(BesselFamily::J2)?))
}

/// Product-integration weights for a causal convolution
/// `∫_0^{t_k} k(u) y(t_k − u) du` on a uniform grid, with `y` linear
/// between samples and the kernel integrated exactly over each cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductWeights {
    dt: f64,
    weights: Vec<f64>,
}

impl ProductWeights {
    /// Build from per-cell kernel moments `(∫ k, ∫ u k)` over `[j dt, (j+1) dt]`.
    fn from_cell_moments(dt: f64, moments: &[(f64, f64)]) -> Self {
        let mut weights = vec![0.0; moments.len() + 1];
        for (j, &(mass, first)) in moments.iter().enumerate() {
            let left = j as f64 * dt;
            let right = left + dt;
            // Hat functions of the nodes at the two ends of the cell.
            weights[j] += (right * mass - first) / dt;
            weights[j + 1] += (first - left * mass) / dt;
        }
        Self { dt, weights }
    }

    /// Weights for the relaxation memory kernel `Φ` with time scale `tau`.
    ///
    /// The list stops once the kernel mass beyond it falls below `cutoff`
    /// (or after `max_cells` cells). The singular first cell is integrated
    /// exactly through `G`: `∫_a^b Φ = [G]_b^a / G(0⁺)`.
    pub fn relaxation_memory(tau: f64, dt: f64, max_cells: usize, cutoff: f64) -> Result<Self> {
        require_positive("tau", tau)?;
        require_positive("dt", dt)?;
        let trunc = Truncation::TailBound(1e-17);
        let node = |j: usize| -> Result<(f64, f64, f64)> {
            let u = j as f64 * dt;
            let x = u / tau;
            let g = dirichlet_sum(BesselFamily::J0, 1, x, trunc)?.value;
            let k = dirichlet_sum(BesselFamily::J0, 2, x, trunc)?.value;
            Ok((u, g, k))
        };
        let mut moments = Vec::new();
        let mut left = node(0)?;
        for j in 0..max_cells {
            let right = node(j + 1)?;
            let (a, ga, ka) = left;
            let (b, gb, kb) = right;
            let mass = ga - gb;
            let first = a * ga - b * gb + tau * (ka - kb);
            moments.push((mass, first));
            left = right;
            if gb < cutoff {
                break;
            }
        }
        Ok(Self::from_cell_moments(dt, &moments))
    }

    /// Weights for the relaxation modulus `G` itself (with `G(0⁺) = g0`).
    pub fn relaxation_modulus(tau: f64, g0: f64, dt: f64, cells: usize) -> Result<Self> {
        require_positive("tau", tau)?;
        require_positive("g0", g0)?;
        require_positive("dt", dt)?;
        let trunc = Truncation::TailBound(1e-17);
        let node = |j: usize| -> Result<(f64, f64, f64)> {
            let u = j as f64 * dt;
            let x = u / tau;
            let k = dirichlet_sum(BesselFamily::J0, 2, x, trunc)?.value;
            let l = dirichlet_sum(BesselFamily::J0, 3, x, trunc)?.value;
            Ok((u, k, l))
        };
        let mut moments = Vec::with_capacity(cells);
        let mut left = node(0)?;
        for j in 0..cells {
            let right = node(j + 1)?;
            let (a, ka, la) = left;
            let (b, kb, lb) = right;
            let mass = g0 * tau * (ka - kb);
            let first = g0 * tau * (a * ka - b * kb + tau * (la - lb));
            moments.push((mass, first));
            left = right;
        }
        Ok(Self::from_cell_moments(dt, &moments))
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Weight `w_m` multiplies the sample `y_{k−m}`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_m w_m y_{k−m}` over the samples available up to index `k`.
    pub fn convolve_at(&self, history: &[f64], k: usize) -> f64 {
        let reach = k.min(self.weights.len() - 1);
        (0..=reach).map(|m| self.weights[m] * history[k - m]).sum()
    }
}

/// `∫_0^t G(t−u) J(u) du`, which equals `t` exactly because `s G̃ · s J̃ = 1`.
///
/// `G` enters through exact cell moments; `J` is sampled on `cells + 1`
/// nodes and interpolated linearly.
pub fn relaxation_creep_convolution(t: f64, tau: f64, g0: f64, cells: usize) -> Result<f64> {
    require_positive("t", t)?;
    if cells == 0 {
        return Err(Error::Config("convolution needs at least one cell".into()));
    }
    let dt = t / cells as f64;
    let weights = ProductWeights::relaxation_modulus(tau, g0, dt, cells)?;
    let spec = KernelSpec::new(Kernel::J, tau)
        .with_scale(1.0 / g0)
        .with_truncation(Truncation::TailBound(1e-15));
    let creep = (0..=cells)
        .map(|j| creep_compliance(j as f64 * dt, &spec).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(weights.convolve_at(&creep, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // First zeros to 30 digits.
    const LAMBDA1: f64 = 2.404_825_557_695_772_8;
    const MU1: f64 = 5.135_622_301_840_682_6;

    fn unit(which: Kernel) -> KernelSpec {
        KernelSpec::new(which, 1.0)
    }

    #[test]
    fn phi_examples() {
        let fixed = unit(Kernel::Phi).with_truncation(Truncation::Fixed(100));
        // 0.0123155621384145777908244 from a 400-term extended-precision sum.
        assert_abs_diff_eq!(phi(1.0, &fixed).unwrap().value, 0.012_315_562_138_414_578, epsilon = 1e-15);
        let one_term = 4.0 * (-2.0 * LAMBDA1 * LAMBDA1).exp();
        let r = phi(2.0, &unit(Kernel::Phi)).unwrap();
        assert!((r.value / one_term - 1.0).abs() < 1e-9);
        let short = phi(1e-4, &unit(Kernel::Phi).with_truncation(Truncation::Fixed(2000))).unwrap();
        assert!((short.value - 112.8).abs() < 2.3);
    }

    #[test]
    fn psi_examples() {
        let r = psi(1.0, &unit(Kernel::Psi)).unwrap();
        assert_abs_diff_eq!(r.value, 8.0, epsilon = 1e-10);
        // 115.880607500594545 from an extended-precision sum; the short-time
        // expansion is 2/√(πt) + 3 + O(√t), so the constant 8 is not additive.
        let short = psi(1e-4, &unit(Kernel::Psi)).unwrap();
        assert_abs_diff_eq!(short.value, 115.880_607_500_594_54, epsilon = 1e-9);
        let leading = asymptotic(Kernel::Psi, Regime::Short, 1e-4, 1.0).unwrap();
        assert_abs_diff_eq!(short.value - leading, 3.0, epsilon = 0.05);
        assert_eq!(psi(1e6, &unit(Kernel::Psi)).unwrap().value, 8.0);
        assert_abs_diff_eq!(psi(2.0, &KernelSpec::new(Kernel::Psi, 2.0)).unwrap().value, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn modulus_and_compliance_examples() {
        // 0.00212954627728242 and 9.33333333333280058 from extended-precision sums.
        assert_abs_diff_eq!(relaxation_modulus(1.0, &unit(Kernel::G)).unwrap().value, 0.002_129_546_277_282_42, epsilon = 1e-13);
        assert_abs_diff_eq!(creep_compliance(1.0, &unit(Kernel::J)).unwrap().value, 9.333_333_333_332_8, epsilon = 1e-12);
        assert_eq!(relaxation_modulus(0.0, &unit(Kernel::G)).unwrap().value, 1.0);
        assert_eq!(creep_compliance(0.0, &unit(Kernel::J).with_scale(0.5)).unwrap().value, 0.5);
        assert!(relaxation_modulus(200.0, &unit(Kernel::G)).unwrap().value < 1e-300);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(phi(0.0, &unit(Kernel::Phi)), Err(Error::Domain(_))));
        assert!(matches!(psi(-1.0, &unit(Kernel::Psi)), Err(Error::Domain(_))));
        assert!(matches!(relaxation_modulus(-1.0, &unit(Kernel::G)), Err(Error::Domain(_))));
        let bad = unit(Kernel::Phi).with_truncation(Truncation::Fixed(0));
        assert!(matches!(phi(1.0, &bad), Err(Error::Config(_))));
        let bad = unit(Kernel::Phi).with_truncation(Truncation::TailBound(0.0));
        assert!(matches!(phi(1.0, &bad), Err(Error::Config(_))));
        assert!(matches!(asymptotic(Kernel::G, Regime::Long, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(sneddon_sums(0), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_bound_is_honoured_and_conservative() {
        for &t in &[1e-4, 1e-3, 0.05, 0.3, 2.0] {
            for eps in [1e-6, 1e-10, 1e-13] {
                let spec = unit(Kernel::Phi).with_truncation(Truncation::TailBound(eps));
                let r = phi(t, &spec).unwrap();
                assert!(r.tail_estimate <= eps);
                let reference = phi(t, &unit(Kernel::Phi).with_truncation(Truncation::Fixed(r.terms_used + 3000))).unwrap();
                let actual = (reference.value - r.value).abs();
                assert!(actual <= r.tail_estimate + 4.0 * f64::EPSILON * r.value, "t={t} eps={eps}: {actual} > {}", r.tail_estimate);
            }
        }
    }

    #[test]
    fn short_time_rule_uses_enough_terms() {
        let t = 1e-4;
        let r = phi(t, &unit(Kernel::Phi)).unwrap();
        let last = zero(BesselFamily::J0, r.terms_used).unwrap();
        assert!(last * last * t >= MIN_DECAY_EXPONENT);
    }

    #[test]
    fn asymptotic_forms() {
        assert_abs_diff_eq!(asymptotic(Kernel::Phi, Regime::Short, 1e-4, 1.0).unwrap(), 112.837_916_709_551_26, epsilon = 1e-9);
        // 4 e^{-2 λ1²} = 3.79182676948489e-5
        assert_abs_diff_eq!(asymptotic(Kernel::Phi, Regime::Long, 2.0, 1.0).unwrap(), 3.791_826_769_484_89e-5, epsilon = 1e-17);
        assert_eq!(asymptotic(Kernel::Psi, Regime::Long, f64::INFINITY, 1.0).unwrap(), 8.0);
        let psi_long = asymptotic(Kernel::Psi, Regime::Long, 0.1, 1.0).unwrap();
        assert_abs_diff_eq!(psi_long, 8.0 + 4.0 * (-0.1 * MU1 * MU1).exp(), epsilon = 1e-14);
    }

    #[test]
    fn sneddon_partial_sums() {
        let (a, b) = sneddon_sums(1).unwrap();
        assert_abs_diff_eq!(a, 4.0 / (LAMBDA1 * LAMBDA1), epsilon = 1e-15);
        assert_abs_diff_eq!(b, 4.0 / (MU1 * MU1), epsilon = 1e-15);
        assert_abs_diff_eq!(a, 0.691_66, epsilon = 1e-5);
        assert_abs_diff_eq!(b, 0.151_66, epsilon = 1e-5);
        let (a100, b100) = sneddon_sums(100).unwrap();
        assert!(a100 > a && a100 < 1.0);
        assert!(b100 > b && b100 < 1.0 / 3.0);
    }

    #[test]
    fn closed_sums_match_long_partial_sums() {
        // Rayleigh sums: tails fall like N^{1-2p}.
        for (family, power, tol) in [
            (BesselFamily::J0, 2, 1e-10),
            (BesselFamily::J0, 3, 1e-14),
            (BesselFamily::J2, 2, 1e-10),
        ] {
            let partial: f64 = (1..=4000)
                .map(|n| {
                    let z = zero(family, n).unwrap();
                    4.0 / (z * z).powi(power as i32)
                })
                .rev()
                .sum();
            assert_abs_diff_eq!(partial, closed_sum(family, power).unwrap(), epsilon = tol);
        }
    }

    #[test]
    fn memory_weights_have_exact_mass() {
        let dt = 0.01;
        let w = ProductWeights::relaxation_memory(1.0, dt, 50, 0.0).unwrap();
        let mass: f64 = w.weights().iter().sum();
        let g = relaxation_modulus(0.5, &unit(Kernel::G).with_truncation(Truncation::TailBound(1e-16))).unwrap();
        assert_abs_diff_eq!(mass, 1.0 - g.value, epsilon = 1e-14);
        // First-cell weight against the t^{-1/2} short-time form: ∫_0^h Φ ≈ 4√(h/π) − h.
        let first_cell_mass = w.weights()[0] + 0.5 * (w.weights()[1] - w.weights()[0]);
        assert!(first_cell_mass > 0.0);
        let approx_mass = 4.0 * (dt / PI).sqrt() - dt;
        let exact_mass = 1.0 - relaxation_modulus(dt, &unit(Kernel::G)).unwrap().value;
        assert!((exact_mass - approx_mass).abs() < 1e-3 * approx_mass);
    }

    #[test]
    fn convolution_reproduces_linear_identity() {
        let value = relaxation_creep_convolution(1.0, 1.0, 1.0, 2000).unwrap();
        assert!((value - 1.0).abs() < 1e-4);
    }
}
