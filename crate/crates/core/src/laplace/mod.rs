//! Closed-form Laplace-domain kernels of the tube model and numerical
//! inversion of Laplace transforms.
//!
//! With `z = √(sτ)`:
//!
//! ```text
//! Φ̃(s)     = (2/z) I1(z)/I0(z)
//! Ψ̃(s)     = (2/z) I1(z)/I2(z)
//! 1 − Φ̃(s) = I2(z)/I0(z)          (recurrence I0 − (2/z) I1 = I2)
//! s G̃(s)   = G(0⁺) [1 − Φ̃(s)]
//! s J̃(s)   = J(0⁺) [1 + Ψ̃(s)]
//! ```
//!
//! Everything is computed from the ratios `I1/I0` and `I2/I1`; the raw
//! functions would overflow for `sτ` beyond about `5e5`.

mod inversion;

pub use inversion::{invert_laplace, InversionConfig, InversionMethod, InversionRule};

use num_complex::Complex64;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::specfun::bessel_i_ratio;

/// Scales of the material functions: `τ`, `G(0⁺)` and `J(0⁺) = 1/G(0⁺)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceKernel {
    tau: f64,
    g0: f64,
    j0: f64,
}

impl LaplaceKernel {
    /// Kernel with `J(0⁺)` derived as `1/G(0⁺)`.
    pub fn new(tau: f64, g0: f64) -> Result<Self> {
        require_positive("tau", tau)?;
        require_positive("g0", g0)?;
        Ok(Self { tau, g0, j0: 1.0 / g0 })
    }

    /// Kernel with both initial values given; they must be reciprocal.
    pub fn with_compliance(tau: f64, g0: f64, j0: f64) -> Result<Self> {
        require_positive("j0", j0)?;
        let kernel = Self::new(tau, g0)?;
        if (g0 * j0 - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "G(0+) * J(0+) must equal 1, got {g0} * {j0} = {}",
                g0 * j0
            )));
        }
        Ok(Self { j0, ..kernel })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn phi_hat(&self, s: f64) -> Result<f64> {
        phi_hat(s, self.tau)
    }

    pub fn psi_hat(&self, s: f64) -> Result<f64> {
        psi_hat(s, self.tau)
    }

    pub fn g_hat_times_s(&self, s: f64) -> Result<f64> {
        g_hat_times_s(s, self.tau, self.g0)
    }

    pub fn j_hat_times_s(&self, s: f64) -> Result<f64> {
        j_hat_times_s(s, self.tau, self.j0)
    }
}

/// `I1/I0` and `I2/I1` at `z = √(sτ)`.
struct Ratios {
    z: Complex64,
    r1: Complex64,
    r2: Complex64,
}

impl Ratios {
    fn at(s: Complex64, tau: f64) -> Result<Self> {
        let z = (s * tau).sqrt();
        Ok(Self {
            z,
            r1: bessel_i_ratio(1, z)?,
            r2: bessel_i_ratio(2, z)?,
        })
    }

    fn phi_hat(&self) -> Complex64 {
        2.0 * self.r1 / self.z
    }

    fn one_minus_phi_hat(&self) -> Complex64 {
        self.r1 * self.r2
    }

    fn psi_hat(&self) -> Complex64 {
        2.0 / (self.z * self.r2)
    }
}

fn check_s(s: f64, tau: f64) -> Result<()> {
    require_positive("tau", tau)?;
    require_finite("s", s)?;
    if s <= 0.0 {
        return Err(Error::Domain(format!("Laplace parameter s must be positive, got {s}")));
    }
    Ok(())
}

fn check_complex_s(s: Complex64, tau: f64) -> Result<()> {
    require_positive("tau", tau)?;
    require_finite("Re s", s.re)?;
    require_finite("Im s", s.im)?;
    if s.im == 0.0 && s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "Laplace parameter s = {s} lies on the non-positive real axis"
        )));
    }
    Ok(())
}

/// `Φ̃(s) = (2/√(sτ)) I1(√(sτ))/I0(√(sτ))`; the regular limit `1` is returned at `s = 0`.
pub fn phi_hat(s: f64, tau: f64) -> Result<f64> {
    if s == 0.0 {
        require_positive("tau", tau)?;
        return Ok(1.0);
    }
    check_s(s, tau)?;
    Ok(Ratios::at(s.into(), tau)?.phi_hat().re)
}

/// `1 − Φ̃(s)` without cancellation at small `sτ`; equals `0` at `s = 0`.
pub fn one_minus_phi_hat(s: f64, tau: f64) -> Result<f64> {
    if s == 0.0 {
        require_positive("tau", tau)?;
        return Ok(0.0);
    }
    check_s(s, tau)?;
    Ok(Ratios::at(s.into(), tau)?.one_minus_phi_hat().re)
}

/// `Ψ̃(s) = (2/√(sτ)) I1(√(sτ))/I2(√(sτ))`, which behaves like `8/(sτ)` as `s → 0`.
pub fn psi_hat(s: f64, tau: f64) -> Result<f64> {
    check_s(s, tau)?;
    Ok(Ratios::at(s.into(), tau)?.psi_hat().re)
}

/// `s G̃(s) = G(0⁺) [1 − Φ̃(s)]`.
pub fn g_hat_times_s(s: f64, tau: f64, g0: f64) -> Result<f64> {
    require_positive("g0", g0)?;
    Ok(g0 * one_minus_phi_hat(s, tau)?)
}

/// `s J̃(s) = J(0⁺) [1 + Ψ̃(s)]`.
pub fn j_hat_times_s(s: f64, tau: f64, j0: f64) -> Result<f64> {
    require_positive("j0", j0)?;
    Ok(j0 * (1.0 + psi_hat(s, tau)?))
}

/// Analytic continuation of `Φ̃` to complex `s` off the non-positive real axis.
pub fn phi_hat_complex(s: Complex64, tau: f64) -> Result<Complex64> {
    check_complex_s(s, tau)?;
    Ok(Ratios::at(s, tau)?.phi_hat())
}

/// Analytic continuation of `1 − Φ̃`.
pub fn one_minus_phi_hat_complex(s: Complex64, tau: f64) -> Result<Complex64> {
    check_complex_s(s, tau)?;
    Ok(Ratios::at(s, tau)?.one_minus_phi_hat())
}

/// Analytic continuation of `Ψ̃`.
pub fn psi_hat_complex(s: Complex64, tau: f64) -> Result<Complex64> {
    check_complex_s(s, tau)?;
    Ok(Ratios::at(s, tau)?.psi_hat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Values from 30-digit evaluations of the Bessel series.
    const PHI_HAT_AT_ONE: f64 = 0.892_779_931_793_069;
    const PSI_HAT_AT_ONE: f64 = 8.326_612_235_221_068;

    #[test]
    fn values_at_unit_argument() {
        assert_abs_diff_eq!(phi_hat(1.0, 1.0).unwrap(), PHI_HAT_AT_ONE, epsilon = 1e-14);
        assert_abs_diff_eq!(psi_hat(1.0, 1.0).unwrap(), PSI_HAT_AT_ONE, epsilon = 1e-12);
        assert_abs_diff_eq!(g_hat_times_s(1.0, 1.0, 1.0).unwrap(), 1.0 - PHI_HAT_AT_ONE, epsilon = 1e-14);
        // The reciprocity cross-check quoted alongside the example.
        assert_abs_diff_eq!(1.0 / (1.0 - phi_hat(1.0, 1.0).unwrap()) - 1.0, PSI_HAT_AT_ONE, epsilon = 1e-10);
    }

    #[test]
    fn small_s_limits() {
        assert_eq!(phi_hat(0.0, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(phi_hat(1e-12, 1.0).unwrap(), 1.0, epsilon = 1e-12);
        let s = 1e-6;
        assert!((psi_hat(s, 1.0).unwrap() * s / 8.0 - 1.0).abs() < 1e-6);
        assert!((one_minus_phi_hat(s, 2.0).unwrap() / (s * 2.0 / 8.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn large_s_asymptotics() {
        let s: f64 = 1e8;
        let expected = 2.0 / s.sqrt();
        assert!((phi_hat(s, 1.0).unwrap() / expected - 1.0).abs() < 0.02);
        assert!((psi_hat(s, 1.0).unwrap() / expected - 1.0).abs() < 0.02);
        assert!((g_hat_times_s(1e12, 1.0, 3.0).unwrap() - 3.0).abs() < 1e-5);
    }

    #[test]
    fn tau_enters_through_the_product() {
        assert_abs_diff_eq!(phi_hat(2.0, 0.5).unwrap(), PHI_HAT_AT_ONE, epsilon = 1e-14);
        assert_abs_diff_eq!(psi_hat(0.25, 4.0).unwrap(), PSI_HAT_AT_ONE, epsilon = 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(phi_hat(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(psi_hat(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(phi_hat(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(phi_hat_complex(Complex64::new(-2.0, 0.0), 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn kernel_reciprocal_scales() {
        let k = LaplaceKernel::new(1.0, 4.0).unwrap();
        assert_eq!(k.j0(), 0.25);
        assert!(LaplaceKernel::with_compliance(1.0, 2.0, 0.4).is_err());
        let s = 3.7;
        assert!((k.g_hat_times_s(s).unwrap() * k.j_hat_times_s(s).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn complex_continuation_matches_real_axis() {
        for &s in &[1e-3, 0.7, 40.0, 5e5] {
            let c = phi_hat_complex(Complex64::new(s, 0.0), 1.0).unwrap();
            assert_abs_diff_eq!(c.re, phi_hat(s, 1.0).unwrap(), epsilon = 1e-15);
            assert_eq!(c.im, 0.0);
        }
    }
}
