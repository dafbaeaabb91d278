//! Bessel functions of the first kind `J0, J1, J2`, modified Bessel functions
//! `I0, I1, I2`, ratios `I_ν / I_{ν-1}` for complex arguments, and tables of
//! the positive zeros of `J0` and `J2`.
//!
//! Evaluation strategy for `J_n(x)`:
//!
//! | range           | method                                          |
//! |-----------------|-------------------------------------------------|
//! | `x <= 8`        | ascending power series                          |
//! | `8 < x < 25`    | Miller backward recurrence, normalised by `J0 + 2ΣJ2k = 1` |
//! | `x >= 25`       | Hankel asymptotic expansion                     |
//!
//! The modified functions use the ascending series up to `x = 30` and the
//! large-argument expansion beyond; ratios use a continued fraction (modified
//! Lentz) or the ratio of two large-argument expansions, so they never form
//! `I_ν` itself and cannot overflow.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{require_finite, Error, Result};

const J_SERIES_LIMIT: f64 = 8.0;
const J_HANKEL_LIMIT: f64 = 25.0;
const I_SERIES_LIMIT: f64 = 30.0;

/// Largest argument accepted by [`bessel_i`]; beyond it `I_ν` leaves the f64 range.
pub const I_OVERFLOW_LIMIT: f64 = 700.0;

const MAX_NEWTON_STEPS: usize = 50;
const ZERO_CACHE_SIZE: usize = 4096;

fn check_order(order: u32) -> Result<()> {
    if order <= 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("only orders 0, 1, 2 are supported, got {order}")))
    }
}

fn check_argument(x: f64) -> Result<()> {
    require_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::Domain(format!("x must be non-negative, got {x}")));
    }
    Ok(())
}

/// Bessel function of the first kind `J_order(x)` for `order ∈ {0, 1, 2}`, `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    check_argument(x)?;
    Ok(if x <= J_SERIES_LIMIT {
        j_series(order, x)
    } else if x < J_HANKEL_LIMIT {
        j_miller(x)[order as usize]
    } else {
        j_hankel(order, x)
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn j_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powi(order as i32) / factorial(order);
    let mut sum = term;
    for k in 1..200u32 {
        term *= q / f64::from(k * (k + order));
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// `[J0, J1, J2]` by backward recurrence.
fn j_miller(x: f64) -> [f64; 3] {
    let start = 2 * ((x + 40.0 + 4.0 * x.sqrt()) / 2.0) as usize;
    let mut above = 0.0;
    let mut current = 1e-30;
    let mut out = [0.0; 3];
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        let idx = k - 1;
        if idx <= 2 {
            out[idx] = current;
        }
        if idx % 2 == 0 {
            norm += if idx == 0 { current } else { 2.0 * current };
        }
    }
    out.map(|v| v / norm)
}

/// Coefficient recursion of the Hankel expansions, `a_k(ν) / x^k`.
fn hankel_terms(order: u32, x: f64) -> impl Iterator<Item = f64> {
    let mu = 4.0 * f64::from(order * order);
    let mut term = 1.0;
    let mut k = 0u32;
    std::iter::from_fn(move || {
        let current = term;
        k += 1;
        let odd = f64::from(2 * k - 1);
        term *= (mu - odd * odd) / (8.0 * f64::from(k) * x);
        Some(current)
    })
}

fn j_hankel(order: u32, x: f64) -> f64 {
    let (mut p, mut q) = (0.0, 0.0);
    let mut previous = f64::INFINITY;
    for (k, term) in hankel_terms(order, x).enumerate().take(200) {
        if term.abs() > previous {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
        previous = term.abs();
    }
    // cos(x - φ) expanded so the large argument is reduced exactly by libm.
    let phase = (0.5 * f64::from(order) + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Modified Bessel function `I_order(x)` for `order ∈ {0, 1, 2}`, `0 <= x <= 700`.
///
/// Larger arguments overflow; use [`bessel_i_ratio`] instead.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    check_argument(x)?;
    if x > I_OVERFLOW_LIMIT {
        return Err(Error::Range(format!(
            "I_{order}({x}) overflows; x must not exceed {I_OVERFLOW_LIMIT}"
        )));
    }
    if x <= I_SERIES_LIMIT {
        let half = 0.5 * x;
        let q = half * half;
        let mut term = half.powi(order as i32) / factorial(order);
        let mut sum = term;
        for k in 1..500u32 {
            term *= q / f64::from(k * (k + order));
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        Ok(sum)
    } else {
        let series = alternating_hankel_sum(order, Complex64::new(x, 0.0)).re;
        Ok(x.exp() / (2.0 * PI * x).sqrt() * series)
    }
}

/// `Σ (-1)^k a_k(ν) / z^k`, the large-argument series of `I_ν(z) √(2πz) e^{-z}`.
fn alternating_hankel_sum(order: u32, z: Complex64) -> Complex64 {
    let mu = 4.0 * f64::from(order * order);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut previous = f64::INFINITY;
    for k in 1..200u32 {
        let odd = f64::from(2 * k - 1);
        term *= -(mu - odd * odd) / (8.0 * f64::from(k)) / z;
        let size = term.norm();
        if size > previous {
            break;
        }
        sum += term;
        if size < 1e-17 {
            break;
        }
        previous = size;
    }
    sum
}

/// Ratio `I_order(z) / I_{order-1}(z)` for `order ∈ {1, 2}` and complex `z`.
///
/// Uses the large-argument expansions when `|z| >= 40` and `Re z >= 30`
/// (the neglected `e^{-2z}` contribution is then below `1e-26`), otherwise
/// the continued fraction
/// `I_ν/I_{ν-1} = 1 / (2ν/z + 1 / (2(ν+1)/z + ...))`.
pub fn bessel_i_ratio(order: u32, z: Complex64) -> Result<Complex64> {
    if !(1..=2).contains(&order) {
        return Err(Error::Domain(format!("ratio order must be 1 or 2, got {order}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("ratio argument must be finite, got {z}")));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if z.norm() >= 40.0 && z.re >= 30.0 {
        return Ok(alternating_hankel_sum(order, z) / alternating_hankel_sum(order - 1, z));
    }
    ratio_continued_fraction(order, z)
}

fn ratio_continued_fraction(order: u32, z: Complex64) -> Result<Complex64> {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let nu = f64::from(order);
    let coeff = |k: usize| Complex64::new(2.0 * (nu + k as f64), 0.0) / z;
    let max_iter = 20_000 + 4 * z.norm() as usize;

    let mut f = coeff(0);
    if f.norm() < TINY {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..max_iter {
        let b = coeff(k);
        d += b;
        if d.norm() < TINY {
            d = tiny;
        }
        d = d.inv();
        c = b + c.inv();
        if c.norm() < TINY {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 4.0 * f64::EPSILON {
            return Ok(f.inv());
        }
    }
    Err(Error::Numerical(format!(
        "continued fraction for I_{order}/I_{} at z = {z} did not converge in {max_iter} terms",
        order - 1
    )))
}

/// The two Bessel families whose positive zeros enter the Dirichlet series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BesselFamily {
    J0,
    J2,
}

impl BesselFamily {
    pub fn order(self) -> u32 {
        match self {
            BesselFamily::J0 => 0,
            BesselFamily::J2 => 2,
        }
    }

    /// First-order McMahon estimate of the `n`-th positive zero (1-based).
    pub fn mcmahon(self, n: usize) -> f64 {
        let shift = match self {
            BesselFamily::J0 => -0.25,
            BesselFamily::J2 => 0.75,
        };
        (n as f64 + shift) * PI
    }

    fn value_and_slope(self, x: f64) -> Result<(f64, f64)> {
        let j1 = bessel_j(1, x)?;
        Ok(match self {
            BesselFamily::J0 => (bessel_j(0, x)?, -j1),
            BesselFamily::J2 => {
                let j2 = bessel_j(2, x)?;
                (j2, j1 - 2.0 * j2 / x)
            }
        })
    }
}

impl std::fmt::Display for BesselFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "J{}", self.order())
    }
}

impl std::str::FromStr for BesselFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "j0" | "0" => Ok(BesselFamily::J0),
            "j2" | "2" => Ok(BesselFamily::J2),
            other => Err(Error::Config(format!("unknown Bessel family '{other}' (expected J0 or J2)"))),
        }
    }
}

/// Ordered positive zeros of one Bessel family.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    family: BesselFamily,
    zeros: Vec<f64>,
}

impl ZeroTable {
    pub fn family(&self) -> BesselFamily {
        self.family
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    /// The `n`-th zero, 1-based.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }
}

/// Newton refinement of a zero of `family` starting from `guess`.
/// `index` only labels the error.
pub fn refine_zero(family: BesselFamily, guess: f64, index: usize) -> Result<f64> {
    let mut x = guess;
    for _ in 0..MAX_NEWTON_STEPS {
        let (value, slope) = family.value_and_slope(x)?;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let step = value / slope;
        x -= step;
        if !(x.is_finite() && x > 0.0) {
            break;
        }
        if step.abs() <= 16.0 * f64::EPSILON * x {
            return Ok(x);
        }
    }
    Err(Error::Numerical(format!(
        "Newton iteration for zero #{index} of {family} did not converge in {MAX_NEWTON_STEPS} steps (seed {guess})"
    )))
}

/// The `n`-th positive zero of `family` (1-based), seeded from McMahon.
pub fn nth_zero(family: BesselFamily, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("zero index is 1-based".into()));
    }
    refine_zero(family, family.mcmahon(n), n)
}

/// The first `count` positive zeros of `family`.
pub fn zeros(family: BesselFamily, count: usize) -> Result<ZeroTable> {
    if count == 0 {
        return Err(Error::Domain("zero count must be at least 1".into()));
    }
    let zeros = (1..=count)
        .map(|n| nth_zero(family, n))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = zeros.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::Numerical(format!(
            "{family} zeros #{} and #{} are not increasing ({} >= {})",
            i + 1,
            i + 2,
            zeros[i],
            zeros[i + 1]
        )));
    }
    Ok(ZeroTable { family, zeros })
}

fn cached_table(family: BesselFamily) -> Result<&'static ZeroTable> {
    static J0_ZEROS: OnceLock<ZeroTable> = OnceLock::new();
    static J2_ZEROS: OnceLock<ZeroTable> = OnceLock::new();
    let cell = match family {
        BesselFamily::J0 => &J0_ZEROS,
        BesselFamily::J2 => &J2_ZEROS,
    };
    if let Some(table) = cell.get() {
        return Ok(table);
    }
    let table = zeros(family, ZERO_CACHE_SIZE)?;
    Ok(cell.get_or_init(|| table))
}

/// The `n`-th zero (1-based) from a process-wide table, computed on demand
/// past the cached range.
pub(crate) fn zero(family: BesselFamily, n: usize) -> Result<f64> {
    match cached_table(family)?.get(n) {
        Some(z) => Ok(z),
        None => nth_zero(family, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Ascending series summed term by term, used as an independent reference.
    fn j0_reference(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..400 {
            term *= -(x * x / 4.0) / (k as f64 * k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn j0_near_first_zero() {
        assert_abs_diff_eq!(bessel_j(0, 2.4048255577).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn i1_at_one() {
        // 0.56515910399248502720769602761 from a 30-digit series.
        assert_abs_diff_eq!(bessel_i(1, 1.0).unwrap(), 0.565_159_103_992_485, epsilon = 1e-15);
    }

    #[test]
    fn branches_agree_at_split_points() {
        for &x in &[7.9, 8.0, 8.1, 24.9, 25.0, 25.1] {
            for order in 0..=2 {
                let s = j_miller(x)[order as usize];
                assert_abs_diff_eq!(bessel_j(order, x).unwrap(), s, epsilon = 1e-13);
            }
        }
        for &x in &[26.0, 30.0, 45.0, 50.0] {
            for order in 0..=2 {
                assert_abs_diff_eq!(j_hankel(order, x), j_miller(x)[order as usize], epsilon = 1e-13);
            }
        }
        for &x in &[29.0, 30.0, 31.0] {
            let a = bessel_i(1, x).unwrap();
            let b = x.exp() / (2.0 * PI * x).sqrt() * alternating_hankel_sum(1, Complex64::new(x, 0.0)).re;
            assert!(((a - b) / a).abs() < 1e-13);
        }
    }

    #[test]
    fn small_argument_matches_reference_series() {
        for i in 0..=80 {
            let x = i as f64 * 0.1;
            assert_abs_diff_eq!(bessel_j(0, x).unwrap(), j0_reference(x), epsilon = 1e-13);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(3, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(0, 701.0), Err(Error::Range(_))));
        assert!(bessel_i(0, 700.0).unwrap().is_finite());
        assert!(matches!(zeros(BesselFamily::J0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn ratio_matches_direct_quotient() {
        for &x in &[0.01, 0.5, 1.0, 5.0, 20.0, 35.0, 60.0, 200.0] {
            let z = Complex64::new(x, 0.0);
            let r1 = bessel_i_ratio(1, z).unwrap().re;
            let r2 = bessel_i_ratio(2, z).unwrap().re;
            let i0 = bessel_i(0, x).unwrap();
            let i1 = bessel_i(1, x).unwrap();
            let i2 = bessel_i(2, x).unwrap();
            assert!((r1 - i1 / i0).abs() <= 1e-13 * r1, "x={x}");
            assert!((r2 - i2 / i1).abs() <= 1e-13 * r2, "x={x}");
        }
    }

    #[test]
    fn complex_ratio_branches_agree() {
        // Continued fraction against the asymptotic ratio where both apply.
        for &(re, im) in &[(35.0, 10.0), (40.0, 40.0), (60.0, -20.0)] {
            let z = Complex64::new(re, im);
            let cf = ratio_continued_fraction(1, z).unwrap();
            let asym = bessel_i_ratio(1, z).unwrap();
            assert!((cf - asym).norm() < 1e-13 * cf.norm(), "z={z}");
        }
    }

    #[test]
    fn first_zeros() {
        let j0 = zeros(BesselFamily::J0, 3).unwrap();
        assert_abs_diff_eq!(j0.zeros()[0], 2.404_825_557_695_773, epsilon = 1e-14);
        let j2 = zeros(BesselFamily::J2, 1).unwrap();
        assert_abs_diff_eq!(j2.zeros()[0], 5.135_622_301_840_683, epsilon = 1e-14);
        assert_eq!(j2.get(0), None);
        assert_eq!(j0.get(3), Some(j0.zeros()[2]));
    }

    #[test]
    fn cached_zeros_extend_past_table() {
        let inside = zero(BesselFamily::J0, 10).unwrap();
        assert_eq!(inside, nth_zero(BesselFamily::J0, 10).unwrap());
        let beyond = zero(BesselFamily::J0, ZERO_CACHE_SIZE + 5).unwrap();
        assert!(beyond > zero(BesselFamily::J0, ZERO_CACHE_SIZE).unwrap());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("J0".parse::<BesselFamily>().unwrap(), BesselFamily::J0);
        assert_eq!("j2".parse::<BesselFamily>().unwrap(), BesselFamily::J2);
        assert!("J1".parse::<BesselFamily>().is_err());
    }
}
