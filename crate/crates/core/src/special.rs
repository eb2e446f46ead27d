//! Zeroth-order Bessel functions and the Hankel function `H₀⁽¹⁾ = J₀ + iY₀`.
//!
//! Power/log series below [`SERIES_ASYMPTOTIC_SWITCH`], Hankel's asymptotic
//! expansion (truncated at its smallest term) above it.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Argument at which evaluation moves from the series to the asymptotic expansion.
pub const SERIES_ASYMPTOTIC_SWITCH: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_TERMS: usize = 200;

/// `H₀⁽¹⁾(x)` for real `x > 0`.
pub fn hankel0_first_kind(x: f64) -> Result<Complex64> {
    check_argument(x)?;
    let (j0, y0) = if x < SERIES_ASYMPTOTIC_SWITCH {
        bessel01_series(x)
    } else {
        bessel0_asymptotic(x)
    };
    Ok(Complex64::new(j0, y0))
}

/// `J₀(x)` for real `x > 0`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    Ok(hankel0_first_kind(x)?.re)
}

/// `Y₀(x)` for real `x > 0`.
pub fn bessel_y0(x: f64) -> Result<f64> {
    Ok(hankel0_first_kind(x)?.im)
}

fn check_argument(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Hankel argument must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

/// `(J₀, Y₀)` from the ascending series. Exposed for cross-checks near the switch.
pub fn bessel01_series(x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut j0 = 1.0;
    let mut ysum = 0.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        ysum -= harmonic * term;
        if kf > 0.5 * x && term.abs() * (1.0 + harmonic) < 1e-18 {
            break;
        }
    }
    let y0 = 2.0 / PI * (((0.5 * x).ln() + EULER_GAMMA) * j0 + ysum);
    (j0, y0)
}

/// `(J₀, Y₀)` from Hankel's asymptotic expansion. Exposed for cross-checks near the switch.
pub fn bessel0_asymptotic(x: f64) -> (f64, f64) {
    let (p, q) = asymptotic_pq(Complex64::new(x, 0.0));
    let (p, q) = (p.re, q.re);
    let chi = x - FRAC_PI_4;
    let amp = (2.0 / (PI * x)).sqrt();
    let (sin, cos) = chi.sin_cos();
    (amp * (p * cos - q * sin), amp * (p * sin + q * cos))
}

/// `H₀⁽¹⁾(z)` for complex `z` from the asymptotic expansion only. Valid for
/// `|z| > 8` with `Re z > 0`; accuracy degrades near the lower bound.
pub fn hankel0_first_kind_asymptotic(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0 && z.norm() > 8.0 && z.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "complex Hankel evaluation needs Re z > 0 and |z| > 8, got {z}"
        )));
    }
    let (p, q) = asymptotic_pq(z);
    let i = Complex64::i();
    let amp = (2.0 / (PI * z)).sqrt();
    Ok(amp * (i * (z - FRAC_PI_4)).exp() * (p + i * q))
}

/// Hankel's `P₀`, `Q₀`, summed up to the smallest term.
fn asymptotic_pq(z: Complex64) -> (Complex64, Complex64) {
    let inv = z.inv();
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut coef = 1.0;
    let mut power = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        coef *= (2.0 * kf - 1.0).powi(2) / (8.0 * kf);
        power *= inv;
        let term = coef * power;
        let size = term.norm();
        if size >= last {
            break;
        }
        last = size;
        // Signs cycle through Q(−), P(−), Q(+), P(+).
        match k % 4 {
            1 => q -= term,
            2 => p -= term,
            3 => q += term,
            _ => p += term,
        }
        if size < 1e-17 {
            break;
        }
    }
    (p, q)
}
