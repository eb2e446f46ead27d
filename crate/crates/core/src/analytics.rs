//! Closed-form curvature corrections for spheres and cylinders.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Orientation;
use crate::materials::{sqrt_re_pos, SppScalars};

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "radius must be positive and finite, got {radius}"
        )));
    }
    Ok(())
}

/// Effective wavenumber on a sphere, `k_eff² = k_spp² + C_H H` with `H = −s/R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereWavenumber {
    /// First-order form `k_spp (1 − s C_H / (2 k_spp² R))`.
    pub expanded: Complex64,
    /// `√(k_spp² − s C_H / R)`.
    pub unexpanded: Complex64,
    /// `(expanded − k_spp) / k_spp`.
    pub relative_correction: Complex64,
}

pub fn sphere_keff(scalars: &SppScalars, radius: f64, orientation: Orientation) -> Result<SphereWavenumber> {
    check_radius(radius)?;
    let s = orientation.sign();
    let k = scalars.k_spp;
    let correction = -s * scalars.c_h / (2.0 * scalars.k_spp_sq * radius);
    Ok(SphereWavenumber {
        expanded: k * (1.0 + correction),
        unexpanded: sqrt_re_pos(scalars.k_spp_sq - s * scalars.c_h / radius),
        relative_correction: correction,
    })
}

/// Cylinder of radius `R`; `V = k₀ R √(−(ε_d + ε_m))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderCase {
    pub radius: f64,
    pub orientation: Orientation,
    pub v_param: Complex64,
}

impl CylinderCase {
    pub fn new(scalars: &SppScalars, radius: f64, orientation: Orientation) -> Result<Self> {
        check_radius(radius)?;
        let pair = &scalars.pair;
        let v_param = pair.k0() * radius * sqrt_re_pos(-(pair.eps_m() + pair.eps_d()));
        Ok(Self {
            radius,
            orientation,
            v_param,
        })
    }
}

/// Magnitude of the curvature potential in the paraxial envelope equation,
/// `λ̄₀ n_e / (2R √(−(ε_m + ε_d)))`. Dimensionless: it multiplies `F` in an
/// equation already scaled by `λ̄₀`.
pub fn cylinder_paraxial_potential(scalars: &SppScalars, radius: f64) -> Result<f64> {
    check_radius(radius)?;
    let pair = &scalars.pair;
    let root = (-(pair.eps_m().re + pair.eps_d())).sqrt();
    let reduced_vacuum = 1.0 / pair.k0();
    Ok(reduced_vacuum * scalars.n_e.re / (2.0 * radius * root))
}

/// Coefficients of `a k_z² + b k_θ² = rhs` on a cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumEllipse {
    pub coef_kz2: Complex64,
    pub coef_ktheta2: Complex64,
    pub rhs: Complex64,
}

impl MomentumEllipse {
    /// `e² = 1 − b_minor²/b_major²` from the real coefficients.
    pub fn eccentricity(&self) -> f64 {
        let (a, b) = (self.coef_kz2.re, self.coef_ktheta2.re);
        (1.0 - a.min(b) / a.max(b)).max(0.0).sqrt()
    }
}

/// Upper signs for the convex metal cylinder, lower for the concave pin.
pub fn cylinder_momentum_ellipse(scalars: &SppScalars, radius: f64, orientation: Orientation) -> Result<MomentumEllipse> {
    check_radius(radius)?;
    let s = orientation.sign();
    let half = 1.0 / (2.0 * radius);
    Ok(MomentumEllipse {
        coef_kz2: 1.0 + s * scalars.c_sigma * half,
        coef_ktheta2: 1.0 - s * scalars.c_sigma * half,
        rhs: scalars.k_spp_sq - s * scalars.c_h * half,
    })
}

/// A cylinder wavenumber; `evanescent` marks a negative real radicand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderWavenumber {
    pub value: Complex64,
    pub evanescent: bool,
}

fn root_of(radicand: Complex64) -> CylinderWavenumber {
    CylinderWavenumber {
        value: radicand.sqrt(),
        evanescent: radicand.re < 0.0,
    }
}

/// `k_z² = k_spp² (1 ± 1/V) − m²/R²`.
pub fn cylinder_kz(scalars: &SppScalars, radius: f64, m: i64, orientation: Orientation) -> Result<CylinderWavenumber> {
    let case = CylinderCase::new(scalars, radius, orientation)?;
    let s = orientation.sign();
    let m2 = (m as f64) * (m as f64);
    Ok(root_of(
        scalars.k_spp_sq * (1.0 + s / case.v_param) - m2 / (radius * radius),
    ))
}

/// `k_θ = k_spp √(1 ∓ (ε_d+ε_m)²/(ε_d ε_m) / V)` for purely azimuthal propagation.
/// The concave branch uses this single-interface prefactor; pin-hole geometries
/// with metal on both sides carry a different one.
pub fn cylinder_ktheta(scalars: &SppScalars, radius: f64, orientation: Orientation) -> Result<CylinderWavenumber> {
    let case = CylinderCase::new(scalars, radius, orientation)?;
    let s = orientation.sign();
    let pair = &scalars.pair;
    let ed = Complex64::new(pair.eps_d(), 0.0);
    let em = pair.eps_m();
    let prefactor = (ed + em) * (ed + em) / (ed * em);
    let radicand = 1.0 - s * prefactor / case.v_param;
    let root = root_of(radicand);
    Ok(CylinderWavenumber {
        value: scalars.k_spp * root.value,
        evanescent: root.evanescent,
    })
}
