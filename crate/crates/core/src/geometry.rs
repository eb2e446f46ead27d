//! Differential geometry of an axisymmetric spheroid
//! `r(θ, φ) = (a sinθ cosφ, a sinθ sinφ, c cosθ)` and the coefficients of
//! the curved-surface SPP wave operator in polar-angle form.
//!
//! The normal points into the dielectric. A convex metal body
//! ([`Orientation::Convex`], `s = +1`) therefore has `H < 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::materials::SppScalars;

/// Which side of the spheroid is metal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Metal inside, emitters outside (`s = +1`).
    Convex,
    /// Metal outside, emitters in the cavity (`s = −1`).
    Concave,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Convex => 1.0,
            Orientation::Concave => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Convex => Orientation::Concave,
            Orientation::Concave => Orientation::Convex,
        }
    }
}

/// Switches for the curvature potentials of the wave operator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Ablation {
    /// Drop the isotropic potential `C_H H`.
    pub vh: bool,
    /// Drop every `C_σ` term.
    pub vsigma: bool,
}

impl Ablation {
    pub const NONE: Ablation = Ablation {
        vh: false,
        vsigma: false,
    };
    pub const BOTH: Ablation = Ablation {
        vh: true,
        vsigma: true,
    };
}

/// Spheroid with equatorial semi-axis `a`, polar semi-axis `c` (both nm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpheroidSurface {
    a: f64,
    c: f64,
    orientation: Orientation,
}

impl SpheroidSurface {
    pub fn new(a: f64, c: f64, orientation: Orientation) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "semi-axes must be positive and finite, got a = {a}, c = {c}"
            )));
        }
        Ok(Self { a, c, orientation })
    }

    pub fn sphere(radius: f64, orientation: Orientation) -> Result<Self> {
        Self::new(radius, radius, orientation)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Orientation sign `s`.
    pub fn s(&self) -> f64 {
        self.orientation.sign()
    }

    pub fn with_orientation(&self, orientation: Orientation) -> Self {
        Self {
            orientation,
            ..*self
        }
    }

    pub fn is_sphere(&self) -> bool {
        self.a == self.c
    }

    /// `ρ = a² cos²θ + c² sin²θ` (nm²), written so that `a = c` gives `a²` exactly.
    pub fn rho(&self, theta: f64) -> f64 {
        let s = theta.sin();
        self.a * self.a + (self.c * self.c - self.a * self.a) * s * s
    }

    /// Metric components `(γ_θθ, γ_φφ)`.
    pub fn metric(&self, theta: f64) -> (f64, f64) {
        let s = theta.sin();
        (self.rho(theta), self.a * self.a * s * s)
    }

    /// `√γ = a sinθ √ρ`, the area element.
    pub fn area_element(&self, theta: f64) -> f64 {
        self.a * theta.sin() * self.rho(theta).sqrt()
    }

    /// Second fundamental form `(h_θθ, h_φφ)` with the dielectric-side normal.
    pub fn second_fundamental_form(&self, theta: f64) -> (f64, f64) {
        let pref = -self.s() * self.a * self.c / self.rho(theta).sqrt();
        let s = theta.sin();
        (pref, pref * s * s)
    }

    /// Mean (extrinsic) curvature `H = −(s/2) c(a² + ρ) / (a ρ^{3/2})`.
    pub fn mean_curvature(&self, theta: f64) -> f64 {
        let rho = self.rho(theta);
        -0.5 * self.s() * self.c * (self.a * self.a + rho) / (self.a * rho * rho.sqrt())
    }

    /// Mean curvature at the poles, `−s c / a²`.
    pub fn pole_curvature(&self) -> f64 {
        -self.s() * self.c / (self.a * self.a)
    }

    /// Contravariant traceless shape operator `(σ^θθ, σ^φφ)`; `σ^θφ = 0`.
    pub fn sigma_components(&self, theta: f64) -> (f64, f64) {
        let rho = self.rho(theta);
        let sr = rho.sqrt();
        let s = theta.sin();
        let d = self.c * self.c - self.a * self.a;
        let tt = self.s() * self.c * d * s * s / (2.0 * self.a * rho * rho * sr);
        let pp = -self.s() * self.c * d / (2.0 * self.a.powi(3) * rho * sr);
        (tt, pp)
    }

    /// The Christoffel symbols entering `σ^{ab}∇_a∇_b`: `(Γ^θ_θθ, Γ^θ_φφ)`.
    /// `Γ^φ_θθ` and `Γ^φ_φφ` vanish.
    pub fn christoffel(&self, theta: f64) -> (f64, f64) {
        let rho = self.rho(theta);
        let sc = theta.sin() * theta.cos();
        (
            (self.c * self.c - self.a * self.a) * sc / rho,
            -self.a * self.a * sc / rho,
        )
    }
}

/// Coefficients of `A ∂²_θ + B ∂_θ + C_m` for one azimuthal order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub cm: Complex64,
}

/// The `m`-independent pieces of the operator at one angle:
/// `C_m = static_part − m² · azimuthal_part`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CoefficientParts {
    pub a: Complex64,
    pub b: Complex64,
    pub static_part: Complex64,
    pub azimuthal_part: Complex64,
}

impl CoefficientParts {
    pub fn at(&self, m: i64) -> OperatorCoefficients {
        let m2 = (m as f64) * (m as f64);
        OperatorCoefficients {
            a: self.a,
            b: self.b,
            cm: self.static_part - m2 * self.azimuthal_part,
        }
    }
}

pub(crate) fn coefficient_parts(
    surface: &SpheroidSurface,
    scalars: &SppScalars,
    theta_tilde: Complex64,
    ablation: Ablation,
) -> Result<CoefficientParts> {
    if !(theta_tilde.re > 0.0 && theta_tilde.re < std::f64::consts::PI) {
        return Err(Error::InvalidArgument(format!(
            "operator coefficients are singular at the poles; Re(theta) = {} must lie in (0, pi)",
            theta_tilde.re
        )));
    }
    let (a, c, s) = (surface.a, surface.c, surface.s());
    let a2 = a * a;
    let d = c * c - a2;

    let sin = theta_tilde.sin();
    let cos = theta_tilde.cos();
    let sin2 = sin * sin;
    let rho = a2 + d * sin2;
    let sqrt_rho = rho.sqrt();
    let rho32 = rho * sqrt_rho;
    let rho52 = rho * rho32;

    let mut coef_a = rho.inv();
    let mut coef_b = a2 * cos / (sin * rho * rho);
    let mut azimuthal = (a2 * sin2).inv();
    let mut static_part = scalars.k_spp_sq;

    if !ablation.vsigma {
        let cs = s * scalars.c_sigma;
        coef_a += cs * c * d * sin2 / (2.0 * a * rho52);
        coef_b -= cs * c * d * sin * cos / (2.0 * a * rho52) * (1.0 + d * sin2 / rho);
        azimuthal += cs * c * (-d) / (2.0 * a2 * a * rho32);
    }
    if !ablation.vh {
        static_part -= s * scalars.c_h * c * (a2 + rho) / (2.0 * a * rho32);
    }
    Ok(CoefficientParts {
        a: coef_a,
        b: coef_b,
        static_part,
        azimuthal_part: azimuthal,
    })
}

/// Evaluates the spheroid operator coefficients at a possibly complex
/// (absorber-stretched) polar angle.
pub fn operator_coefficients(
    surface: &SpheroidSurface,
    scalars: &SppScalars,
    theta_tilde: Complex64,
    m: i64,
    ablation: Ablation,
) -> Result<OperatorCoefficients> {
    Ok(coefficient_parts(surface, scalars, theta_tilde, ablation)?.at(m))
}

/// Limiting form of the `m = 0` operator at the north pole.
///
/// As `θ → 0`, `B ∂_θ g → (1/a²) ∂²_θ g` for an even solution, so the operator
/// reduces to `(2/a²) ∂²_θ g + C_0(0) g` with `C_0(0) = k² − s C_H c / a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleCoefficients {
    pub second_derivative: f64,
    pub constant: Complex64,
}

pub fn pole_coefficients(
    surface: &SpheroidSurface,
    scalars: &SppScalars,
    ablation: Ablation,
) -> PoleCoefficients {
    let a2 = surface.a * surface.a;
    let mut constant = scalars.k_spp_sq;
    if !ablation.vh {
        constant -= surface.s() * scalars.c_h * surface.c / a2;
    }
    PoleCoefficients {
        second_derivative: 2.0 / a2,
        constant,
    }
}
