//! Surface Green's function from the azimuthal mode sum, the emitter self-sums
//! `S` and `S_k`, and the flat-interface Hankel reference.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Ablation, SpheroidSurface};
use crate::materials::SppScalars;
use crate::radial::{ModeSolution, RadialOperator, SolverSettings};
use crate::special::{hankel0_first_kind, hankel0_first_kind_asymptotic};

/// Shape of a truncation window whose total weight is a multiple of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WindowShape {
    /// Centred on `m = 0` with half-width `m_max + N/2`; a boundary order that
    /// lands exactly on the edge (even `N`) carries weight 1/2.
    Centered,
    /// Plain `|m| ≤ m_max`.
    Symmetric,
}

/// Paired truncation window for a ring of `n` emitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairedWindow {
    n: usize,
    m_max: usize,
    shape: WindowShape,
}

impl PairedWindow {
    pub fn new(n: usize, m_max: usize, shape: WindowShape) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ring needs at least one emitter".into()));
        }
        if m_max == 0 || !m_max.is_multiple_of(n) {
            return Err(Error::InvalidArgument(format!(
                "truncation order {m_max} is not a positive multiple of N = {n}"
            )));
        }
        Ok(Self { n, m_max, shape })
    }

    pub fn from_blocks(n: usize, blocks: usize, shape: WindowShape) -> Result<Self> {
        Self::new(n, blocks * n, shape)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nominal truncation order (a multiple of `N`).
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn blocks(&self) -> usize {
        self.m_max / self.n
    }

    pub fn shape(&self) -> WindowShape {
        self.shape
    }

    /// Largest `|m|` with non-zero weight.
    pub fn max_order(&self) -> usize {
        match self.shape {
            WindowShape::Centered => self.m_max + self.n / 2,
            WindowShape::Symmetric => self.m_max,
        }
    }

    pub fn weight(&self, m: i64) -> f64 {
        let m = m.unsigned_abs() as usize;
        match self.shape {
            WindowShape::Symmetric => f64::from(u8::from(m <= self.m_max)),
            WindowShape::Centered => {
                let edge = self.m_max + self.n / 2;
                if m < edge || (m == edge && self.n % 2 == 1) {
                    1.0
                } else if m == edge {
                    0.5
                } else {
                    0.0
                }
            }
        }
    }
}

/// Smallest multiple of `n` above `3·Re(k_spp)·a·sinθ + 40`.
pub fn default_m_max(scalars: &SppScalars, surface: &SpheroidSurface, theta: f64, n: usize) -> usize {
    let target = 3.0 * scalars.k_re() * surface.a() * theta.sin() + 40.0;
    let n = n.max(1);
    ((target / n as f64).floor() as usize + 1) * n
}

/// Great-circle distance on a sphere of radius `radius`.
pub fn great_circle_distance(radius: f64, theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> f64 {
    // Haversine form, well conditioned at small separations.
    let lat1 = std::f64::consts::FRAC_PI_2 - theta1;
    let lat2 = std::f64::consts::FRAC_PI_2 - theta2;
    let dlat = lat2 - lat1;
    let dlon = phi2 - phi1;
    let a = (0.5 * dlat).sin().powi(2) + lat1.cos() * lat2.cos() * (0.5 * dlon).sin().powi(2);
    2.0 * radius * a.sqrt().min(1.0).asin()
}

/// `(i/4) H₀⁽¹⁾(Re(k_spp)·d)`.
pub fn flat_reference(scalars: &SppScalars, distance: f64) -> Result<Complex64> {
    if !(distance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance must be positive, got {distance}"
        )));
    }
    Ok(Complex64::new(0.0, 0.25) * hankel0_first_kind(scalars.k_re() * distance)?)
}

/// `(i/4) H₀⁽¹⁾(k_spp·d)` with the complex wavenumber; asymptotic branch only,
/// so `|k_spp|·d` must exceed 8.
pub fn flat_reference_lossy(scalars: &SppScalars, distance: f64) -> Result<Complex64> {
    if !(distance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance must be positive, got {distance}"
        )));
    }
    Ok(Complex64::new(0.0, 0.25) * hankel0_first_kind_asymptotic(scalars.k_spp * distance)?)
}

/// One value of the curved-surface Green's function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreensEvaluation {
    pub value: Complex64,
    pub m_max: usize,
    /// `|g_{m_max}(θ; θ₀)| / π`, the size of the last included term.
    pub tail_estimate: f64,
}

/// Mode solutions `g_0 … g_{m_max}` for one source angle, ready to be summed
/// at arbitrary observation points.
#[derive(Debug, Clone)]
pub struct GreensSolver {
    theta0: f64,
    modes: Vec<ModeSolution>,
    theta_pml: f64,
}

impl GreensSolver {
    /// Solves orders `0..=m_max`; `reach` is the largest observation angle.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        surface: &SpheroidSurface,
        scalars: &SppScalars,
        theta0: f64,
        reach: f64,
        m_max: usize,
        ablation: Ablation,
        settings: &SolverSettings,
    ) -> Result<Self> {
        let (grid, pml) = settings.layout(surface, scalars, theta0, Some(reach))?;
        let op = RadialOperator::new(surface, scalars, grid, pml, ablation)?;
        Self::with_operator(&op, theta0, m_max)
    }

    pub fn with_operator(op: &RadialOperator, theta0: f64, m_max: usize) -> Result<Self> {
        let orders: Vec<i64> = (0..=m_max as i64).collect();
        let modes = op.solve_many(&orders, theta0)?;
        Ok(Self {
            theta0,
            modes,
            theta_pml: op.pml().theta_pml,
        })
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn m_max(&self) -> usize {
        self.modes.len() - 1
    }

    pub fn modes(&self) -> &[ModeSolution] {
        &self.modes
    }

    /// `G(θ, Δφ; θ₀)` truncated at the solver's full order.
    pub fn evaluate(&self, theta: f64, dphi: f64) -> Result<GreensEvaluation> {
        self.evaluate_truncated(theta, dphi, self.m_max())
    }

    /// `G(θ, Δφ; θ₀) = (1/2π)[g₀ + 2 Σ_{m=1}^{m_max} g_m cos(mΔφ)]`.
    pub fn evaluate_truncated(&self, theta: f64, dphi: f64, m_max: usize) -> Result<GreensEvaluation> {
        if m_max > self.m_max() {
            return Err(Error::InvalidArgument(format!(
                "requested order {m_max} exceeds the {} solved orders",
                self.m_max()
            )));
        }
        if !(theta > 0.0 && theta < self.theta_pml) {
            return Err(Error::InvalidArgument(format!(
                "observation angle {theta} must lie in (0, {}) outside the absorber",
                self.theta_pml
            )));
        }
        let wrapped = dphi.rem_euclid(2.0 * PI);
        let same_azimuth = wrapped.min(2.0 * PI - wrapped) < 1e-12;
        if same_azimuth && (theta - self.theta0).abs() <= 1e-12 * self.theta0 {
            return Err(Error::InvalidArgument(
                "coincident source and observation points; use the self-sums instead".into(),
            ));
        }
        let mut sum = self.modes[0].value_at(theta)?;
        let mut last = sum;
        for mode in &self.modes[1..=m_max] {
            let g = mode.value_at(theta)?;
            sum += 2.0 * (mode.m as f64 * dphi).cos() * g;
            last = g;
        }
        Ok(GreensEvaluation {
            value: sum / (2.0 * PI),
            m_max,
            tail_estimate: last.norm() / PI,
        })
    }
}

/// Single-point convenience wrapper over [`GreensSolver`].
#[allow(clippy::too_many_arguments)]
pub fn greens_series(
    surface: &SpheroidSurface,
    scalars: &SppScalars,
    theta0: f64,
    theta: f64,
    dphi: f64,
    m_max: usize,
    ablation: Ablation,
    settings: &SolverSettings,
) -> Result<GreensEvaluation> {
    let solver = GreensSolver::new(surface, scalars, theta0, theta.max(theta0), m_max, ablation, settings)?;
    solver.evaluate(theta, dphi)
}

/// Self-interaction sums of an `N`-emitter ring at `θ₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfSums {
    /// `Σ_m w_m g_m(θ₀, θ₀)`; its real part depends on the window.
    pub s: Complex64,
    /// Per collective index `k = 0..N`.
    pub s_k: Vec<Complex64>,
    pub window: PairedWindow,
    pub theta0: f64,
    /// `g_|m|(θ₀, θ₀)` for `|m| = 0..=window.max_order()`.
    pub mode_values: Vec<Complex64>,
}

impl SelfSums {
    /// Nominal truncation order.
    pub fn m_max(&self) -> usize {
        self.window.m_max()
    }

    pub fn n(&self) -> usize {
        self.window.n()
    }

    /// Builds the sums from on-source mode values `g_0, g_1, …`.
    pub fn from_mode_values(window: PairedWindow, theta0: f64, mode_values: Vec<Complex64>) -> Result<Self> {
        let need = window.max_order() + 1;
        if mode_values.len() < need {
            return Err(Error::InvalidArgument(format!(
                "window needs {need} mode values, got {}",
                mode_values.len()
            )));
        }
        let n = window.n();
        let zero = Complex64::new(0.0, 0.0);
        let mut s = zero;
        let mut s_k = vec![zero; n];
        // Ascending |m|; each ±m pair is split between classes m mod N and −m mod N.
        for (m, &g) in mode_values.iter().enumerate().take(need) {
            let w = window.weight(m as i64);
            if w == 0.0 {
                continue;
            }
            let term = w * g;
            if m == 0 {
                s += term;
                s_k[0] += term;
            } else {
                s += 2.0 * term;
                s_k[m % n] += term;
                s_k[(n - m % n) % n] += term;
            }
        }
        Ok(Self {
            s,
            s_k,
            window,
            theta0,
            mode_values: mode_values[..need].to_vec(),
        })
    }
}

/// Solves the modes at the ring latitude and assembles `S`, `S_k`.
pub fn self_sums(
    surface: &SpheroidSurface,
    scalars: &SppScalars,
    theta0: f64,
    window: PairedWindow,
    ablation: Ablation,
    settings: &SolverSettings,
) -> Result<SelfSums> {
    let (grid, pml) = settings.layout(surface, scalars, theta0, None)?;
    let op = RadialOperator::new(surface, scalars, grid, pml, ablation)?;
    self_sums_with_operator(&op, theta0, window)
}

pub fn self_sums_with_operator(op: &RadialOperator, theta0: f64, window: PairedWindow) -> Result<SelfSums> {
    let orders: Vec<i64> = (0..=window.max_order() as i64).collect();
    let values = op
        .solve_many(&orders, theta0)?
        .into_iter()
        .map(|sol| sol.at_source)
        .collect();
    SelfSums::from_mode_values(window, theta0, values)
}
