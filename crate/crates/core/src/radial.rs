//! Per-azimuthal-order radial problem: second-order finite differences on a
//! uniform polar-angle grid, a complex-stretched absorbing layer at the far
//! end, pole conditions at `θ = 0` and a point source at `θ₀`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{coefficient_parts, pole_coefficients, Ablation, SpheroidSurface};
use crate::materials::SppScalars;
use crate::tridiag::TridiagonalSystem;

/// Smallest grid the solver accepts.
pub const MIN_GRID_POINTS: usize = 64;

/// Polynomial absorbing layer on `[theta_pml, theta_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PmlConfig {
    pub theta_pml: f64,
    pub theta_max: f64,
    pub sigma_max: f64,
    pub ramp_exponent: u32,
}

/// Stretch factor `ζ`, its derivative and the complex coordinate `θ̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stretch {
    pub zeta: Complex64,
    pub zeta_prime: Complex64,
    pub theta_tilde: Complex64,
}

impl PmlConfig {
    /// Cubic ramp.
    pub fn new(theta_pml: f64, theta_max: f64, sigma_max: f64) -> Result<Self> {
        Self::with_ramp(theta_pml, theta_max, sigma_max, 3)
    }

    pub fn with_ramp(theta_pml: f64, theta_max: f64, sigma_max: f64, ramp_exponent: u32) -> Result<Self> {
        if !(theta_pml > 0.0 && theta_pml < theta_max && theta_max < std::f64::consts::PI) {
            return Err(Error::InvalidArgument(format!(
                "absorber needs 0 < theta_pml < theta_max < pi, got {theta_pml} and {theta_max}"
            )));
        }
        if !(sigma_max > 0.0 && sigma_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sigma_max must be positive, got {sigma_max}"
            )));
        }
        if ramp_exponent == 0 {
            return Err(Error::InvalidArgument("ramp exponent must be at least 1".into()));
        }
        Ok(Self {
            theta_pml,
            theta_max,
            sigma_max,
            ramp_exponent,
        })
    }

    pub fn width(&self) -> f64 {
        self.theta_max - self.theta_pml
    }

    /// Absorption profile `σ(θ)`.
    pub fn sigma(&self, theta: f64) -> f64 {
        if theta <= self.theta_pml {
            return 0.0;
        }
        let x = (theta - self.theta_pml) / self.width();
        self.sigma_max * x.powi(self.ramp_exponent as i32)
    }

    pub fn stretch(&self, theta: f64) -> Stretch {
        if theta <= self.theta_pml {
            return Stretch {
                zeta: Complex64::new(1.0, 0.0),
                zeta_prime: Complex64::new(0.0, 0.0),
                theta_tilde: Complex64::new(theta, 0.0),
            };
        }
        let width = self.width();
        let p = self.ramp_exponent as i32;
        let x = (theta - self.theta_pml) / width;
        let sigma = self.sigma_max * x.powi(p);
        let sigma_prime = p as f64 * self.sigma_max * x.powi(p - 1) / width;
        let integral = self.sigma_max * width * x.powi(p + 1) / (p + 1) as f64;
        Stretch {
            zeta: Complex64::new(1.0, sigma),
            zeta_prime: Complex64::new(0.0, sigma_prime),
            theta_tilde: Complex64::new(theta, integral),
        }
    }
}

/// Uniform nodes `θ_i = i·h`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    n_points: usize,
    h: f64,
}

impl RadialGrid {
    pub fn new(theta_max: f64, n_points: usize) -> Result<Self> {
        if n_points < MIN_GRID_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {n_points}"
            )));
        }
        if !(theta_max > 0.0 && theta_max < std::f64::consts::PI) {
            return Err(Error::InvalidArgument(format!(
                "grid end must lie in (0, pi), got {theta_max}"
            )));
        }
        Ok(Self {
            n_points,
            h: theta_max / (n_points - 1) as f64,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn theta_max(&self) -> f64 {
        self.node(self.n_points - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.node(i))
    }
}

/// Numerical defaults for grid and absorber construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverSettings {
    /// Grid nodes per SPP wavelength, measured on the largest semi-axis.
    pub grid_density: f64,
    /// Absorber width in SPP wavelengths of arc length.
    pub pml_width_wavelengths: f64,
    pub sigma_max: f64,
    /// Minimum domain extent beyond the source, in reduced SPP wavelengths.
    pub domain_reduced_wavelengths: f64,
    /// Physical margin kept between the farthest evaluation angle and the absorber.
    pub reach_margin_reduced_wavelengths: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            grid_density: 60.0,
            pml_width_wavelengths: 2.0,
            sigma_max: 5.0,
            domain_reduced_wavelengths: 25.0,
            reach_margin_reduced_wavelengths: 2.0,
        }
    }
}

const MAX_DOMAIN_FRACTION: f64 = 0.95;

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{what} must be positive, got {v}")))
            }
        };
        positive(self.grid_density, "grid density")?;
        positive(self.pml_width_wavelengths, "PML width")?;
        positive(self.sigma_max, "sigma_max")?;
        positive(self.domain_reduced_wavelengths, "domain extent")?;
        if !(self.reach_margin_reduced_wavelengths >= 0.0) {
            return Err(Error::InvalidArgument("reach margin must be non-negative".into()));
        }
        Ok(())
    }

    /// Grid and absorber for a source at `theta0`, keeping `reach` (if given)
    /// inside the physical region.
    pub fn layout(
        &self,
        surface: &SpheroidSurface,
        scalars: &SppScalars,
        theta0: f64,
        reach: Option<f64>,
    ) -> Result<(RadialGrid, PmlConfig)> {
        self.validate()?;
        let limit = MAX_DOMAIN_FRACTION * std::f64::consts::PI;
        if !(theta0 > 0.0 && theta0 < limit) {
            return Err(Error::InvalidArgument(format!(
                "source angle {theta0} outside (0, {limit})"
            )));
        }
        let lambda_bar = scalars.lambda_bar_spp;
        let arc = surface.rho(theta0).sqrt();
        let pml_width = self.pml_width_wavelengths * 2.0 * std::f64::consts::PI * lambda_bar / arc;
        let far = reach.unwrap_or(theta0).max(theta0);
        let theta_max = (theta0 + self.domain_reduced_wavelengths * lambda_bar / arc)
            .max(far + self.reach_margin_reduced_wavelengths * lambda_bar / arc + pml_width);
        if theta_max > limit && far + pml_width >= limit {
            return Err(Error::InvalidArgument(format!(
                "evaluation angle {far} leaves no room for the absorber before the south pole"
            )));
        }
        let theta_max = theta_max.min(limit);
        let theta_pml = theta_max - pml_width;

        let k = scalars.k_re();
        let h_target = 2.0 * std::f64::consts::PI / (self.grid_density * k * surface.a().max(surface.c()));
        let n = ((theta_max / h_target).ceil() as usize + 1).max(MIN_GRID_POINTS);
        let grid = RadialGrid::new(theta_max, n)?;
        let pml = PmlConfig::new(theta_pml, grid.theta_max(), self.sigma_max)?;
        Ok((grid, pml))
    }
}

/// Where the point source lands on the grid: nodes `node` and `node + 1`
/// share it with weights `1 − weight` and `weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePlacement {
    pub node: usize,
    pub weight: f64,
}

/// Relative distance to a node below which the source is moved onto it.
const SNAP_TOLERANCE: f64 = 1e-9;

impl SourcePlacement {
    fn locate(grid: &RadialGrid, theta0: f64) -> Self {
        let t = theta0 / grid.h();
        let nearest = t.round();
        if (t - nearest).abs() < SNAP_TOLERANCE {
            return Self {
                node: nearest as usize,
                weight: 0.0,
            };
        }
        let node = t.floor();
        Self {
            node: node as usize,
            weight: t - node,
        }
    }

    pub fn on_node(&self) -> bool {
        self.weight == 0.0
    }
}

/// Grid-sampled operator for one surface, material and absorber; shared by
/// every azimuthal order.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    surface: SpheroidSurface,
    scalars: SppScalars,
    grid: RadialGrid,
    pml: PmlConfig,
    ablation: Ablation,
    /// Stretched coefficients of `∂²`, `∂`, the static term and `m²`, per node (index 0 unused).
    second: Vec<Complex64>,
    first: Vec<Complex64>,
    static_part: Vec<Complex64>,
    azimuthal: Vec<Complex64>,
    pole_second: f64,
    pole_constant: Complex64,
}

impl RadialOperator {
    pub fn new(
        surface: &SpheroidSurface,
        scalars: &SppScalars,
        grid: RadialGrid,
        pml: PmlConfig,
        ablation: Ablation,
    ) -> Result<Self> {
        if (pml.theta_max - grid.theta_max()).abs() > 1e-12 * grid.theta_max() {
            return Err(Error::InvalidArgument(format!(
                "absorber ends at {} but the grid ends at {}",
                pml.theta_max,
                grid.theta_max()
            )));
        }
        let n = grid.n_points();
        let zero = Complex64::new(0.0, 0.0);
        let mut second = vec![zero; n];
        let mut first = vec![zero; n];
        let mut static_part = vec![zero; n];
        let mut azimuthal = vec![zero; n];
        for i in 1..n {
            let st = pml.stretch(grid.node(i));
            let parts = coefficient_parts(surface, scalars, st.theta_tilde, ablation)?;
            let z2 = st.zeta * st.zeta;
            second[i] = parts.a / z2;
            first[i] = parts.b / st.zeta - parts.a * st.zeta_prime / (z2 * st.zeta);
            static_part[i] = parts.static_part;
            azimuthal[i] = parts.azimuthal_part;
        }
        let pole = pole_coefficients(surface, scalars, ablation);
        Ok(Self {
            surface: *surface,
            scalars: *scalars,
            grid,
            pml,
            ablation,
            second,
            first,
            static_part,
            azimuthal,
            pole_second: pole.second_derivative,
            pole_constant: pole.constant,
        })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn pml(&self) -> &PmlConfig {
        &self.pml
    }

    pub fn surface(&self) -> &SpheroidSurface {
        &self.surface
    }

    pub fn ablation(&self) -> Ablation {
        self.ablation
    }

    pub fn scalars(&self) -> &SppScalars {
        &self.scalars
    }

    fn check_source(&self, theta0: f64) -> Result<()> {
        let h = self.grid.h();
        if !(theta0 > h && theta0 < self.pml.theta_pml - h) {
            return Err(Error::InvalidArgument(format!(
                "source angle {theta0} must lie in ({h}, {}) (one cell inside the physical region)",
                self.pml.theta_pml - h
            )));
        }
        Ok(())
    }

    /// Strength `1/(a sinθ₀ √ρ₀)` of the delta source.
    pub fn source_strength(&self, theta0: f64) -> f64 {
        1.0 / (self.surface.a() * theta0.sin() * self.surface.rho(theta0).sqrt())
    }

    /// Matrix with a zero right-hand side.
    pub fn matrix(&self, m: i64) -> TridiagonalSystem {
        let n = self.grid.n_points();
        let h = self.grid.h();
        let h2 = h * h;
        let one = Complex64::new(1.0, 0.0);
        let mut sys = TridiagonalSystem::zeros(n);
        let m2 = (m as f64) * (m as f64);
        for i in 1..n - 1 {
            let a2 = self.second[i];
            let b1 = self.first[i];
            let c = self.static_part[i] - m2 * self.azimuthal[i];
            sys.lower[i - 1] = a2 / h2 - b1 / (2.0 * h);
            sys.diag[i] = -2.0 * a2 / h2 + c;
            sys.upper[i] = a2 / h2 + b1 / (2.0 * h);
        }
        if m == 0 {
            // Ghost node g₋₁ = g₁ enforces a vanishing slope at the pole.
            let coupling = 2.0 * self.pole_second / h2;
            sys.diag[0] = Complex64::new(-coupling, 0.0) + self.pole_constant;
            sys.upper[0] = Complex64::new(coupling, 0.0);
        } else {
            sys.diag[0] = one;
        }
        sys.diag[n - 1] = one;
        sys
    }

    /// Full system with the source at `theta0`.
    pub fn system(&self, m: i64, theta0: f64) -> Result<TridiagonalSystem> {
        self.check_source(theta0)?;
        let mut sys = self.matrix(m);
        let place = SourcePlacement::locate(&self.grid, theta0);
        let q = Complex64::new(-self.source_strength(theta0) / self.grid.h(), 0.0);
        sys.rhs[place.node] += q * (1.0 - place.weight);
        if !place.on_node() {
            sys.rhs[place.node + 1] += q * place.weight;
        }
        Ok(sys)
    }

    pub fn solve(&self, m: i64, theta0: f64) -> Result<ModeSolution> {
        let sys = self.system(m, theta0)?;
        let values = sys.solve()?;
        Ok(ModeSolution::from_values(self, m, theta0, values))
    }

    /// Solves every order in `orders` in parallel; results keep the input order.
    pub fn solve_many(&self, orders: &[i64], theta0: f64) -> Result<Vec<ModeSolution>> {
        self.check_source(theta0)?;
        orders.par_iter().map(|&m| self.solve(m, theta0)).collect()
    }
}

/// One azimuthal order of the Green's function on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub m: i64,
    pub theta0: f64,
    pub h: f64,
    pub values: Vec<Complex64>,
    /// `g_m(θ₀, θ₀)`, linearly interpolated when `θ₀` is off-node.
    pub at_source: Complex64,
    /// `|A(θ₀)(∂g₊ − ∂g₋) + 1/(a sinθ₀ √ρ₀)|` from one-sided second-order slopes.
    pub jump_residual: f64,
    placement: SourcePlacement,
}

fn quadratic_slope(nodes: [f64; 3], vals: [Complex64; 3], t: f64) -> Complex64 {
    let [x0, x1, x2] = nodes;
    let l0 = ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2));
    let l1 = ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2));
    let l2 = ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1));
    vals[0] * l0 + vals[1] * l1 + vals[2] * l2
}

impl ModeSolution {
    fn from_values(op: &RadialOperator, m: i64, theta0: f64, values: Vec<Complex64>) -> Self {
        let grid = op.grid;
        let place = SourcePlacement::locate(&grid, theta0);
        let j = place.node;
        let w = place.weight;
        let at_source = if place.on_node() {
            values[j]
        } else {
            values[j] * (1.0 - w) + values[j + 1] * w
        };

        let node = |i: usize| grid.node(i);
        let (left, right) = if place.on_node() {
            ([j - 2, j - 1, j], [j, j + 1, j + 2])
        } else {
            ([j.saturating_sub(2), j - 1, j], [j + 1, j + 2, j + 3])
        };
        let jump_residual = if left[0] + 2 == left[2] && right[2] < grid.n_points() {
            let slope = |idx: [usize; 3]| {
                quadratic_slope(
                    [node(idx[0]), node(idx[1]), node(idx[2])],
                    [values[idx[0]], values[idx[1]], values[idx[2]]],
                    theta0,
                )
            };
            let jump = slope(right) - slope(left);
            // The absorber never reaches the source, so A/ζ² is the physical A there.
            let a_source = coefficient_parts(
                &op.surface,
                &op.scalars,
                Complex64::new(theta0, 0.0),
                op.ablation,
            )
            .map(|p| p.a);
            match a_source {
                Ok(a) => (a * jump + op.source_strength(theta0)).norm(),
                Err(_) => f64::NAN,
            }
        } else {
            f64::NAN
        };

        Self {
            m,
            theta0,
            h: grid.h(),
            values,
            at_source,
            jump_residual,
            placement: place,
        }
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Interpolated `g_m(θ; θ₀)`. Cubic where the stencil stays on one side of
    /// the source, linear across the source cell.
    pub fn value_at(&self, theta: f64) -> Result<Complex64> {
        let n = self.values.len();
        let t = theta / self.h;
        if !(t >= 0.0 && t <= (n - 1) as f64) {
            return Err(Error::InvalidArgument(format!(
                "angle {theta} lies outside the solution grid"
            )));
        }
        let i = (t.floor() as usize).min(n - 2);
        let j = self.placement.node;
        let kink_lo = j;
        let kink_hi = if self.placement.on_node() { j } else { j + 1 };
        // Cell [i, i+1] touching the source: only linear interpolation is safe.
        if !self.placement.on_node() && i == j {
            let w = t - i as f64;
            return Ok(self.values[i] * (1.0 - w) + self.values[i + 1] * w);
        }
        let mut lo = i.saturating_sub(1).min(n - 4);
        let side_left = i < kink_lo || (self.placement.on_node() && i < j);
        if side_left {
            // Keep nodes at or before the kink.
            if lo + 3 > kink_lo {
                lo = kink_lo.saturating_sub(3);
            }
        } else if lo < kink_hi {
            lo = kink_hi;
        }
        if lo + 3 >= n || (side_left && lo + 3 > kink_lo) {
            let w = t - i as f64;
            return Ok(self.values[i] * (1.0 - w) + self.values[i + 1] * w);
        }
        let xs: Vec<f64> = (lo..lo + 4).map(|k| k as f64).collect();
        let mut v = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            let mut l = 1.0;
            for b in 0..4 {
                if a != b {
                    l *= (t - xs[b]) / (xs[a] - xs[b]);
                }
            }
            v += self.values[lo + a] * l;
        }
        Ok(v)
    }
}

/// Validated single-order problem.
#[derive(Debug, Clone)]
pub struct ModeProblem {
    pub surface: SpheroidSurface,
    pub scalars: SppScalars,
    pub m: i64,
    pub theta0: f64,
    pub grid: RadialGrid,
    pub pml: PmlConfig,
    pub ablation: Ablation,
}

impl ModeProblem {
    pub fn new(
        surface: SpheroidSurface,
        scalars: SppScalars,
        m: i64,
        theta0: f64,
        grid: RadialGrid,
        pml: PmlConfig,
        ablation: Ablation,
    ) -> Result<Self> {
        let problem = Self {
            surface,
            scalars,
            m,
            theta0,
            grid,
            pml,
            ablation,
        };
        problem.operator()?.check_source(theta0)?;
        Ok(problem)
    }

    /// Problem on the default layout for a source at `theta0`.
    pub fn with_settings(
        surface: SpheroidSurface,
        scalars: SppScalars,
        m: i64,
        theta0: f64,
        settings: &SolverSettings,
        ablation: Ablation,
    ) -> Result<Self> {
        let (grid, pml) = settings.layout(&surface, &scalars, theta0, None)?;
        Self::new(surface, scalars, m, theta0, grid, pml, ablation)
    }

    pub fn operator(&self) -> Result<RadialOperator> {
        RadialOperator::new(&self.surface, &self.scalars, self.grid, self.pml, self.ablation)
    }
}

pub fn assemble_system(problem: &ModeProblem) -> Result<TridiagonalSystem> {
    problem.operator()?.system(problem.m, problem.theta0)
}

pub fn solve_mode(problem: &ModeProblem) -> Result<ModeSolution> {
    problem.operator()?.solve(problem.m, problem.theta0)
}
