//! Parameter scans of the collective spectrum over sphere curvature or
//! spheroid aspect ratio.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Ablation, Orientation, SpheroidSurface};
use crate::greens::{default_m_max, PairedWindow, WindowShape};
use crate::materials::SppScalars;
use crate::radial::SolverSettings;
use crate::radiance::{collective_spectrum, CollectiveSpectrum, EmitterRing};

/// Radius (in reduced SPP wavelengths) standing in for the flat interface at `H = 0`.
pub const FLAT_PROXY_RADIUS: f64 = 1e5;

/// Largest `|H| λ̄_spp` covered by the curvature expansion as studied.
pub const MAX_STUDIED_CURVATURE: f64 = 0.08;

/// Studied aspect-ratio range.
pub const STUDIED_ASPECT: (f64, f64) = (0.05, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanKind {
    /// Parameter is `H λ̄_spp`; negative values are convex metal spheres.
    SphereCurvature,
    /// Parameter is `c/a` on a convex spheroid with fixed `a` (in `λ̄_spp`).
    SpheroidAspect { a_reduced: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub kind: ScanKind,
    pub scan_min: f64,
    pub scan_max: f64,
    pub steps: usize,
    pub n_emitters: usize,
    /// Nearest-neighbour spacing in `λ̄_spp`.
    pub spacing_reduced: f64,
    pub ablation: Ablation,
    pub settings: SolverSettings,
    /// `m_max / N`; the default rule applies when `None`.
    pub m_max_blocks: Option<usize>,
    pub window_shape: WindowShape,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "a scan needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if !(self.scan_min.is_finite() && self.scan_max.is_finite() && self.scan_min < self.scan_max) {
            return Err(Error::InvalidArgument(format!(
                "scan range [{}, {}] is empty",
                self.scan_min, self.scan_max
            )));
        }
        if self.n_emitters < 2 {
            return Err(Error::InvalidArgument("ring needs N >= 2".into()));
        }
        if !(self.spacing_reduced > 0.0) {
            return Err(Error::InvalidArgument("spacing must be positive".into()));
        }
        if let ScanKind::SpheroidAspect { a_reduced } = self.kind {
            if !(a_reduced > 0.0) {
                return Err(Error::InvalidArgument("semi-axis a must be positive".into()));
            }
            if self.scan_min <= 0.0 {
                return Err(Error::InvalidArgument("aspect ratios must be positive".into()));
            }
        }
        if self.m_max_blocks == Some(0) {
            return Err(Error::InvalidArgument("m_max_blocks must be at least 1".into()));
        }
        self.settings.validate()
    }

    pub fn parameters(&self) -> Vec<f64> {
        let span = self.scan_max - self.scan_min;
        (0..self.steps)
            .map(|i| self.scan_min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    /// Parameters outside the range the curvature expansion was studied in.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.kind {
            ScanKind::SphereCurvature => {
                let worst = self.scan_min.abs().max(self.scan_max.abs());
                if worst > MAX_STUDIED_CURVATURE {
                    out.push(format!(
                        "|H| lambda_bar up to {worst} exceeds {MAX_STUDIED_CURVATURE}; the weak-curvature expansion may not hold"
                    ));
                }
            }
            ScanKind::SpheroidAspect { .. } => {
                let (lo, hi) = STUDIED_ASPECT;
                if self.scan_min < lo || self.scan_max > hi {
                    out.push(format!(
                        "aspect ratios outside [{lo}, {hi}] violate the slowly varying curvature assumption"
                    ));
                }
            }
        }
        out
    }

    /// Surface for one scan parameter (lengths in nm).
    pub fn surface_at(&self, param: f64, lambda_bar: f64) -> Result<SpheroidSurface> {
        match self.kind {
            ScanKind::SphereCurvature => {
                if param == 0.0 {
                    SpheroidSurface::sphere(FLAT_PROXY_RADIUS * lambda_bar, Orientation::Convex)
                } else {
                    let orientation = if param < 0.0 {
                        Orientation::Convex
                    } else {
                        Orientation::Concave
                    };
                    SpheroidSurface::sphere(lambda_bar / param.abs(), orientation)
                }
            }
            ScanKind::SpheroidAspect { a_reduced } => {
                let a = a_reduced * lambda_bar;
                SpheroidSurface::new(a, param * a, Orientation::Convex)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub param: f64,
    pub spectrum: Option<CollectiveSpectrum>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub points: Vec<ScanPoint>,
    pub warnings: Vec<String>,
}

impl ScanReport {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.spectrum.is_none()).count()
    }
}

/// Spectrum at one scan parameter.
pub fn scan_point(config: &ScanConfig, scalars: &SppScalars, param: f64) -> Result<CollectiveSpectrum> {
    let lambda_bar = scalars.lambda_bar_spp;
    let surface = config.surface_at(param, lambda_bar)?;
    let ring = EmitterRing::on_surface(&surface, config.n_emitters, config.spacing_reduced * lambda_bar)?;
    let n = config.n_emitters;
    let m_max = match config.m_max_blocks {
        Some(blocks) => blocks * n,
        None => default_m_max(scalars, &surface, ring.theta0(), n),
    };
    let window = PairedWindow::new(n, m_max, config.window_shape)?;
    collective_spectrum(&surface, scalars, &ring, window, config.ablation, &config.settings)
}

/// Runs every scan point in parallel; rows stay in scan order and per-point
/// failures are recorded rather than aborting the scan.
pub fn run_scan(config: &ScanConfig, scalars: &SppScalars) -> Result<ScanReport> {
    config.validate()?;
    let points = config
        .parameters()
        .into_par_iter()
        .map(|param| match scan_point(config, scalars, param) {
            Ok(spectrum) => ScanPoint {
                param,
                spectrum: Some(spectrum),
                error: None,
            },
            Err(e) => ScanPoint {
                param,
                spectrum: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(ScanReport {
        config: *config,
        points,
        warnings: config.warnings(),
    })
}
