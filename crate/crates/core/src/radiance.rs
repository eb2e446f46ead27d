//! Collective decay rates and cooperative shifts of an emitter ring.
//!
//! The ring coupling matrix is circulant, so the discrete Fourier vectors are
//! its eigenvectors and each collective index `k` draws on the azimuthal orders
//! `m ≡ ±k (mod N)` only.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Ablation, SpheroidSurface};
use crate::greens::{self_sums, PairedWindow, SelfSums};
use crate::materials::SppScalars;
use crate::radial::SolverSettings;
use crate::special::hankel0_first_kind;

/// Upper bound on the polar angle of a ring.
const MAX_RING_ANGLE: f64 = std::f64::consts::FRAC_PI_4;

/// Largest ring the dense projection path accepts.
pub const BRUTE_FORCE_MAX_EMITTERS: usize = 16;

/// `N` emitters on the parallel circle at `theta0`, at azimuths `2πj/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmitterRing {
    n: usize,
    theta0: f64,
    spacing: f64,
}

impl EmitterRing {
    pub fn new(n: usize, theta0: f64, spacing: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("a ring needs N >= 2, got {n}")));
        }
        if !(theta0 > 0.0 && theta0 < PI) {
            return Err(Error::InvalidArgument(format!("ring angle {theta0} outside (0, pi)")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {spacing}")));
        }
        Ok(Self { n, theta0, spacing })
    }

    /// Places the ring so neighbours sit `spacing` apart (chord model).
    pub fn on_surface(surface: &SpheroidSurface, n: usize, spacing: f64) -> Result<Self> {
        let theta0 = ring_polar_angle(surface, n, spacing)?;
        Self::new(n, theta0, spacing)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn azimuth(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }
}

/// Solves `2 a sinθ₀ sin(π/N) = spacing` for `θ₀ ∈ (0, π/4)` by bisection.
pub fn ring_polar_angle(surface: &SpheroidSurface, n: usize, spacing: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a ring needs N >= 2, got {n}")));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidArgument(format!("spacing must be positive, got {spacing}")));
    }
    let chord = |theta: f64| 2.0 * surface.a() * theta.sin() * (PI / n as f64).sin();
    if chord(MAX_RING_ANGLE) <= spacing {
        return Err(Error::InvalidGeometry(format!(
            "ring with N = {n} and spacing {spacing} nm does not fit below pi/4 on a = {} nm",
            surface.a()
        )));
    }
    let (mut lo, mut hi) = (0.0, MAX_RING_ANGLE);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chord(mid) < spacing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Normalized collective observables for `k = 0..N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollectiveSpectrum {
    pub n: usize,
    pub theta0: f64,
    /// `γ_k / γ₀`.
    pub gamma_norm: Vec<f64>,
    /// `Δ_k / γ₀`.
    pub delta_norm: Vec<f64>,
    pub window: PairedWindow,
    /// `Im S`, the single-emitter decay in the units of the mode sum.
    pub im_self: f64,
    /// Largest `‖Ωv − λv‖ / ‖Ω‖` over the Fourier vectors (dense path only).
    pub eigen_residual: Option<f64>,
}

impl CollectiveSpectrum {
    /// `Σ_k γ_k/γ₀ − N`.
    pub fn sum_rule_residual(&self) -> f64 {
        self.gamma_norm.iter().sum::<f64>() - self.n as f64
    }

    /// Number of distinct `(γ_k, Δ_k)` pairs, merging pairs within `tol`.
    pub fn distinct_values(&self, tol: f64) -> usize {
        let mut reps: Vec<(f64, f64)> = Vec::new();
        for (&g, &d) in self.gamma_norm.iter().zip(&self.delta_norm) {
            if !reps.iter().any(|&(rg, rd)| (rg - g).abs() <= tol && (rd - d).abs() <= tol) {
                reps.push((g, d));
            }
        }
        reps.len()
    }
}

/// Circulant fast path from precomputed self-sums.
pub fn spectrum_from_sums(sums: &SelfSums) -> Result<CollectiveSpectrum> {
    let im_self = sums.s.im;
    if !(im_self > 0.0) {
        return Err(Error::Unphysical(im_self));
    }
    let n = sums.n() as f64;
    let gamma_norm = sums.s_k.iter().map(|sk| n * sk.im / im_self).collect();
    let delta_norm = sums
        .s_k
        .iter()
        .map(|sk| -0.5 * (n * sk.re - sums.s.re) / im_self)
        .collect();
    Ok(CollectiveSpectrum {
        n: sums.n(),
        theta0: sums.theta0,
        gamma_norm,
        delta_norm,
        window: sums.window,
        im_self,
        eigen_residual: None,
    })
}

pub fn collective_spectrum(
    surface: &SpheroidSurface,
    scalars: &SppScalars,
    ring: &EmitterRing,
    window: PairedWindow,
    ablation: Ablation,
    settings: &SolverSettings,
) -> Result<CollectiveSpectrum> {
    check_window(ring, &window)?;
    let sums = self_sums(surface, scalars, ring.theta0(), window, ablation, settings)?;
    spectrum_from_sums(&sums)
}

fn check_window(ring: &EmitterRing, window: &PairedWindow) -> Result<()> {
    if window.n() != ring.n() {
        return Err(Error::InvalidArgument(format!(
            "window built for N = {} but the ring has N = {}",
            window.n(),
            ring.n()
        )));
    }
    Ok(())
}

/// Dense `N×N` coupling matrix `Ω^{jl} = −G(φ_j − φ_l)` built from the same
/// mode values and window as the self-sums; the diagonal is `−S/2π`.
pub fn coupling_matrix(sums: &SelfSums) -> Vec<Vec<Complex64>> {
    let n = sums.n();
    let window = sums.window;
    let green = |dphi: f64| -> Complex64 {
        let mut v = sums.mode_values[0] * window.weight(0);
        for (m, &g) in sums.mode_values.iter().enumerate().skip(1) {
            v += 2.0 * window.weight(m as i64) * (m as f64 * dphi).cos() * g;
        }
        v / (2.0 * PI)
    };
    let offsets: Vec<Complex64> = (0..n).map(|l| green(2.0 * PI * l as f64 / n as f64)).collect();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|l| {
                    if j == l {
                        -sums.s / (2.0 * PI)
                    } else {
                        -offsets[(j + n - l) % n]
                    }
                })
                .collect()
        })
        .collect()
}

/// Dense path: projects `Ω` onto the Fourier vectors `e^{ikφ_j}/√N`.
pub fn brute_force_from_sums(sums: &SelfSums) -> Result<CollectiveSpectrum> {
    let n = sums.n();
    if n > BRUTE_FORCE_MAX_EMITTERS {
        return Err(Error::InvalidArgument(format!(
            "dense path limited to N <= {BRUTE_FORCE_MAX_EMITTERS}, got {n}"
        )));
    }
    let omega = coupling_matrix(sums);
    let self_term = omega[0][0];
    // γ₀ ∝ −2 Im Ω^{jj}, collective rates ∝ −2 Im λ_k.
    let im_self = -self_term.im;
    if !(im_self > 0.0) {
        return Err(Error::Unphysical(sums.s.im));
    }
    let norm = omega
        .iter()
        .map(|row| row.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let scale = 1.0 / (n as f64).sqrt();
    let mut gamma_norm = Vec::with_capacity(n);
    let mut delta_norm = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for k in 0..n {
        let v: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(scale, 2.0 * PI * (k * j) as f64 / n as f64))
            .collect();
        let omega_v: Vec<Complex64> = omega
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        let lambda: Complex64 = v.iter().zip(&omega_v).map(|(a, b)| a.conj() * b).sum();
        let r = omega_v
            .iter()
            .zip(&v)
            .map(|(ov, vj)| (ov - lambda * vj).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r / norm);
        gamma_norm.push(-lambda.im / im_self);
        delta_norm.push((lambda.re - self_term.re) / (2.0 * im_self));
    }
    Ok(CollectiveSpectrum {
        n,
        theta0: sums.theta0,
        gamma_norm,
        delta_norm,
        window: sums.window,
        im_self: sums.s.im,
        eigen_residual: Some(residual),
    })
}

pub fn brute_force_spectrum(
    surface: &SpheroidSurface,
    scalars: &SppScalars,
    ring: &EmitterRing,
    window: PairedWindow,
    ablation: Ablation,
    settings: &SolverSettings,
) -> Result<CollectiveSpectrum> {
    check_window(ring, &window)?;
    let sums = self_sums(surface, scalars, ring.theta0(), window, ablation, settings)?;
    brute_force_from_sums(&sums)
}

/// Planar reference built from `(i/4) H₀⁽¹⁾` couplings between ring positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarSpectrum {
    pub gamma_norm: Vec<f64>,
    pub delta_norm: Vec<f64>,
}

/// Dense planar circulant for `n` emitters on a flat ring with nearest-neighbour
/// distance `spacing`, using the real wavenumber.
pub fn planar_spectrum(scalars: &SppScalars, n: usize, spacing: f64) -> Result<PlanarSpectrum> {
    if n < 2 || !(spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "planar ring needs N >= 2 and positive spacing, got N = {n}, spacing = {spacing}"
        )));
    }
    let radius = spacing / (2.0 * (PI / n as f64).sin());
    let k = scalars.k_re();
    // First row of Ω = −G; the self term keeps only Im G(0) = 1/4.
    let mut row = vec![Complex64::new(0.0, -0.25); n];
    for (l, entry) in row.iter_mut().enumerate().skip(1) {
        let d = 2.0 * radius * (PI * l as f64 / n as f64).sin();
        *entry = -Complex64::new(0.0, 0.25) * hankel0_first_kind(k * d)?;
    }
    let self_term = row[0];
    let im_self = -self_term.im;
    let mut gamma_norm = Vec::with_capacity(n);
    let mut delta_norm = Vec::with_capacity(n);
    for k_idx in 0..n {
        let lambda: Complex64 = row
            .iter()
            .enumerate()
            .map(|(l, w)| w * Complex64::from_polar(1.0, 2.0 * PI * (k_idx * l) as f64 / n as f64))
            .sum();
        gamma_norm.push(-lambda.im / im_self);
        delta_norm.push((lambda.re - self_term.re) / (2.0 * im_self));
    }
    Ok(PlanarSpectrum {
        gamma_norm,
        delta_norm,
    })
}
