//! Metal-dielectric material pairs and the closed-form SPP scalars derived
//! from their permittivities.
//!
//! All lengths are in nanometres and all wavenumbers in nm⁻¹.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Square of the golden ratio, `(3 + √5) / 2`.
pub const GOLDEN_RATIO_SQUARED: f64 = 2.618_033_988_749_895;

/// Principal square root, reflected so that the real part is non-negative.
pub(crate) fn sqrt_re_pos(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 {
        -r
    } else {
        r
    }
}

/// Validated dielectric/metal permittivity pair at a vacuum wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialPair {
    eps_d: f64,
    eps_m: Complex64,
    lambda0: f64,
    k0: f64,
}

impl MaterialPair {
    /// Validates the bound-SPP existence condition `Re ε_m < −ε_d` and a
    /// non-negative loss.
    pub fn new(eps_d: f64, eps_m: Complex64, lambda0: f64) -> Result<Self> {
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return Err(Error::InvalidMaterial(format!(
                "vacuum wavelength must be positive, got {lambda0}"
            )));
        }
        if !(eps_d > 0.0 && eps_d.is_finite()) {
            return Err(Error::InvalidMaterial(format!(
                "dielectric permittivity must be positive, got {eps_d}"
            )));
        }
        if !(eps_m.re.is_finite() && eps_m.im.is_finite()) {
            return Err(Error::InvalidMaterial("metal permittivity is not finite".into()));
        }
        if eps_m.re >= -eps_d {
            return Err(Error::InvalidMaterial(format!(
                "no bound SPP: existence condition Re(eps_m) < -eps_d violated ({} >= {})",
                eps_m.re, -eps_d
            )));
        }
        if eps_m.im < 0.0 {
            return Err(Error::InvalidMaterial(format!(
                "metal loss must be non-negative, got Im(eps_m) = {}",
                eps_m.im
            )));
        }
        Ok(Self {
            eps_d,
            eps_m,
            lambda0,
            k0: 2.0 * PI / lambda0,
        })
    }

    pub fn eps_d(&self) -> f64 {
        self.eps_d
    }

    pub fn eps_m(&self) -> Complex64 {
        self.eps_m
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// The same pair with the metal loss removed.
    pub fn lossless(&self) -> Self {
        Self {
            eps_m: Complex64::new(self.eps_m.re, 0.0),
            ..*self
        }
    }

    pub fn scalars(&self) -> SppScalars {
        SppScalars::new(self)
    }

    /// `|Re ε_m + Φ² ε_d| / ε_d`; zero where the anisotropic coefficient vanishes.
    pub fn golden_ratio_deviation(&self) -> f64 {
        (self.eps_m.re + GOLDEN_RATIO_SQUARED * self.eps_d).abs() / self.eps_d
    }

    /// Flat-interface dipole coupling constant `C₀` at the full complex
    /// permittivity, with the first-order loss ratio `Im C₀ / Re C₀`.
    pub fn coupling_constant_c0(&self) -> (Complex64, f64) {
        let ed = Complex64::new(self.eps_d, 0.0);
        let em = self.eps_m;
        let root = sqrt_re_pos(-(em + ed));
        let c0 = -2.0 * self.k0 * em.powi(3) * ed * root / ((em - ed) * (em + ed).powi(3));
        (c0, c0_loss_ratio(self.eps_d, em))
    }
}

/// First-order expansion of `Im C₀ / Re C₀` in the metal loss.
pub fn c0_loss_ratio(eps_d: f64, eps_m: Complex64) -> f64 {
    let (re, im) = (eps_m.re, eps_m.im);
    im * (3.0 / re - 5.0 / (2.0 * (re + eps_d)) - 1.0 / (re - eps_d))
}

/// Every scalar derived from a [`MaterialPair`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SppScalars {
    pub pair: MaterialPair,
    /// In-plane SPP wavenumber (nm⁻¹), `Re > 0`.
    pub k_spp: Complex64,
    /// `k_spp²` evaluated directly from the dispersion relation.
    pub k_spp_sq: Complex64,
    /// Effective index `k_spp / k₀`.
    pub n_e: Complex64,
    /// Normal decay rate into the dielectric (nm⁻¹).
    pub kappa_d: Complex64,
    /// Normal decay rate into the metal (nm⁻¹).
    pub kappa_m: Complex64,
    /// Reduced SPP wavelength `1 / Re k_spp` (nm).
    pub lambda_bar_spp: f64,
    /// Coefficient of the isotropic potential `V_H = C_H H` (nm⁻¹).
    pub c_h: Complex64,
    /// Coefficient of the anisotropic operator `V_σ = C_σ σ^{ab}∇_a∇_b` (nm).
    pub c_sigma: Complex64,
    /// Lossless part of `k_spp²` in the first-order loss split (nm⁻²).
    pub k_spp_lossless_sq: f64,
    /// Uniform Ohmic damping term of the loss split (nm⁻²).
    pub k_loss: f64,
    /// Flat-interface dipole coupling constant (nm⁻¹).
    pub c0: Complex64,
    /// First-order `Im C₀ / Re C₀`.
    pub c0_loss_ratio: f64,
    /// Set when `|ε_m + ε_d| < ε_d / 2`: the curvature expansion is unreliable.
    pub near_resonance: bool,
}

impl SppScalars {
    pub fn new(pair: &MaterialPair) -> Self {
        let k0 = pair.k0;
        let ed = Complex64::new(pair.eps_d, 0.0);
        let em = pair.eps_m;
        let sum = ed + em;
        let root = sqrt_re_pos(-sum);

        let n_e_sq = em * ed / sum;
        let n_e = sqrt_re_pos(n_e_sq);
        let k_spp = k0 * n_e;
        let k_spp_sq = k0 * k0 * n_e_sq;
        let kappa_d = k0 * ed / root;
        let kappa_m = -k0 * em / root;

        let c_h = k0 * (ed * ed + ed * em + em * em) / (sum * root);
        let c_sigma = -(ed * ed + 3.0 * ed * em + em * em) / (k0 * ed * em * root);

        let (re, im) = (em.re, em.im);
        let k_spp_lossless_sq = k0 * k0 * pair.eps_d * re / (pair.eps_d + re);
        let k_loss = k0 * k0 * pair.eps_d * pair.eps_d * im / (pair.eps_d + re).powi(2);

        let (c0, c0_loss_ratio) = pair.coupling_constant_c0();

        Self {
            pair: *pair,
            k_spp,
            k_spp_sq,
            n_e,
            kappa_d,
            kappa_m,
            lambda_bar_spp: 1.0 / k_spp.re,
            c_h,
            c_sigma,
            k_spp_lossless_sq,
            k_loss,
            c0,
            c0_loss_ratio,
            near_resonance: sum.norm() < 0.5 * pair.eps_d,
        }
    }

    pub fn k_re(&self) -> f64 {
        self.k_spp.re
    }
}

/// One record of a plain-text permittivity table.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRecord {
    pub name: String,
    pub lambda0: f64,
    pub eps_m: Complex64,
}

/// Permittivities keyed by metal name and vacuum wavelength.
///
/// Format: one record per line, `name lambda0_nm re_eps im_eps`; `#` starts
/// a comment and blank lines are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaterialTable {
    records: Vec<MaterialRecord>,
}

impl MaterialTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::TableParse {
                    line: idx + 1,
                    message: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let num = |s: &str, what: &str| {
                s.parse::<f64>().map_err(|_| Error::TableParse {
                    line: idx + 1,
                    message: format!("cannot parse {what} from {s:?}"),
                })
            };
            let lambda0 = num(fields[1], "lambda0")?;
            let re = num(fields[2], "Re eps")?;
            let im = num(fields[3], "Im eps")?;
            records.push(MaterialRecord {
                name: fields[0].to_string(),
                lambda0,
                eps_m: Complex64::new(re, im),
            });
        }
        Ok(Self { records })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::TableParse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn records(&self) -> &[MaterialRecord] {
        &self.records
    }

    /// Exact lookup; wavelengths match within 1e-9 nm.
    pub fn lookup(&self, name: &str, lambda0: f64) -> Option<Complex64> {
        self.records
            .iter()
            .find(|r| r.name.eq_ignore_ascii_case(name) && (r.lambda0 - lambda0).abs() < 1e-9)
            .map(|r| r.eps_m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn silver() -> MaterialPair {
        MaterialPair::new(1.0, Complex64::new(-16.12, 0.44), 600.0).unwrap()
    }

    #[test]
    fn silver_pair_is_valid() {
        let p = silver();
        assert_relative_eq!(p.k0(), 0.010_471_975_511_965_976, max_relative = 1e-12);
        assert!(MaterialPair::new(1.0, Complex64::new(-24.15, 1.51), 800.0).is_ok());
    }

    #[test]
    fn rejects_invalid_pairs() {
        let e = MaterialPair::new(1.0, Complex64::new(-0.5, 0.0), 600.0).unwrap_err();
        assert!(e.to_string().contains("existence condition"));
        assert!(MaterialPair::new(0.0, Complex64::new(-5.0, 0.0), 600.0).is_err());
        assert!(MaterialPair::new(1.0, Complex64::new(-5.0, -0.1), 600.0).is_err());
        assert!(MaterialPair::new(1.0, Complex64::new(-5.0, 0.1), 0.0).is_err());
        // boundary of the existence condition is excluded
        assert!(MaterialPair::new(2.0, Complex64::new(-2.0, 0.0), 600.0).is_err());
    }

    #[test]
    fn silver_scalars() {
        let s = silver().scalars();
        assert!((s.lambda_bar_spp - 92.7).abs() / 92.7 < 0.01);
        let lossless = silver().lossless().scalars();
        assert!((lossless.c_h.re + 0.044).abs() / 0.044 < 0.02);
        assert_eq!(lossless.c_h.im, 0.0);
        assert_eq!(lossless.k_loss, 0.0);
        assert!(s.k_re() > s.pair.k0() * s.pair.eps_d().sqrt());
        assert!(!s.near_resonance);
    }

    #[test]
    fn golden_ratio_point_kills_c_sigma() {
        let p = MaterialPair::new(1.0, Complex64::new(-GOLDEN_RATIO_SQUARED, 0.0), 600.0).unwrap();
        assert!(p.scalars().c_sigma.norm() < 1e-13);
        assert!(p.golden_ratio_deviation() < 1e-15);
        let p2 = MaterialPair::new(2.0, Complex64::new(-5.236068, 0.0), 600.0).unwrap();
        assert!(p2.golden_ratio_deviation() < 1e-6);
        assert!((silver().golden_ratio_deviation() - 13.501_966).abs() < 1e-2);
    }

    #[test]
    fn c0_loss_ratios() {
        let (_, r) = silver().coupling_constant_c0();
        assert!((r - 0.016).abs() / 0.016 < 0.1, "{r}");
        let gold = MaterialPair::new(1.0, Complex64::new(-24.15, 1.51), 800.0).unwrap();
        let (_, r) = gold.coupling_constant_c0();
        assert!((r - 0.035).abs() / 0.035 < 0.1, "{r}");
        let (c0, r) = silver().lossless().coupling_constant_c0();
        assert_eq!(c0.im, 0.0);
        assert_eq!(r, 0.0);
    }

    #[test]
    fn first_order_ratio_tracks_exact_c0() {
        let (c0, r) = silver().coupling_constant_c0();
        let exact = c0.im / c0.re;
        assert!((exact - r).abs() < 0.05 * r);
    }

    #[test]
    fn near_resonance_flag() {
        let p = MaterialPair::new(1.0, Complex64::new(-1.3, 0.0), 600.0).unwrap();
        assert!(p.scalars().near_resonance);
    }

    #[test]
    fn table_roundtrip() {
        let t = MaterialTable::parse(
            "# metal lambda re im\nsilver 600 -16.12 0.44\n\ngold 800 -24.15 1.51 # JC\n",
        )
        .unwrap();
        assert_eq!(t.records().len(), 2);
        assert_eq!(t.lookup("gold", 800.0), Some(Complex64::new(-24.15, 1.51)));
        assert_eq!(t.lookup("Silver", 600.0), Some(Complex64::new(-16.12, 0.44)));
        assert_eq!(t.lookup("silver", 601.0), None);
        let err = MaterialTable::parse("silver 600 -16.12\n").unwrap_err();
        assert!(matches!(err, Error::TableParse { line: 1, .. }));
    }
}
