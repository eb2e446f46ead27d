use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvspp::{Ablation, SolverSettings, WindowShape};
use num_complex::Complex64;

#[derive(Parser, Debug)]
#[command(name = "curvspp", version, about = "Surface plasmons and collective emission on curved metal surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the SPP scalars of a dielectric/metal pair.
    Materials(MaterialsArgs),
    /// Closed-form curvature corrections for spheres and cylinders.
    Dispersion(DispersionArgs),
    /// Evaluate the surface Green's function along a straight path in (theta, dphi).
    Green(GreenArgs),
    /// Scan the collective spectrum of an emitter ring over a geometry parameter.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Clone)]
pub struct MaterialArgs {
    /// Dielectric permittivity.
    #[arg(long, default_value_t = 1.0)]
    pub eps_d: f64,

    /// Metal permittivity, e.g. "-16.12+0.44i".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "material")]
    pub eps_m: Option<Complex64>,

    /// Vacuum wavelength in nm.
    #[arg(long, default_value_t = 600.0)]
    pub lambda0: f64,

    /// Permittivity table (`name lambda0_nm re_eps im_eps` per line).
    #[arg(long, requires = "material")]
    pub material_file: Option<PathBuf>,

    /// Metal name to look up in the table at `--lambda0`.
    #[arg(long, requires = "material_file")]
    pub material: Option<String>,
}

/// Numerical knobs shared by the solver-backed commands; unset values keep
/// the library defaults.
#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Grid nodes per SPP wavelength on the largest semi-axis.
    #[arg(long)]
    pub grid_density: Option<f64>,

    /// Peak absorber strength.
    #[arg(long)]
    pub pml_sigma_max: Option<f64>,

    /// Absorber width in SPP wavelengths.
    #[arg(long)]
    pub pml_width: Option<f64>,

    /// Minimum domain beyond the source, in reduced SPP wavelengths.
    #[arg(long)]
    pub domain: Option<f64>,

    /// Drop the isotropic curvature potential.
    #[arg(long)]
    pub ablate_vh: bool,

    /// Drop the anisotropic curvature operator.
    #[arg(long)]
    pub ablate_vsigma: bool,
}

impl SolverArgs {
    pub fn settings(&self) -> SolverSettings {
        let defaults = SolverSettings::default();
        SolverSettings {
            grid_density: self.grid_density.unwrap_or(defaults.grid_density),
            pml_width_wavelengths: self.pml_width.unwrap_or(defaults.pml_width_wavelengths),
            sigma_max: self.pml_sigma_max.unwrap_or(defaults.sigma_max),
            domain_reduced_wavelengths: self.domain.unwrap_or(defaults.domain_reduced_wavelengths),
            ..defaults
        }
    }

    pub fn ablation(&self) -> Ablation {
        Ablation {
            vh: self.ablate_vh,
            vsigma: self.ablate_vsigma,
        }
    }
}

#[derive(Args, Debug)]
pub struct MaterialsArgs {
    #[command(flatten)]
    pub material: MaterialArgs,

    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct DispersionArgs {
    #[arg(value_enum)]
    pub shape: DispersionShape,

    #[command(flatten)]
    pub material: MaterialArgs,

    /// Radius in reduced SPP wavelengths.
    #[arg(long)]
    pub radius: f64,

    /// Azimuthal order for the cylinder axial wavenumber.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,

    /// Metal on the outside (sphere cavity, cylindrical pin hole).
    #[arg(long)]
    pub concave: bool,

    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionShape {
    Sphere,
    Cylinder,
}

#[derive(Args, Debug)]
pub struct GreenArgs {
    #[command(flatten)]
    pub material: MaterialArgs,

    /// Equatorial semi-axis in reduced SPP wavelengths.
    #[arg(long)]
    pub a: f64,

    /// Polar semi-axis in reduced SPP wavelengths; defaults to `a` (sphere).
    #[arg(long)]
    pub c: Option<f64>,

    #[arg(long)]
    pub concave: bool,

    /// Source polar angle (rad).
    #[arg(long)]
    pub theta0: f64,

    /// First path point polar angle (rad).
    #[arg(long)]
    pub theta_start: f64,

    /// Last path point polar angle (rad); defaults to the start.
    #[arg(long)]
    pub theta_end: Option<f64>,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub dphi_start: f64,

    #[arg(long, allow_hyphen_values = true)]
    pub dphi_end: Option<f64>,

    #[arg(long, default_value_t = 50)]
    pub points: usize,

    /// Truncation order; defaults to the library rule at the farthest point.
    #[arg(long)]
    pub m_max: Option<usize>,

    #[command(flatten)]
    pub solver: SolverArgs,

    /// Output CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKindArg {
    /// Parameter is H times the reduced SPP wavelength.
    SphereCurvature,
    /// Parameter is c/a at fixed a.
    SpheroidAspect,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowArg {
    Centered,
    Symmetric,
}

impl From<WindowArg> for WindowShape {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Centered => WindowShape::Centered,
            WindowArg::Symmetric => WindowShape::Symmetric,
        }
    }
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(value_enum)]
    pub kind: ScanKindArg,

    #[command(flatten)]
    pub material: MaterialArgs,

    /// Number of emitters on the ring.
    #[arg(long = "N", default_value_t = 9)]
    pub n: usize,

    /// Nearest-neighbour spacing in reduced SPP wavelengths.
    #[arg(long, default_value_t = 3.0)]
    pub spacing: f64,

    /// Equatorial semi-axis for aspect scans, in reduced SPP wavelengths.
    #[arg(long)]
    pub a: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub scan_min: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub scan_max: Option<f64>,

    #[arg(long, default_value_t = 17)]
    pub steps: usize,

    /// Truncation order in units of N; defaults to the library rule.
    #[arg(long)]
    pub m_max_blocks: Option<usize>,

    #[arg(long, value_enum, default_value_t = WindowArg::Centered)]
    pub window: WindowArg,

    #[command(flatten)]
    pub solver: SolverArgs,

    /// Write the full report as JSON instead of CSV.
    #[arg(long)]
    pub json: bool,

    /// Output path; stdout when absent. A CSV output gets a `.json` sidecar.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
