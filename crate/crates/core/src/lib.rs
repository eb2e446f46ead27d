//! Surface plasmon polaritons on weakly curved metal-dielectric interfaces.
//!
//! The crate evaluates the material scalars of the curved-surface SPP wave
//! equation, solves its Green's function on spheroids by azimuthal mode
//! decomposition, and turns the mode sums into collective decay rates and
//! cooperative shifts of emitter rings.

// Argument guards use `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod geometry;
pub mod greens;
pub mod materials;
pub mod radial;
pub mod radiance;
pub mod scan;
pub mod special;
pub mod tridiag;

pub use error::{Error, Result};
pub use geometry::{Ablation, OperatorCoefficients, Orientation, SpheroidSurface};
pub use greens::{GreensEvaluation, GreensSolver, PairedWindow, SelfSums, WindowShape};
pub use materials::{MaterialPair, MaterialTable, SppScalars};
pub use radial::{ModeProblem, ModeSolution, PmlConfig, RadialGrid, RadialOperator, SolverSettings};
pub use radiance::{CollectiveSpectrum, EmitterRing};
pub use scan::{ScanConfig, ScanKind, ScanReport};
