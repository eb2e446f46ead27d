use thiserror::Error;

/// Errors raised by the physics and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("near-singular pivot {pivot:.3e} at row {row} (row norm {row_norm:.3e}); perturb the loss or the grid")]
    SingularPivot {
        row: usize,
        pivot: f64,
        row_norm: f64,
    },

    #[error("unphysical solve: Im(S) = {0:.6e} <= 0, check the absorbing layer configuration")]
    Unphysical(f64),

    #[error("material table line {line}: {message}")]
    TableParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
