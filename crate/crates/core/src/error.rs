use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    Shape { op: &'static str, left: (usize, usize), right: (usize, usize) },

    #[error("vector length {found} does not match {expected} columns")]
    Length { expected: usize, found: usize },

    #[error("row space not contained in kernel: row {ker_row} of the kernel side overlaps row {rs_row} oddly")]
    NotContained { ker_row: usize, rs_row: usize },

    #[error("X row {row_x} anticommutes with Z row {row_z}")]
    Anticommuting { row_x: usize, row_z: usize },

    #[error("chain complex is not exact-composable at degree {degree}")]
    NotAComplex { degree: usize },

    #[error("level {level} out of range 1..={max}")]
    Level { level: usize, max: usize },

    #[error("invalid parameter: {0}")]
    Invalid(String),

    #[error("map does not match code: {0}")]
    MapMismatch(String),

    #[error("schedule invalid: {0}")]
    Schedule(String),

    #[error("X row {x_row} meets Z row {z_row} in an odd number of qubits")]
    OddIncidence { x_row: usize, z_row: usize },

    #[error("search cap exceeded: {0}")]
    Cap(String),
}
