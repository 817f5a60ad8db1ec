//! Command-line driver: `mtxf2` matrix files, the transform pipeline and
//! the JSON report.

pub mod app;
pub mod error;
pub mod mtxf2;
pub mod pipeline;
pub mod report;

pub use error::CliError;
pub use mtxf2::{parse_matrix, parse_matrix_file, write_matrix};
pub use pipeline::{run_pipeline, Config, Outcome};
pub use report::Report;
