//! Weight reduction and distance balancing for CSS codes, single-ancilla
//! syndrome-extraction schedules, and exact circuit-level fault distances.
//!
//! The crate is organised bottom-up:
//!
//! - [`catalog`]: a few named codes
//! - [`f2la`]: bit-packed linear algebra over F2
//! - [`codes`]: classical and CSS codes, chain complexes, exact distances
//! - [`reduce`]: copying, gauging, thickening, height selection, balancing
//! - [`cone`]: coning of high-weight Z checks and the soundness factor
//! - [`schedule`]: measurement schedules and the derived-schedule constructors
//! - [`faultdist`]: elementary faults and effective-distance search
//! - [`hgp`]: tensor products of complexes and hypergraph products

pub mod catalog;
pub mod codes;
pub mod cone;
pub mod error;
pub mod f2la;
pub mod faultdist;
pub mod hgp;
pub mod reduce;
pub mod schedule;
mod search;

pub use codes::{
    classical_distance, complex_to_css, css_distance, css_from_matrices, css_to_complex, hamming_7_4, logical_basis,
    repetition_code, Basis, ChainComplex, ClassicalCode, CodeParams, CssCode, Distance,
};
pub use error::{Error, Result};
pub use f2la::{quotient_dim, BinMatrix, BitVec};
pub use faultdist::{effective_distance, enumerate_faults, FaultGenerator, FaultSearchResult, Origin};
pub use schedule::{baseline_schedule, Schedule, StabMeasurement};
