//! Physics and synthesis core for microstrip T-junction power dividers.
//!
//! The crate is organised bottom-up:
//!
//! * [`constants`], [`substrate`], [`frequency`]: physical constants, substrate
//!   stack-up description, and uniform frequency grids.
//! * [`microstrip`]: quasi-static single-line model (effective permittivity,
//!   characteristic impedance, attenuation) plus width synthesis.
//! * [`network`]: two-port transmission matrices and the three-port junction
//!   assembly that produces scattering parameters over a grid.
//! * [`divider`]: equal-split divider synthesis, the published reference
//!   design, and board-level layout.
//! * [`metrics`]: performance reports (match, isolation, insertion loss,
//!   fractional bandwidth) and the literature comparison row.
//! * [`optimize`]: derivative-free tuning of divider dimensions.
//!
//! All quantities are SI (metres, hertz, ohms, siemens per metre) unless a
//! name says otherwise (`_db`, `_deg`, `_ghz`).

pub mod constants;
pub mod divider;
pub mod frequency;
pub mod metrics;
pub mod microstrip;
pub mod network;
pub mod optimize;
pub mod substrate;

pub use divider::{DesignWarning, DividerDesign, DividerError, DividerSpec, Provenance};
pub use frequency::{FrequencyError, FrequencyGrid};
pub use metrics::{ComparisonRow, MetricsError, MetricsReport};
pub use microstrip::{LineElectricals, MicrostripError, MicrostripLine};
pub use network::{NetworkError, SParamBlock, TwoPortAbcd};
pub use optimize::{
    ObjectiveKind, OptimizationProblem, OptimizeError, OptimizeResult, TraceRecord, Variable,
};
pub use substrate::{Substrate, SubstrateError};
