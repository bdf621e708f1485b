//! Dense state-vector core: registers, unitaries, full and partial projective
//! measurement, forward and backward evolution.
//!
//! Everything here is an immutable value; states and unitaries can be shared
//! and sent between threads freely.

pub mod layout;
pub mod measure;
pub mod ops;
pub mod state;
pub mod unitary;

pub use layout::{problem_layout, RegisterLayout, MAX_BITS};
pub use measure::{measure, measure_with_rng, project, MeasurementRecord, PartialObservable};
pub use ops::{apply, apply_counting, apply_inverse, apply_inverse_unnormalized, uniform_superposition};
pub use state::{states_equal, StateVector, UnnormalizedState, NORM_TOL};
pub use unitary::{Gate, QueryCounter, UnitaryOp};
