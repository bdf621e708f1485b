//! Simulator for reversible quantum processes between two one-to-one
//! correlated measurement outcomes, time-symmetrized into causal-loop
//! instances.
//!
//! The library is organized around a dense state-vector core ([`qcore`]) and
//! four domain modules:
//!
//! - [`grover`]: the drawer-search problem, its exact problem→solution
//!   transform and the physical search circuit, with query accounting.
//! - [`timesym`]: halvings of the problem-setting information, causal-loop
//!   instances built by final partial measurement plus backward propagation,
//!   reconstruction of the ordinary description, and reduced-complexity
//!   reports.
//! - [`nonlocal`]: the two-causal-loop account of Bell correlations.
//! - [`anthropic`]: the life-conditioned toy universe and the
//!   quadratic-speedup timescale calculator.
//!
//! [`scenario`], [`render`], and [`report`] back the `qloops` CLI.

pub mod anthropic;
pub mod bits;
pub mod error;
pub mod grover;
pub mod nonlocal;
pub mod par;
pub mod qcore;
pub mod render;
pub mod report;
pub mod scenario;
pub mod timesym;

pub use bits::BitString;
pub use error::{Error, Result};
