//! Versioned structured report: a JSON document with the run's inputs, seed,
//! states, weights, query counts, and invariant-check outcomes. Amplitudes
//! are serialized as decimal strings with 12 significant digits; identical
//! inputs serialize to identical bytes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{RegisterLayout, StateVector, UnnormalizedState};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub scenario: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub states: Vec<StateEntry>,
    pub weights: Vec<WeightEntry>,
    pub queries: Vec<QueryEntry>,
    pub checks: Vec<CheckEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateEntry {
    pub name: String,
    pub registers: Vec<(String, usize)>,
    /// Nonzero amplitudes as [basis-label, re, im]; zeros are implicit.
    pub amplitudes: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightEntry {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QueryEntry {
    pub name: String,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// 12 significant digits, scientific notation.
pub fn format_amplitude(x: f64) -> String {
    format!("{x:.11e}")
}

impl StateEntry {
    pub fn from_state(name: &str, state: &StateVector) -> Self {
        let layout = state.layout();
        let amplitudes = state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, a)| {
                (layout.basis_label(i), format_amplitude(a.re), format_amplitude(a.im))
            })
            .collect();
        StateEntry {
            name: name.to_string(),
            registers: layout.registers().map(|(n, w)| (n.to_string(), w)).collect(),
            amplitudes,
        }
    }

    /// Reconstruct the state; inverse of `from_state` up to the 12-digit
    /// amplitude rounding.
    pub fn to_state(&self) -> Result<StateVector> {
        let regs: Vec<(&str, usize)> =
            self.registers.iter().map(|(n, w)| (n.as_str(), *w)).collect();
        let layout = RegisterLayout::new(&regs)?;
        let mut amps = vec![Complex64::ZERO; layout.dimension()];
        for (label, re, im) in &self.amplitudes {
            let index = layout.parse_label(label)?;
            let re: f64 = re.parse().map_err(|_| Error::InvalidBitString(re.clone()))?;
            let im: f64 = im.parse().map_err(|_| Error::InvalidBitString(im.clone()))?;
            amps[index] = Complex64::new(re, im);
        }
        UnnormalizedState::new(layout, amps)?.normalize()
    }
}

impl Report {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

/// Convenience for building check entries from a measured deviation.
pub fn deviation_check(name: &str, deviation: f64, tolerance: f64) -> CheckEntry {
    CheckEntry {
        name: name.to_string(),
        passed: deviation < tolerance,
        detail: format!("deviation {deviation:.3e}, tolerance {tolerance:.1e}"),
    }
}
