use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;

/// Counts oracle evaluations. A structured oracle gate counts as exactly one
/// query per application regardless of superposition width.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryCounter {
    count: u64,
}

impl QueryCounter {
    pub fn new() -> Self {
        QueryCounter::default()
    }

    pub fn record(&mut self) {
        self.count += 1;
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Structured gates. Bit indices are global MSB-first positions into the
/// layout the circuit was built for. Every variant is self-inverse.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Hadamard on one bit.
    Hadamard { bit: usize },
    /// Controlled fan-out copy: flips `target` iff `control` is 1.
    Cnot { control: usize, target: usize },
    /// Phase oracle: negates amplitudes where the `left` bits equal the
    /// `right` bits. One oracle query per application.
    EqualityOracle { left: Vec<usize>, right: Vec<usize> },
    /// Inversion about the mean over the subspace spanned by `bits`.
    Diffusion { bits: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Identity,
    Circuit(Vec<Gate>),
    Matrix(Vec<Complex64>),
}

/// A unitary transformation with an exact inverse: structured circuits invert
/// structurally, explicit matrices by conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOp {
    dim: usize,
    kind: Kind,
}

const UNITARITY_TOL: f64 = 1e-10;

impl UnitaryOp {
    pub fn identity(dim: usize) -> Self {
        UnitaryOp { dim, kind: Kind::Identity }
    }

    pub fn circuit(total_bits: usize, gates: Vec<Gate>) -> Self {
        UnitaryOp { dim: 1 << total_bits, kind: Kind::Circuit(gates) }
    }

    /// Explicit row-major matrix; checked for unitarity to 1e-10 elementwise.
    pub fn matrix(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::BadAmplitudeCount { expected: dim * dim, got: entries.len() });
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                // (U†U)[i][j] = Σ_k conj(U[k][i]) U[k][j]
                let mut acc = Complex64::ZERO;
                for k in 0..dim {
                    acc += entries[k * dim + i].conj() * entries[k * dim + j];
                }
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((acc - expect).norm());
            }
        }
        if worst > UNITARITY_TOL {
            return Err(Error::NotUnitary(worst));
        }
        Ok(UnitaryOp { dim, kind: Kind::Matrix(entries) })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Number of oracle gates applied in one forward application.
    pub fn oracle_gate_count(&self) -> u64 {
        match &self.kind {
            Kind::Circuit(gates) => gates
                .iter()
                .filter(|g| matches!(g, Gate::EqualityOracle { .. }))
                .count() as u64,
            _ => 0,
        }
    }

    pub(crate) fn transform(
        &self,
        amps: &mut Vec<Complex64>,
        inverse: bool,
        mut counter: Option<&mut QueryCounter>,
    ) {
        debug_assert_eq!(amps.len(), self.dim);
        match &self.kind {
            Kind::Identity => {}
            Kind::Circuit(gates) => {
                let n = self.dim.trailing_zeros() as usize;
                let order: Vec<&Gate> = if inverse {
                    gates.iter().rev().collect()
                } else {
                    gates.iter().collect()
                };
                for gate in order {
                    // all structured gates are self-inverse
                    apply_gate(amps, n, gate);
                    if let (Gate::EqualityOracle { .. }, Some(c)) = (gate, counter.as_deref_mut()) {
                        c.record();
                    }
                }
            }
            Kind::Matrix(m) => {
                let dim = self.dim;
                let out = par::map_indexed(dim, |i| {
                    let mut acc = Complex64::ZERO;
                    for (j, x) in amps.iter().enumerate() {
                        let entry = if inverse { m[j * dim + i].conj() } else { m[i * dim + j] };
                        acc += entry * x;
                    }
                    acc
                });
                *amps = out;
            }
        }
    }
}

fn apply_gate(amps: &mut [Complex64], n: usize, gate: &Gate) {
    match gate {
        Gate::Hadamard { bit } => {
            let mask = 1usize << (n - 1 - bit);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let j = i | mask;
                    let (a, b) = (amps[i], amps[j]);
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[j] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let cmask = 1usize << (n - 1 - control);
            let tmask = 1usize << (n - 1 - target);
            for i in 0..amps.len() {
                if i & cmask != 0 && i & tmask == 0 {
                    amps.swap(i, i | tmask);
                }
            }
        }
        Gate::EqualityOracle { left, right } => {
            let lshifts: Vec<usize> = left.iter().map(|&b| n - 1 - b).collect();
            let rshifts: Vec<usize> = right.iter().map(|&b| n - 1 - b).collect();
            for (i, amp) in amps.iter_mut().enumerate() {
                let lv = lshifts.iter().fold(0usize, |acc, &s| acc << 1 | (i >> s & 1));
                let rv = rshifts.iter().fold(0usize, |acc, &s| acc << 1 | (i >> s & 1));
                if lv == rv {
                    *amp = -*amp;
                }
            }
        }
        Gate::Diffusion { bits } => {
            let m = bits.len();
            let masks: Vec<usize> = bits.iter().map(|&b| 1usize << (n - 1 - b)).collect();
            let subspace = masks.iter().fold(0usize, |acc, &m| acc | m);
            // offsets of the 2^m subspace members relative to a base index
            let offsets: Vec<usize> = (0..1usize << m)
                .map(|sub| {
                    masks
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| sub >> (m - 1 - j) & 1 == 1)
                        .fold(0usize, |acc, (_, &mask)| acc | mask)
                })
                .collect();
            let scale = 2.0 / (1usize << m) as f64;
            for base in 0..amps.len() {
                if base & subspace != 0 {
                    continue;
                }
                let mut sum = Complex64::ZERO;
                for &off in &offsets {
                    sum += amps[base | off];
                }
                let mean2 = sum * scale;
                for &off in &offsets {
                    amps[base | off] = mean2 - amps[base | off];
                }
            }
        }
    }
}
