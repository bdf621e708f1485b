//! Two-causal-loop account of Bell correlations: each local measurement
//! outcome is back-propagated to the pre-separation time, and the correlation
//! with the other party's later measurement is checked forward.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par;
use crate::qcore::{RegisterLayout, StateVector, UnnormalizedState};

type Mat2 = [[Complex64; 2]; 2];

const IDENTITY2: Mat2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

const HADAMARD2: Mat2 = [
    [Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(FRAC_1_SQRT_2, 0.0)],
    [Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(-FRAC_1_SQRT_2, 0.0)],
];

/// Measurement basis shared by both parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MeasurementBasis {
    Computational,
    Hadamard,
}

impl MeasurementBasis {
    /// Columns are the basis states expressed in the computational basis.
    fn matrix(self) -> Mat2 {
        match self {
            MeasurementBasis::Computational => IDENTITY2,
            MeasurementBasis::Hadamard => HADAMARD2,
        }
    }
}

pub fn pair_layout() -> RegisterLayout {
    RegisterLayout::new(&[("P1", 1), ("P2", 1)]).expect("static layout is valid")
}

/// The maximally entangled pair (|00⟩+|11⟩)/√2.
pub fn phi_plus() -> StateVector {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(pair_layout(), vec![r, Complex64::ZERO, Complex64::ZERO, r])
        .expect("normalized by construction")
}

/// A Bell experiment: maximally entangled pair at t₀, local separation
/// unitaries between t₀ and the measurements, one shared measurement basis.
#[derive(Clone, Debug)]
pub struct BellScenario {
    initial: StateVector,
    locals: [Mat2; 2],
    basis: MeasurementBasis,
}

/// One causal loop: a party's outcome, the joint state it back-propagates to
/// at t₀, and the forward probability that the other party matches it.
#[derive(Clone, Debug)]
pub struct CausalLoopTrace {
    pub party: usize,
    pub outcome: u8,
    pub state_at_t0: StateVector,
    pub forward_check: f64,
}

/// One run: both sampled outcomes and one loop trace per measurement.
#[derive(Clone, Debug)]
pub struct BellRun {
    pub outcome1: u8,
    pub outcome2: u8,
    pub trace1: CausalLoopTrace,
    pub trace2: CausalLoopTrace,
}

impl BellScenario {
    /// `separation` is an optional 4x4 row-major joint unitary; it must be a
    /// tensor product of local unitaries, anything else is rejected.
    pub fn new(
        initial: StateVector,
        separation: Option<&[Complex64]>,
        basis: MeasurementBasis,
    ) -> Result<Self> {
        if initial.dimension() != 4 {
            return Err(Error::InvalidConfig("Bell scenario needs a 2-qubit state".into()));
        }
        for qubit in 0..2 {
            let p0 = marginal_probability(initial.amplitudes(), qubit, 0);
            if (p0 - 0.5).abs() > 1e-10 {
                return Err(Error::NotMaximallyEntangled);
            }
        }
        let locals = match separation {
            None => [IDENTITY2, IDENTITY2],
            Some(m) => factor_local(m)?,
        };
        Ok(BellScenario { initial, locals, basis })
    }

    pub fn computational_pair() -> Self {
        BellScenario::new(phi_plus(), None, MeasurementBasis::Computational)
            .expect("Φ+ is maximally entangled")
    }

    pub fn hadamard_pair() -> Self {
        BellScenario::new(phi_plus(), None, MeasurementBasis::Hadamard)
            .expect("Φ+ is maximally entangled")
    }

    /// Joint state just before the measurements.
    fn forward_state(&self) -> Vec<Complex64> {
        let mut amps = self.initial.amplitudes().to_vec();
        apply_local(&mut amps, 0, &self.locals[0]);
        apply_local(&mut amps, 1, &self.locals[1]);
        amps
    }

    fn backward(&self, amps: &mut [Complex64]) {
        apply_local_adjoint(amps, 1, &self.locals[1]);
        apply_local_adjoint(amps, 0, &self.locals[0]);
    }
}

/// Apply a 2x2 matrix to one qubit of a 2-qubit amplitude vector.
/// Qubit 0 is the first register (most significant bit).
fn apply_local(amps: &mut [Complex64], qubit: usize, m: &Mat2) {
    let mask = 1usize << (1 - qubit);
    for i in 0..4 {
        if i & mask == 0 {
            let j = i | mask;
            let (a, b) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[j] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn adjoint(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

fn apply_local_adjoint(amps: &mut [Complex64], qubit: usize, m: &Mat2) {
    apply_local(amps, qubit, &adjoint(m));
}

/// Probability that `qubit` reads `outcome` in the computational basis.
fn marginal_probability(amps: &[Complex64], qubit: usize, outcome: u8) -> f64 {
    let mask = 1usize << (1 - qubit);
    amps.iter()
        .enumerate()
        .filter(|(i, _)| u8::from(i & mask != 0) == outcome)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Probability of `outcome` for `qubit` measured in `basis`.
fn basis_probability(amps: &[Complex64], qubit: usize, basis: MeasurementBasis, outcome: u8) -> f64 {
    let mut rotated = amps.to_vec();
    apply_local_adjoint(&mut rotated, qubit, &basis.matrix());
    marginal_probability(&rotated, qubit, outcome)
}

/// Project `qubit` on `outcome` in `basis`, leaving the other qubit untouched.
/// Returns the raw projected amplitudes (not renormalized).
fn basis_project(amps: &[Complex64], qubit: usize, basis: MeasurementBasis, outcome: u8) -> Vec<Complex64> {
    let mut rotated = amps.to_vec();
    apply_local_adjoint(&mut rotated, qubit, &basis.matrix());
    let mask = 1usize << (1 - qubit);
    for (i, a) in rotated.iter_mut().enumerate() {
        if u8::from(i & mask != 0) != outcome {
            *a = Complex64::ZERO;
        }
    }
    apply_local(&mut rotated, qubit, &basis.matrix());
    rotated
}

/// Extract local 2x2 factors from a 4x4 tensor-product unitary, or fail.
fn factor_local(m: &[Complex64]) -> Result<[Mat2; 2]> {
    if m.len() != 16 {
        return Err(Error::BadAmplitudeCount { expected: 16, got: m.len() });
    }
    // realign so M = A⊗B becomes the rank-1 outer product R[a_idx][b_idx]
    let mut r = [[Complex64::ZERO; 4]; 4];
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    r[i1 * 2 + j1][i2 * 2 + j2] = m[(i1 * 2 + i2) * 4 + (j1 * 2 + j2)];
                }
            }
        }
    }
    let (mut pi, mut pj, mut best) = (0, 0, 0.0f64);
    for (i, row) in r.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.norm() > best {
                best = v.norm();
                pi = i;
                pj = j;
            }
        }
    }
    if best < 1e-12 {
        return Err(Error::NonLocalUnitary);
    }
    let a_vec: Vec<Complex64> = (0..4).map(|i| r[i][pj]).collect();
    let b_vec: Vec<Complex64> = (0..4).map(|j| r[pi][j] / r[pi][pj]).collect();
    for i in 0..4 {
        for j in 0..4 {
            if (r[i][j] - a_vec[i] * b_vec[j]).norm() > 1e-10 {
                return Err(Error::NonLocalUnitary);
            }
        }
    }
    // rescale so each factor is unitary on its own
    let col_norm = (a_vec[0].norm_sqr() + a_vec[2].norm_sqr()).sqrt();
    if col_norm < 1e-12 {
        return Err(Error::NonLocalUnitary);
    }
    let a = [
        [a_vec[0] / col_norm, a_vec[1] / col_norm],
        [a_vec[2] / col_norm, a_vec[3] / col_norm],
    ];
    let b = [
        [b_vec[0] * col_norm, b_vec[1] * col_norm],
        [b_vec[2] * col_norm, b_vec[3] * col_norm],
    ];
    for f in [&a, &b] {
        let adj = adjoint(f);
        for (i, adj_row) in adj.iter().enumerate() {
            for j in 0..2 {
                let acc: Complex64 = adj_row.iter().zip(f).map(|(a, f_row)| a * f_row[j]).sum();
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                if (acc - expect).norm() > 1e-10 {
                    return Err(Error::NonLocalUnitary);
                }
            }
        }
    }
    Ok([a, b])
}

fn build_trace(scenario: &BellScenario, party: usize, outcome: u8) -> Result<CausalLoopTrace> {
    let forward = scenario.forward_state();
    let projected = basis_project(&forward, party, scenario.basis, outcome);
    let mut at_t0 = projected.clone();
    scenario.backward(&mut at_t0);
    let state_at_t0 = UnnormalizedState::new(pair_layout(), at_t0)?.normalize()?;
    // forward again: the loop state must make the other party match
    let mut replay = state_at_t0.amplitudes().to_vec();
    apply_local(&mut replay, 0, &scenario.locals[0]);
    apply_local(&mut replay, 1, &scenario.locals[1]);
    let other = 1 - party;
    let forward_check = basis_probability(&replay, other, scenario.basis, outcome);
    Ok(CausalLoopTrace { party: party + 1, outcome, state_at_t0, forward_check })
}

/// One seeded Bell run: sample party 1 by the Born rule, condition party 2,
/// and build the two causal-loop traces.
pub fn run_bell(scenario: &BellScenario, seed: u64) -> Result<BellRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let forward = scenario.forward_state();
    let p1_zero = basis_probability(&forward, 0, scenario.basis, 0);
    let outcome1: u8 = u8::from(rng.gen::<f64>() >= p1_zero);
    let projected = basis_project(&forward, 0, scenario.basis, outcome1);
    let norm_sqr: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
    let p2_zero = basis_probability(&projected, 1, scenario.basis, 0) / norm_sqr;
    let outcome2: u8 = u8::from(rng.gen::<f64>() >= p2_zero);
    Ok(BellRun {
        outcome1,
        outcome2,
        trace1: build_trace(scenario, 0, outcome1)?,
        trace2: build_trace(scenario, 1, outcome2)?,
    })
}

/// Outcome frequencies over seeded trials, with analytic marginals alongside.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MarginalStats {
    /// Analytic per-party outcome probabilities, computed by projection.
    pub analytic: [[f64; 2]; 2],
    /// Sampled per-party outcome frequencies.
    pub frequency: [[f64; 2]; 2],
    /// Fraction of trials where the two outcomes were equal.
    pub equal_fraction: f64,
    pub trials: usize,
    /// Worst forward_check deviation from 1 seen across all traces.
    pub max_forward_check_deviation: f64,
}

pub fn marginal_statistics(scenario: &BellScenario, n_trials: usize, seed: u64) -> Result<MarginalStats> {
    if n_trials == 0 {
        return Err(Error::NonPositiveInput("n_trials"));
    }
    let forward = scenario.forward_state();
    let mut analytic = [[0.0; 2]; 2];
    for (party, row) in analytic.iter_mut().enumerate() {
        for outcome in 0..2u8 {
            row[usize::from(outcome)] =
                basis_probability(&forward, party, scenario.basis, outcome);
        }
    }
    let runs = par::map_indexed(n_trials, |i| run_bell(scenario, par::derive_seed(seed, i as u64)));
    let mut counts = [[0u64; 2]; 2];
    let mut equal = 0u64;
    let mut max_dev = 0.0f64;
    for run in runs {
        let run = run?;
        counts[0][usize::from(run.outcome1)] += 1;
        counts[1][usize::from(run.outcome2)] += 1;
        if run.outcome1 == run.outcome2 {
            equal += 1;
        }
        max_dev = max_dev
            .max((run.trace1.forward_check - 1.0).abs())
            .max((run.trace2.forward_check - 1.0).abs());
    }
    let n = n_trials as f64;
    Ok(MarginalStats {
        analytic,
        frequency: [
            [counts[0][0] as f64 / n, counts[0][1] as f64 / n],
            [counts[1][0] as f64 / n, counts[1][1] as f64 / n],
        ],
        equal_fraction: equal as f64 / n,
        trials: n_trials,
        max_forward_check_deviation: max_dev,
    })
}

/// No-signalling at the implemented level: party 1's analytic marginal with
/// and without party 2's projection applied. Returns the largest difference.
pub fn no_signalling_gap(scenario: &BellScenario) -> f64 {
    let forward = scenario.forward_state();
    let mut gap = 0.0f64;
    for outcome1 in 0..2u8 {
        let direct = basis_probability(&forward, 0, scenario.basis, outcome1);
        let mut via_party2 = 0.0;
        for outcome2 in 0..2u8 {
            let projected = basis_project(&forward, 1, scenario.basis, outcome2);
            via_party2 += basis_probability(&projected, 0, scenario.basis, outcome1);
        }
        gap = gap.max((direct - via_party2).abs());
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::states_equal;

    #[test]
    fn computational_loop_outcome_zero() {
        let scenario = BellScenario::computational_pair();
        let trace = build_trace(&scenario, 0, 0).unwrap();
        let zero = StateVector::basis_state(pair_layout(), 0b00).unwrap();
        assert!(states_equal(&trace.state_at_t0, &zero, 1e-10));
        assert!((trace.forward_check - 1.0).abs() < 1e-10);
    }

    #[test]
    fn computational_loop_outcome_one() {
        let scenario = BellScenario::computational_pair();
        let trace = build_trace(&scenario, 0, 1).unwrap();
        let ones = StateVector::basis_state(pair_layout(), 0b11).unwrap();
        assert!(states_equal(&trace.state_at_t0, &ones, 1e-10));
        assert!((trace.forward_check - 1.0).abs() < 1e-10);
    }

    #[test]
    fn outcomes_correlated_in_computational_basis() {
        let scenario = BellScenario::computational_pair();
        for seed in 0..50 {
            let run = run_bell(&scenario, seed).unwrap();
            assert_eq!(run.outcome1, run.outcome2);
            assert!((run.trace1.forward_check - 1.0).abs() < 1e-10);
            assert!((run.trace2.forward_check - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn hadamard_basis_outcomes_equal() {
        // H⊗H leaves Φ+ invariant, so the shared Hadamard basis is also
        // perfectly correlated.
        let scenario = BellScenario::hadamard_pair();
        for seed in 0..50 {
            let run = run_bell(&scenario, seed).unwrap();
            assert_eq!(run.outcome1, run.outcome2);
            assert!((run.trace1.forward_check - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn loop_predictions_agree_with_sampled_pair() {
        let scenario = BellScenario::computational_pair();
        let run = run_bell(&scenario, 7).unwrap();
        // trace built from either party predicts the other's outcome
        assert_eq!(run.trace1.outcome, run.outcome2);
        assert_eq!(run.trace2.outcome, run.outcome1);
    }

    #[test]
    fn analytic_marginals_are_half() {
        let stats = marginal_statistics(&BellScenario::computational_pair(), 1, 0).unwrap();
        for party in 0..2 {
            for outcome in 0..2 {
                assert!((stats.analytic[party][outcome] - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampled_marginals_converge() {
        let stats = marginal_statistics(&BellScenario::computational_pair(), 10_000, 123).unwrap();
        for party in 0..2 {
            assert!((stats.frequency[party][0] - 0.5).abs() < 0.02);
        }
        assert_eq!(stats.equal_fraction, 1.0);
        assert!(stats.max_forward_check_deviation < 1e-10);
    }

    #[test]
    fn no_signalling_holds() {
        assert!(no_signalling_gap(&BellScenario::computational_pair()) < 1e-10);
        assert!(no_signalling_gap(&BellScenario::hadamard_pair()) < 1e-10);
    }

    #[test]
    fn product_separation_accepted() {
        // H ⊗ I
        let mut m = vec![Complex64::ZERO; 16];
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        if i2 == j2 {
                            m[(i1 * 2 + i2) * 4 + (j1 * 2 + j2)] = HADAMARD2[i1][j1];
                        }
                    }
                }
            }
        }
        let scenario =
            BellScenario::new(phi_plus(), Some(&m), MeasurementBasis::Computational).unwrap();
        // H on party 1 turns Φ+ into a state still with uniform marginals
        let stats = marginal_statistics(&scenario, 1, 0).unwrap();
        assert!((stats.analytic[0][0] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn cnot_separation_rejected() {
        let mut m = vec![Complex64::ZERO; 16];
        // CNOT: |00⟩→|00⟩, |01⟩→|01⟩, |10⟩→|11⟩, |11⟩→|10⟩
        for (row, column) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            m[row * 4 + column] = Complex64::ONE;
        }
        assert!(matches!(
            BellScenario::new(phi_plus(), Some(&m), MeasurementBasis::Computational),
            Err(Error::NonLocalUnitary)
        ));
    }

    #[test]
    fn non_entangled_initial_rejected() {
        let product = StateVector::basis_state(pair_layout(), 0).unwrap();
        assert!(matches!(
            BellScenario::new(product, None, MeasurementBasis::Computational),
            Err(Error::NotMaximallyEntangled)
        ));
    }
}
