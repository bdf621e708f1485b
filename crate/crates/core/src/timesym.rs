//! Time-symmetrization engine: enumerate halvings of the problem-setting
//! information, build each causal-loop instance by final partial measurement
//! plus backward propagation, verify that the instances reconstruct the
//! ordinary description, and account for the reduced problem complexity.

use itertools::Itertools;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::grover::{classical_worst_case_queries, grover_iterations};
use crate::par;
use crate::qcore::{
    apply, apply_inverse_unnormalized, problem_layout, project, uniform_superposition,
    PartialObservable, StateVector, UnitaryOp, UnnormalizedState,
};

/// Ordered balanced bipartition of the problem-setting bit positions:
/// `initial` is selected by the initial measurement, `final_half` (via the
/// correlated A bits) by the final measurement.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Halving {
    pub initial: Vec<usize>,
    pub final_half: Vec<usize>,
}

impl Halving {
    pub fn new(mut initial: Vec<usize>, mut final_half: Vec<usize>) -> Result<Self> {
        initial.sort_unstable();
        final_half.sort_unstable();
        let k = initial.len() + final_half.len();
        if initial.len() != final_half.len() {
            return Err(Error::OddBits(k));
        }
        let mut all: Vec<usize> = initial.iter().chain(&final_half).copied().collect();
        all.sort_unstable();
        if all != (0..k).collect::<Vec<_>>() {
            return Err(Error::InvalidConfig(format!(
                "halving {initial:?} / {final_half:?} is not a bipartition of 0..{k}"
            )));
        }
        Ok(Halving { initial, final_half })
    }

    pub fn bits(&self) -> usize {
        self.initial.len() + self.final_half.len()
    }
}

/// One causal-loop instance: the final partial outcome, its weight, and the
/// back-propagated reduced input state with its candidate set.
#[derive(Clone, Debug)]
pub struct TimeSymInstance {
    pub halving: Halving,
    pub final_value: BitString,
    pub weight: f64,
    pub reduced_input: StateVector,
    pub candidate_set: Vec<BitString>,
}

/// All C(k, k/2) ordered assignments of positions to the two measurements,
/// lexicographic in the initial half. Odd k is rejected.
pub fn enumerate_halvings(k: usize) -> Result<Vec<Halving>> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::OddBits(k));
    }
    Ok((0..k)
        .combinations(k / 2)
        .map(|initial| {
            let final_half = (0..k).filter(|p| !initial.contains(p)).collect();
            Halving { initial, final_half }
        })
        .collect())
}

/// The uniform problem-setting superposition ψ₀ tensor |0…0⟩_A.
pub fn initial_state(k: usize) -> Result<StateVector> {
    let layout = problem_layout(k)?;
    uniform_superposition(&layout, "B")
}

fn final_observable(halving: &Halving) -> Result<PartialObservable> {
    PartialObservable::new("A", halving.final_half.clone())
}

/// The raw (unnormalized) back-propagated component for one final value:
/// project U|ψ₀⟩ on the A bits, then apply U† backward.
fn back_propagated(
    u: &UnitaryOp,
    halving: &Halving,
    final_value: &BitString,
) -> Result<(f64, UnnormalizedState)> {
    let psi0 = initial_state(halving.bits())?;
    let forward = apply(&psi0, u)?;
    let (weight, projected) = project(&forward, &final_observable(halving)?, final_value)?;
    let back = apply_inverse_unnormalized(&projected, u)?;
    Ok((weight, back))
}

pub fn build_instance(
    u: &UnitaryOp,
    halving: &Halving,
    final_value: &BitString,
) -> Result<TimeSymInstance> {
    let k = halving.bits();
    if final_value.width() != k / 2 {
        return Err(Error::WidthMismatch { expected: k / 2, got: final_value.width() });
    }
    let (weight, back) = back_propagated(u, halving, final_value)?;
    if weight <= 0.0 {
        return Err(Error::ZeroWeightOutcome);
    }
    let candidate_set = BitString::all(k)
        .into_iter()
        .filter(|b| b.select(&halving.final_half) == *final_value)
        .collect();
    Ok(TimeSymInstance {
        halving: halving.clone(),
        final_value: final_value.clone(),
        weight,
        reduced_input: back.normalize()?,
        candidate_set,
    })
}

/// All 2^(k/2) instances of a halving, built in parallel, in final-value order.
pub fn enumerate_instances(u: &UnitaryOp, halving: &Halving) -> Result<Vec<TimeSymInstance>> {
    let half = halving.bits() / 2;
    par::map_indexed(1 << half, |v| {
        build_instance(u, halving, &BitString::from_index(v, half))
    })
    .into_iter()
    .collect()
}

/// The instance read in the usual left-to-right way: (reduced input, U·input).
pub fn read_forward(instance: &TimeSymInstance, u: &UnitaryOp) -> Result<(StateVector, StateVector)> {
    let output = apply(&instance.reduced_input, u)?;
    Ok((instance.reduced_input.clone(), output))
}

/// Max elementwise deviation between ψ₀ and the sum of the unnormalized
/// back-propagated components over all final values.
pub fn reconstruction_deviation(u: &UnitaryOp, halving: &Halving) -> Result<f64> {
    let k = halving.bits();
    let half = k / 2;
    let parts = par::map_indexed(1 << half, |v| {
        back_propagated(u, halving, &BitString::from_index(v, half)).map(|(_, s)| s)
    });
    let mut sum = UnnormalizedState::zero(problem_layout(k)?);
    for part in parts {
        sum.add_assign(&part?);
    }
    let psi0 = initial_state(k)?;
    Ok(sum.max_deviation(psi0.amplitudes()))
}

/// True iff the superposition of all instances restores the ordinary
/// description exactly (within 1e-10).
pub fn verify_reconstruction(u: &UnitaryOp, halving: &Halving) -> Result<bool> {
    Ok(reconstruction_deviation(u, halving)? < 1e-10)
}

/// What an external observer sees: the instance mixture as a distribution over
/// full k-bit outcomes (weight × uniform over the candidate set).
pub fn external_observer_statistics(u: &UnitaryOp, halving: &Halving) -> Result<Vec<f64>> {
    let k = halving.bits();
    let mut dist = vec![0.0; 1 << k];
    for instance in enumerate_instances(u, halving)? {
        let share = instance.weight / instance.candidate_set.len() as f64;
        for b in &instance.candidate_set {
            dist[b.index()] += share;
        }
    }
    Ok(dist)
}

/// Query accounting for the original and the reduced problem.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ComplexityReport {
    pub k: usize,
    pub n_drawers: u64,
    pub reduced_size: u64,
    pub original_classical_queries: u64,
    pub reduced_classical_queries: u64,
    pub grover_queries: u64,
    /// Reduced-classical and Grover counts agree at the Θ(√N) order level
    /// (within a factor of 2), not necessarily exactly.
    pub order_level_agreement: bool,
}

pub fn reduced_complexity_report(k: usize) -> Result<ComplexityReport> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::OddBits(k));
    }
    let n_drawers = 1u64 << k;
    let reduced_size = 1u64 << (k / 2);
    let reduced = classical_worst_case_queries(reduced_size)?;
    let grover = grover_iterations(k);
    let ratio = reduced.max(grover) as f64 / reduced.min(grover).max(1) as f64;
    Ok(ComplexityReport {
        k,
        n_drawers,
        reduced_size,
        original_classical_queries: classical_worst_case_queries(n_drawers)?,
        reduced_classical_queries: reduced,
        grover_queries: grover,
        order_level_agreement: ratio <= 2.0,
    })
}
