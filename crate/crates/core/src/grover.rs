//! The drawer-search problem and its two unitary realizations.
//!
//! `ideal_transform` is the exact problem-setting → solution map used by the
//! table pipelines: it copies register B into register A and is exact at every
//! width. `grover_circuit` is the physical search circuit used for query
//! accounting; it is exact only at N = 4.

use std::f64::consts::FRAC_PI_4;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qcore::{
    apply, apply_counting, problem_layout, project, Gate, PartialObservable, QueryCounter,
    StateVector, UnitaryOp,
};

/// Unstructured search over N = 2^k drawers: find `ball` by evaluating the
/// Kronecker delta δ(ball, a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleProblem {
    k: usize,
    ball: BitString,
}

impl OracleProblem {
    pub fn new(k: usize, ball: BitString) -> Result<Self> {
        if ball.width() != k {
            return Err(Error::WidthMismatch { expected: k, got: ball.width() });
        }
        Ok(OracleProblem { k, ball })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ball(&self) -> &BitString {
        &self.ball
    }

    /// One classical oracle query: δ(ball, a).
    pub fn query(&self, a: &BitString, counter: &mut QueryCounter) -> bool {
        counter.record();
        *a == self.ball
    }
}

/// Bitwise controlled copy from B into A: |b⟩_B|0…0⟩_A → |b⟩_B|b⟩_A.
/// A permutation unitary, exactly self-inverse.
pub fn ideal_transform(k: usize) -> UnitaryOp {
    let gates = (0..k)
        .map(|j| Gate::Cnot { control: j, target: k + j })
        .collect();
    UnitaryOp::circuit(2 * k, gates)
}

/// Grover iteration count: max(1, floor((π/4)·√N)).
pub fn grover_iterations(k: usize) -> u64 {
    let n = (1u64 << k) as f64;
    ((FRAC_PI_4 * n.sqrt()).floor() as u64).max(1)
}

/// The physical search circuit on B⊗A: Hadamards on A, then r repetitions of
/// [equality phase oracle on B–A, diffusion on A].
pub fn grover_circuit(k: usize) -> UnitaryOp {
    let a_bits: Vec<usize> = (k..2 * k).collect();
    let b_bits: Vec<usize> = (0..k).collect();
    let mut gates: Vec<Gate> = a_bits.iter().map(|&bit| Gate::Hadamard { bit }).collect();
    for _ in 0..grover_iterations(k) {
        gates.push(Gate::EqualityOracle { left: b_bits.clone(), right: a_bits.clone() });
        gates.push(Gate::Diffusion { bits: a_bits.clone() });
    }
    UnitaryOp::circuit(2 * k, gates)
}

/// Run the search circuit on |ball⟩_B|0…0⟩_A and return the probability of
/// reading `ball` out of register A, together with the query count.
pub fn grover_success_probability(problem: &OracleProblem) -> Result<(f64, u64)> {
    let layout = problem_layout(problem.k)?;
    let input = StateVector::sharp(layout, &[("B", &problem.ball)])?;
    let circuit = grover_circuit(problem.k);
    let mut counter = QueryCounter::new();
    let output = apply_counting(&input, &circuit, &mut counter)?;
    let obs = PartialObservable::full("A", problem.k)?;
    let (p, _) = project(&output, &obs, &problem.ball)?;
    Ok((p, counter.count()))
}

/// Worst-case classical query count: the last drawer never needs opening.
pub fn classical_worst_case_queries(n_candidates: u64) -> Result<u64> {
    if n_candidates == 0 {
        return Err(Error::ZeroCandidates);
    }
    Ok(n_candidates - 1)
}

/// Open candidate drawers in lexicographic order, stopping at δ = 1 or when
/// one candidate remains unqueried.
pub fn classical_brute_force_solve(
    problem: &OracleProblem,
    candidate_set: &[BitString],
    counter: &mut QueryCounter,
) -> Result<BitString> {
    if candidate_set.is_empty() {
        return Err(Error::ZeroCandidates);
    }
    if !candidate_set.contains(&problem.ball) {
        return Err(Error::BallNotInCandidates(problem.ball.clone()));
    }
    let mut ordered: Vec<&BitString> = candidate_set.iter().collect();
    ordered.sort();
    ordered.dedup();
    for (i, candidate) in ordered.iter().enumerate() {
        if i + 1 == ordered.len() {
            break; // the last drawer is inferred
        }
        if problem.query(candidate, counter) {
            return Ok((*candidate).clone());
        }
    }
    Ok((*ordered.last().expect("non-empty")).clone())
}

/// Joint outcome distribution over (b, a) pairs in the measure-B-first order:
/// measure B, evolve, measure A.
pub fn ordinary_joint_distribution(u: &UnitaryOp, k: usize) -> Result<Vec<f64>> {
    let layout = problem_layout(k)?;
    let psi0 = crate::qcore::uniform_superposition(&layout, "B")?;
    let obs_b = PartialObservable::full("B", k)?;
    let obs_a = PartialObservable::full("A", k)?;
    let mut joint = vec![0.0; 1 << (2 * k)];
    for b in BitString::all(k) {
        let (p_b, projected) = project(&psi0, &obs_b, &b)?;
        if p_b <= 0.0 {
            continue;
        }
        let evolved = apply(&projected.normalize()?, u)?;
        for a in BitString::all(k) {
            let (p_a, _) = project(&evolved, &obs_a, &a)?;
            joint[(b.index() << k) | a.index()] += p_b * p_a;
        }
    }
    Ok(joint)
}

/// Joint outcome distribution in the relational order: evolve the unmeasured
/// superposition, measure A, attribute B from the post-measurement state.
pub fn relational_joint_distribution(u: &UnitaryOp, k: usize) -> Result<Vec<f64>> {
    let layout = problem_layout(k)?;
    let psi0 = crate::qcore::uniform_superposition(&layout, "B")?;
    let evolved = apply(&psi0, u)?;
    let obs_a = PartialObservable::full("A", k)?;
    let obs_b = PartialObservable::full("B", k)?;
    let mut joint = vec![0.0; 1 << (2 * k)];
    for a in BitString::all(k) {
        let (p_a, projected) = project(&evolved, &obs_a, &a)?;
        if p_a <= 0.0 {
            continue;
        }
        let post = projected.normalize()?;
        for b in BitString::all(k) {
            let (p_b, _) = project(&post, &obs_b, &b)?;
            joint[(b.index() << k) | a.index()] += p_a * p_b;
        }
    }
    Ok(joint)
}

/// Total-variation distance between two distributions.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
