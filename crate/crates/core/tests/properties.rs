//! Property-based invariants of the state-vector core: norm preservation,
//! exact invertibility, measurement completeness and projector algebra, and
//! deterministic seeded sampling.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qloops::bits::BitString;
use qloops::qcore::{
    apply, apply_inverse, measure, problem_layout, project, states_equal, uniform_superposition,
    Gate, PartialObservable, RegisterLayout, StateVector, UnitaryOp, UnnormalizedState,
};

fn layout(k: usize) -> RegisterLayout {
    problem_layout(k).unwrap()
}

/// Random normalized state on a B(k)+A(k) layout.
fn random_state(k: usize, seed: u64) -> StateVector {
    let layout = layout(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..layout.dimension())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    UnnormalizedState::new(layout, amps).unwrap().normalize().unwrap()
}

/// Random unitary matrix by Gram-Schmidt on a seeded random complex matrix.
fn random_unitary(dim: usize, seed: u64) -> UnitaryOp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    for j in 0..dim {
        for i in 0..j {
            let overlap: Complex64 = (0..dim).map(|r| columns[i][r].conj() * columns[j][r]).sum();
            let corrections: Vec<Complex64> = columns[i].iter().map(|a| overlap * a).collect();
            for (entry, correction) in columns[j].iter_mut().zip(corrections) {
                *entry -= correction;
            }
        }
        let norm: f64 = columns[j].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for entry in &mut columns[j] {
            *entry /= norm;
        }
    }
    let mut entries = vec![Complex64::ZERO; dim * dim];
    for (j, column) in columns.iter().enumerate() {
        for (r, a) in column.iter().enumerate() {
            entries[r * dim + j] = *a;
        }
    }
    UnitaryOp::matrix(dim, entries).unwrap()
}

/// Random circuit over the 2k bits of the B+A layout.
fn random_circuit(k: usize, seed: u64, gate_count: usize) -> UnitaryOp {
    let total = 2 * k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates = (0..gate_count)
        .map(|_| match rng.gen_range(0..4) {
            0 => Gate::Hadamard { bit: rng.gen_range(0..total) },
            1 => {
                let control = rng.gen_range(0..total);
                let mut target = rng.gen_range(0..total - 1);
                if target >= control {
                    target += 1;
                }
                Gate::Cnot { control, target }
            }
            2 => Gate::EqualityOracle {
                left: (0..k).collect(),
                right: (k..2 * k).collect(),
            },
            _ => Gate::Diffusion { bits: (k..2 * k).collect() },
        })
        .collect();
    UnitaryOp::circuit(total, gates)
}

proptest! {
    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), gates in 1usize..12) {
        let state = random_state(2, seed);
        let evolved = apply(&state, &random_circuit(2, seed ^ 0xabcd, gates)).unwrap();
        prop_assert!((evolved.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn matrices_preserve_norm(seed in any::<u64>()) {
        let state = random_state(1, seed);
        let evolved = apply(&state, &random_unitary(4, seed ^ 0x1234)).unwrap();
        prop_assert!((evolved.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_undoes_circuit(seed in any::<u64>(), gates in 1usize..12) {
        let state = random_state(2, seed);
        let u = random_circuit(2, seed ^ 0x77, gates);
        let round_trip = apply_inverse(&apply(&state, &u).unwrap(), &u).unwrap();
        prop_assert!(states_equal(&round_trip, &state, 1e-10));
    }

    #[test]
    fn inverse_undoes_matrix(seed in any::<u64>()) {
        let state = random_state(1, seed);
        let u = random_unitary(4, seed ^ 0x99);
        let round_trip = apply_inverse(&apply(&state, &u).unwrap(), &u).unwrap();
        prop_assert!(states_equal(&round_trip, &state, 1e-10));
    }

    #[test]
    fn projection_weights_are_complete(seed in any::<u64>(), position in 0usize..2) {
        let state = random_state(2, seed);
        let obs = PartialObservable::new("A", vec![position]).unwrap();
        let mut total = 0.0;
        for value in BitString::all(1) {
            let (weight, _) = project(&state, &obs, &value).unwrap();
            total += weight;
        }
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn projectors_are_idempotent_and_orthogonal(seed in any::<u64>()) {
        let state = random_state(2, seed);
        let obs = PartialObservable::new("B", vec![0]).unwrap();
        let zero = "0".parse::<BitString>().unwrap();
        let one = "1".parse::<BitString>().unwrap();
        let (weight, projected) = project(&state, &obs, &zero).unwrap();
        prop_assume!(weight > 1e-6);
        let normalized = projected.normalize().unwrap();
        // Projecting the projected state again changes nothing...
        let (again, reprojected) = project(&normalized, &obs, &zero).unwrap();
        prop_assert!((again - 1.0).abs() < 1e-10);
        prop_assert!(states_equal(&reprojected.normalize().unwrap(), &normalized, 1e-10));
        // ...and the orthogonal outcome has zero weight on it.
        let (other, _) = project(&normalized, &obs, &one).unwrap();
        prop_assert!(other < 1e-10);
    }

    #[test]
    fn measurement_is_seed_deterministic(seed in any::<u64>(), rng_seed in any::<u64>()) {
        let state = random_state(2, seed);
        let obs = PartialObservable::full("A", 2).unwrap();
        let a = measure(&state, &obs, rng_seed).unwrap();
        let b = measure(&state, &obs, rng_seed).unwrap();
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert!((a.probability - b.probability).abs() < 1e-15);
    }

    #[test]
    fn equality_is_invariant_under_global_phase(seed in any::<u64>(), phase in 0.0f64..std::f64::consts::TAU) {
        let state = random_state(1, seed);
        let rotation = Complex64::from_polar(1.0, phase);
        let rotated = StateVector::new(
            state.layout().clone(),
            state.amplitudes().iter().map(|a| a * rotation).collect(),
        )
        .unwrap();
        prop_assert!(states_equal(&state, &rotated, 1e-10));
    }
}

#[test]
fn uniform_superposition_weights_match_born_rule() {
    let layout = layout(2);
    let state = uniform_superposition(&layout, "B").unwrap();
    let obs = PartialObservable::full("B", 2).unwrap();
    for value in BitString::all(2) {
        let (weight, _) = project(&state, &obs, &value).unwrap();
        assert!((weight - 0.25).abs() < 1e-12);
    }
}
