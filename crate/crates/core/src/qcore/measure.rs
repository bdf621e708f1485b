use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qcore::state::{StateVector, UnnormalizedState};

/// A computational-basis observable on a subset of one register's bits.
/// Full-register measurement is the special case of all positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialObservable {
    register: String,
    positions: Vec<usize>,
}

impl PartialObservable {
    /// `positions` are bit positions within the register, 0 = leftmost.
    /// They are kept sorted; outcome bits follow this order.
    pub fn new(register: &str, mut positions: Vec<usize>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "observable on register {register} selects no bits"
            )));
        }
        positions.sort_unstable();
        positions.dedup();
        Ok(PartialObservable { register: register.to_string(), positions })
    }

    pub fn full(register: &str, width: usize) -> Result<Self> {
        PartialObservable::new(register, (0..width).collect())
    }

    pub fn register(&self) -> &str {
        &self.register
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn outcome_bits(&self) -> usize {
        self.positions.len()
    }

    /// Isolating masks for each measured bit, validated against the layout.
    fn masks(&self, state: &StateVector) -> Result<Vec<usize>> {
        let layout = state.layout();
        self.positions
            .iter()
            .map(|&p| Ok(1usize << layout.shift(layout.global_position(&self.register, p)?)))
            .collect()
    }

    /// Measured-bits value of a basis index, as an outcome index.
    fn outcome_of(&self, masks: &[usize], index: usize) -> usize {
        masks.iter().fold(0usize, |acc, &m| acc << 1 | usize::from(index & m != 0))
    }
}

/// One projective measurement: the sampled outcome, its Born probability,
/// and the renormalized post-measurement state.
#[derive(Clone, Debug)]
pub struct MeasurementRecord {
    pub observable: PartialObservable,
    pub outcome: BitString,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Project onto a fixed outcome: returns the squared-norm weight and the raw
/// (not renormalized) projected component. Zero-weight outcomes return
/// (0, zero vector).
pub fn project(
    state: &StateVector,
    obs: &PartialObservable,
    outcome: &BitString,
) -> Result<(f64, UnnormalizedState)> {
    if outcome.width() != obs.outcome_bits() {
        return Err(Error::WidthMismatch { expected: obs.outcome_bits(), got: outcome.width() });
    }
    let masks = obs.masks(state)?;
    let want = outcome.index();
    let mut weight = 0.0;
    let mut amps = vec![Complex64::ZERO; state.dimension()];
    for (i, &a) in state.amplitudes().iter().enumerate() {
        if obs.outcome_of(&masks, i) == want {
            weight += a.norm_sqr();
            amps[i] = a;
        }
    }
    Ok((weight, UnnormalizedState::new(state.layout().clone(), amps)?))
}

/// Born-rule sample over the measured positions, deterministic given the seed.
pub fn measure(state: &StateVector, obs: &PartialObservable, rng_seed: u64) -> Result<MeasurementRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    measure_with_rng(state, obs, &mut rng)
}

pub fn measure_with_rng<R: Rng>(
    state: &StateVector,
    obs: &PartialObservable,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    let masks = obs.masks(state)?;
    let m = obs.outcome_bits();
    let mut weights = vec![0.0f64; 1 << m];
    for (i, a) in state.amplitudes().iter().enumerate() {
        weights[obs.outcome_of(&masks, i)] += a.norm_sqr();
    }
    let draw: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut chosen = None;
    for (o, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        cumulative += w;
        if draw < cumulative {
            chosen = Some(o);
            break;
        }
    }
    // only outcomes with positive probability are sampled; the fallback
    // covers cumulative rounding just below 1
    let chosen = chosen.unwrap_or_else(|| {
        weights
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w > 0.0)
            .map(|(o, _)| o)
            .expect("state has unit norm")
    });
    let outcome = BitString::from_index(chosen, m);
    let (probability, projected) = project(state, obs, &outcome)?;
    Ok(MeasurementRecord {
        observable: obs.clone(),
        outcome,
        probability,
        post_state: projected.normalize()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::layout::problem_layout;
    use crate::qcore::ops::uniform_superposition;
    use crate::qcore::state::states_equal;

    #[test]
    fn completeness_over_outcomes() {
        let layout = problem_layout(2).unwrap();
        let state = uniform_superposition(&layout, "B").unwrap();
        let obs = PartialObservable::new("B", vec![0]).unwrap();
        let total: f64 = BitString::all(1)
            .iter()
            .map(|o| project(&state, &obs, o).unwrap().0)
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_outcome_has_zero_weight() {
        let layout = problem_layout(2).unwrap();
        let ball: BitString = "01".parse().unwrap();
        let state = StateVector::sharp(layout, &[("B", &ball)]).unwrap();
        let obs = PartialObservable::new("B", vec![0]).unwrap();
        let (w, raw) = project(&state, &obs, &"1".parse().unwrap()).unwrap();
        assert_eq!(w, 0.0);
        assert_eq!(raw.norm(), 0.0);
    }

    #[test]
    fn left_bit_of_uniform_b() {
        let layout = problem_layout(2).unwrap();
        let state = uniform_superposition(&layout, "B").unwrap();
        let obs = PartialObservable::new("B", vec![0]).unwrap();
        let (w, raw) = project(&state, &obs, &"0".parse().unwrap()).unwrap();
        assert!((w - 0.5).abs() < 1e-10);
        // post state ∝ (|00⟩+|01⟩)_B|00⟩_A
        let post = raw.normalize().unwrap();
        let mut amps = vec![Complex64::ZERO; 16];
        amps[0b0000] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0b0100] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let expected = StateVector::new(problem_layout(2).unwrap(), amps).unwrap();
        assert!(states_equal(&post, &expected, 1e-10));
    }

    #[test]
    fn measurement_is_deterministic_in_seed() {
        let layout = problem_layout(2).unwrap();
        let state = uniform_superposition(&layout, "B").unwrap();
        let obs = PartialObservable::full("B", 2).unwrap();
        let a = measure(&state, &obs, 42).unwrap();
        let b = measure(&state, &obs, 42).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.probability, b.probability);
        assert!((a.probability - 0.25).abs() < 1e-10);
    }

    #[test]
    fn projector_idempotence() {
        let layout = problem_layout(2).unwrap();
        let state = uniform_superposition(&layout, "B").unwrap();
        let obs = PartialObservable::new("B", vec![1]).unwrap();
        let outcome: BitString = "1".parse().unwrap();
        let (w1, once) = project(&state, &obs, &outcome).unwrap();
        let once_state = once.clone().normalize().unwrap();
        let (w2, twice) = project(&once_state, &obs, &outcome).unwrap();
        assert!((w2 - 1.0).abs() < 1e-10);
        assert!(w1 < 1.0);
        assert!(states_equal(&twice.normalize().unwrap(), &once.normalize().unwrap(), 1e-10));
    }
}
