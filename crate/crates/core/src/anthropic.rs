//! The anthropic toy universe: drawers labeled life-compatible or not,
//! causal-loop instances conditioned on a life-compatible final outcome, and
//! the quadratic-speedup timescale calculator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qcore::{measure_with_rng, problem_layout, uniform_superposition, PartialObservable};
use crate::timesym::Halving;

/// Julian year, in seconds. The timescale outputs are order-level, so any
/// standard year length works; this one is fixed for reproducibility.
pub const YEAR_SECONDS: f64 = 3.156e7;

/// A universe whose fundamental-constant space is the set of k-bit strings,
/// with a marked life-compatible subset and a fixed halving of the selection.
#[derive(Clone, Debug)]
pub struct ToyUniverse {
    k: usize,
    life_set: Vec<BitString>,
    halving: Halving,
}

impl ToyUniverse {
    pub fn new(k: usize, mut life_set: Vec<BitString>, halving: Halving) -> Result<Self> {
        if halving.bits() != k {
            return Err(Error::InvalidConfig(format!(
                "halving covers {} bits, universe has {k}",
                halving.bits()
            )));
        }
        life_set.sort();
        life_set.dedup();
        if life_set.is_empty() {
            return Err(Error::UnsatisfiableUniverse);
        }
        for s in &life_set {
            if s.width() != k {
                return Err(Error::WidthMismatch { expected: k, got: s.width() });
            }
        }
        if life_set.len() == 1 << k {
            return Err(Error::InvalidConfig(
                "life-compatible set must be a proper subset".into(),
            ));
        }
        Ok(ToyUniverse { k, life_set, halving })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn life_set(&self) -> &[BitString] {
        &self.life_set
    }

    pub fn halving(&self) -> &Halving {
        &self.halving
    }

    /// Final-half values that complete `initial_value` to a life-compatible string.
    pub fn completions(&self, initial_value: &BitString) -> Vec<BitString> {
        self.life_set
            .iter()
            .filter(|s| s.select(&self.halving.initial) == *initial_value)
            .map(|s| s.select(&self.halving.final_half))
            .collect()
    }

    fn satisfiable_initials(&self) -> Vec<BitString> {
        BitString::all(self.k / 2)
            .into_iter()
            .filter(|iv| !self.completions(iv).is_empty())
            .collect()
    }
}

/// One conditioned causal-loop instance: the randomly selected initial half,
/// the final halves forced by life-compatibility, and the full outcome.
#[derive(Clone, Debug)]
pub struct ConditionedInstance {
    pub initial_value: BitString,
    pub forced_final_values: Vec<BitString>,
    pub selected_final: BitString,
    pub outcome: BitString,
    /// Initial values rejected (no life-compatible completion) before this one.
    pub resamples: u32,
}

/// Sample the initial half by the Born rule on the uniform superposition,
/// force the final half into the life-compatible set, and post-select
/// (reject and resample) when no completion exists.
pub fn condition_instance(universe: &ToyUniverse, seed: u64) -> Result<ConditionedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    condition_instance_with_rng(universe, &mut rng)
}

pub fn condition_instance_with_rng<R: Rng>(
    universe: &ToyUniverse,
    rng: &mut R,
) -> Result<ConditionedInstance> {
    if universe.satisfiable_initials().is_empty() {
        return Err(Error::UnsatisfiableUniverse);
    }
    let layout = problem_layout(universe.k)?;
    let uniform = uniform_superposition(&layout, "B")?;
    let obs = PartialObservable::new("B", universe.halving.initial.clone())?;
    let mut resamples = 0u32;
    loop {
        let record = measure_with_rng(&uniform, &obs, rng)?;
        let initial_value = record.outcome;
        let forced = universe.completions(&initial_value);
        if forced.is_empty() {
            resamples += 1;
            continue;
        }
        // Born weights over completions are uniform for the uniform ψ₀
        let selected_final = forced[rng.gen_range(0..forced.len())].clone();
        let outcome = BitString::combine(
            universe.k,
            &universe.halving.initial,
            &initial_value,
            &universe.halving.final_half,
            &selected_final,
        );
        return Ok(ConditionedInstance {
            initial_value,
            forced_final_values: forced,
            selected_final,
            outcome,
            resamples,
        });
    }
}

/// Exact outcome distribution of `condition_instance` with the rejection
/// marginalized out, by enumeration.
pub fn life_conditioned_distribution(universe: &ToyUniverse) -> Result<Vec<(BitString, f64)>> {
    let satisfiable = universe.satisfiable_initials();
    if satisfiable.is_empty() {
        return Err(Error::UnsatisfiableUniverse);
    }
    let p_initial = 1.0 / satisfiable.len() as f64;
    let mut dist = Vec::new();
    for outcome in universe.life_set() {
        let initial_value = outcome.select(&universe.halving.initial);
        let completions = universe.completions(&initial_value);
        dist.push((outcome.clone(), p_initial / completions.len() as f64));
    }
    Ok(dist)
}

/// The model relation for a quadratic speedup: N = (T_q·r)², T_c = N/r.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SpeedupEstimate {
    pub quantum_time_s: f64,
    pub step_rate: f64,
    pub problem_size: f64,
    pub classical_time_s: f64,
}

impl SpeedupEstimate {
    pub fn quantum_time_years(&self) -> f64 {
        self.quantum_time_s / YEAR_SECONDS
    }

    pub fn classical_time_years(&self) -> f64 {
        self.classical_time_s / YEAR_SECONDS
    }
}

pub fn speedup_timescale(quantum_time_s: f64, step_rate: f64) -> Result<SpeedupEstimate> {
    // NaN inputs fall through to the error branch too.
    if quantum_time_s.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonPositiveInput("quantum time"));
    }
    if step_rate.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonPositiveInput("step rate"));
    }
    let problem_size = (quantum_time_s * step_rate).powi(2);
    Ok(SpeedupEstimate {
        quantum_time_s,
        step_rate,
        problem_size,
        classical_time_s: problem_size / step_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par;

    fn left_first_halving() -> Halving {
        Halving::new(vec![0], vec![1]).unwrap()
    }

    fn parse_set(strings: &[&str]) -> Vec<BitString> {
        strings.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn initial_zero_forces_final_one() {
        let universe =
            ToyUniverse::new(2, parse_set(&["01", "10"]), left_first_halving()).unwrap();
        for seed in 0..200 {
            let inst = condition_instance(&universe, seed).unwrap();
            assert!(universe.life_set().contains(&inst.outcome));
            if inst.initial_value.to_string() == "0" {
                assert_eq!(inst.outcome.to_string(), "01");
            } else {
                assert_eq!(inst.outcome.to_string(), "10");
            }
            assert_eq!(inst.resamples, 0);
            assert_eq!(
                inst.outcome.select(&universe.halving.initial),
                inst.initial_value
            );
        }
    }

    #[test]
    fn rejection_resamples_to_the_only_outcome() {
        let universe = ToyUniverse::new(2, parse_set(&["01"]), left_first_halving()).unwrap();
        let mut rejected = 0u64;
        let trials = 2000;
        for seed in 0..trials {
            let inst = condition_instance(&universe, seed).unwrap();
            assert_eq!(inst.outcome.to_string(), "01");
            rejected += u64::from(inst.resamples > 0);
        }
        // initial value 1 is drawn with probability 1/2 and rejected
        let fraction = rejected as f64 / trials as f64;
        assert!((fraction - 0.5).abs() < 0.05, "rejection fraction {fraction}");
    }

    #[test]
    fn distribution_uniform_on_mirror_pair() {
        let universe =
            ToyUniverse::new(2, parse_set(&["01", "10"]), left_first_halving()).unwrap();
        let dist = life_conditioned_distribution(&universe).unwrap();
        assert_eq!(dist.len(), 2);
        for (_, p) in &dist {
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn distribution_point_mass() {
        let universe = ToyUniverse::new(2, parse_set(&["01"]), left_first_halving()).unwrap();
        let dist = life_conditioned_distribution(&universe).unwrap();
        assert_eq!(dist.len(), 1);
        assert!((dist[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_uniform_over_even_parity() {
        let life: Vec<BitString> = BitString::all(4)
            .into_iter()
            .filter(|b| b.bits().iter().filter(|&&x| x).count() % 2 == 0)
            .collect();
        for halving in crate::timesym::enumerate_halvings(4).unwrap() {
            let universe = ToyUniverse::new(4, life.clone(), halving).unwrap();
            let dist = life_conditioned_distribution(&universe).unwrap();
            assert_eq!(dist.len(), 8);
            let total: f64 = dist.iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (_, p) in &dist {
                assert!((p - 0.125).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empirical_matches_analytic_within_3_sigma() {
        let universe =
            ToyUniverse::new(2, parse_set(&["01", "10"]), left_first_halving()).unwrap();
        let trials = 10_000usize;
        let outcomes = par::map_indexed(trials, |i| {
            condition_instance(&universe, par::derive_seed(9, i as u64))
                .unwrap()
                .outcome
        });
        for (outcome, p) in life_conditioned_distribution(&universe).unwrap() {
            let count = outcomes.iter().filter(|o| **o == outcome).count() as f64;
            let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
            assert!((count - trials as f64 * p).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn unsatisfiable_and_invalid_universes() {
        assert!(matches!(
            ToyUniverse::new(2, vec![], left_first_halving()),
            Err(Error::UnsatisfiableUniverse)
        ));
        assert!(ToyUniverse::new(2, BitString::all(2), left_first_halving()).is_err());
    }

    #[test]
    fn timescale_identities() {
        let one = speedup_timescale(1.0, 1.0).unwrap();
        assert_eq!(one.problem_size, 1.0);
        assert_eq!(one.classical_time_s, 1.0);

        let ten = speedup_timescale(10.0, 1.0).unwrap();
        assert_eq!(ten.problem_size, 100.0);
        assert_eq!(ten.classical_time_s, 100.0);

        assert!(speedup_timescale(0.0, 1.0).is_err());
        assert!(speedup_timescale(1.0, -2.0).is_err());
    }

    #[test]
    fn ten_billion_years_gives_about_1e35_drawers() {
        let est = speedup_timescale(1e10 * YEAR_SECONDS, 1.0).unwrap();
        assert!(est.problem_size >= 1e34 && est.problem_size <= 1e36);
        let classical_years = est.classical_time_years();
        assert!((1e27..=1e29).contains(&classical_years));
    }
}
