use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qcore::layout::RegisterLayout;

/// Normalization tolerance for stored states.
pub const NORM_TOL: f64 = 1e-10;

/// A normalized complex amplitude vector over a multi-register basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dimension() {
            return Err(Error::BadAmplitudeCount { expected: layout.dimension(), got: amps.len() });
        }
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { layout, amps })
    }

    /// Sharp basis state |index⟩.
    pub fn basis_state(layout: RegisterLayout, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::ZERO; layout.dimension()];
        amps[index] = Complex64::ONE;
        StateVector::new(layout, amps)
    }

    /// Sharp state with each register set to the given bit-string.
    pub fn sharp(layout: RegisterLayout, values: &[(&str, &BitString)]) -> Result<Self> {
        let mut index = 0usize;
        for (name, width) in layout.registers() {
            let value = values
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| (*v).clone())
                .unwrap_or_else(|| BitString::zeros(width));
            if value.width() != width {
                return Err(Error::WidthMismatch { expected: width, got: value.width() });
            }
            index = (index << width) | value.index();
        }
        StateVector::basis_state(layout, index)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    pub fn into_unnormalized(self) -> UnnormalizedState {
        UnnormalizedState { layout: self.layout, amps: self.amps }
    }

    pub(crate) fn from_parts_unchecked(layout: RegisterLayout, amps: Vec<Complex64>) -> Self {
        StateVector { layout, amps }
    }
}

/// A raw amplitude vector of any norm; the transient carrier for projections
/// and reconstruction sums.
#[derive(Clone, Debug, PartialEq)]
pub struct UnnormalizedState {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl UnnormalizedState {
    pub fn new(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dimension() {
            return Err(Error::BadAmplitudeCount { expected: layout.dimension(), got: amps.len() });
        }
        Ok(UnnormalizedState { layout, amps })
    }

    pub fn zero(layout: RegisterLayout) -> Self {
        let amps = vec![Complex64::ZERO; layout.dimension()];
        UnnormalizedState { layout, amps }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    pub fn add_assign(&mut self, other: &UnnormalizedState) {
        debug_assert_eq!(self.amps.len(), other.amps.len());
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += b;
        }
    }

    pub fn normalize(self) -> Result<StateVector> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        let amps = self.amps.into_iter().map(|a| a / norm).collect();
        Ok(StateVector::from_parts_unchecked(self.layout, amps))
    }

    /// Max elementwise amplitude deviation from another vector.
    pub fn max_deviation(&self, other: &[Complex64]) -> f64 {
        self.amps
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Equality up to global phase: min over unit φ of ‖a − φb‖ < tolerance,
/// realized by aligning the phase at a's largest-magnitude amplitude.
pub fn states_equal(a: &StateVector, b: &StateVector, tolerance: f64) -> bool {
    if a.dimension() != b.dimension() {
        return false;
    }
    let pivot = a
        .amps
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm_sqr().total_cmp(&y.norm_sqr()))
        .map(|(i, _)| i)
        .expect("states are non-empty");
    let overlap = a.amps[pivot] * b.amps[pivot].conj();
    if overlap.norm() < 1e-300 {
        return false;
    }
    let phase = overlap / overlap.norm();
    let dev: f64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    dev < tolerance
}
