use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::layout::RegisterLayout;
use crate::qcore::state::{StateVector, UnnormalizedState};
use crate::qcore::unitary::{QueryCounter, UnitaryOp};

/// Equal real positive amplitudes on all basis states of the chosen register,
/// every other register in the all-zeros sharp state.
pub fn uniform_superposition(layout: &RegisterLayout, register: &str) -> Result<StateVector> {
    let width = layout.width_of(register)?;
    let offset = layout.offset_of(register)?;
    let low = layout.total_bits() - offset - width;
    let amp = Complex64::new(0.5f64.powf(width as f64 / 2.0), 0.0);
    let mut amps = vec![Complex64::ZERO; layout.dimension()];
    for v in 0..1usize << width {
        amps[v << low] = amp;
    }
    StateVector::new(layout.clone(), amps)
}

fn check_dims(state_dim: usize, u: &UnitaryOp) -> Result<()> {
    if state_dim != u.dimension() {
        return Err(Error::DimensionMismatch { state: state_dim, operator: u.dimension() });
    }
    Ok(())
}

pub fn apply(state: &StateVector, u: &UnitaryOp) -> Result<StateVector> {
    check_dims(state.dimension(), u)?;
    let mut amps = state.amplitudes().to_vec();
    u.transform(&mut amps, false, None);
    StateVector::new(state.layout().clone(), amps)
}

/// Like `apply`, incrementing the counter once per oracle-gate application.
pub fn apply_counting(state: &StateVector, u: &UnitaryOp, counter: &mut QueryCounter) -> Result<StateVector> {
    check_dims(state.dimension(), u)?;
    let mut amps = state.amplitudes().to_vec();
    u.transform(&mut amps, false, Some(counter));
    StateVector::new(state.layout().clone(), amps)
}

pub fn apply_inverse(state: &StateVector, u: &UnitaryOp) -> Result<StateVector> {
    check_dims(state.dimension(), u)?;
    let mut amps = state.amplitudes().to_vec();
    u.transform(&mut amps, true, None);
    StateVector::new(state.layout().clone(), amps)
}

/// Backward evolution of a raw projected component, norm preserved as-is.
pub fn apply_inverse_unnormalized(state: &UnnormalizedState, u: &UnitaryOp) -> Result<UnnormalizedState> {
    check_dims(state.amplitudes().len(), u)?;
    let mut amps = state.amplitudes().to_vec();
    u.transform(&mut amps, true, None);
    UnnormalizedState::new(state.layout().clone(), amps)
}
