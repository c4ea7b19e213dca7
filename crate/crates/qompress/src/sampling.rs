//! Seeded random inputs.

use qompress_core::{Complex64, PureState, TriggerSet};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normalized complex Gaussian vector over `dims`.
pub fn random_state(rng: &mut impl Rng, dims: &[usize]) -> PureState {
    let len = dims.iter().product();
    let amps = (0..len)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::from_amplitudes(dims.to_vec(), amps).expect("a Gaussian vector is nonzero")
}

/// Uniform size in `1..d`, then a uniform subset of that size.
pub fn random_trigger_set(rng: &mut impl Rng, d: usize) -> TriggerSet {
    let k = rng.random_range(1..d);
    TriggerSet::new(d, sample(rng, d, k)).expect("sampled indices are valid")
}
