#![allow(dead_code)]

use qompress_core::qstate::Matrix;
use qompress_core::{Complex64, PureState, TriggerSet};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state(rng: &mut impl Rng, dims: &[usize]) -> PureState {
    let len = dims.iter().product();
    let amps = (0..len).map(|_| gaussian(rng)).collect();
    PureState::from_amplitudes(dims.to_vec(), amps).unwrap()
}

pub fn random_qudit(rng: &mut impl Rng, d: usize) -> PureState {
    random_state(rng, &[d])
}

/// Haar-like unitary from Gram–Schmidt on Gaussian rows.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        for u in &rows {
            let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            rows.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    Matrix::from_rows(rows.into_iter().flatten().collect()).unwrap()
}

pub fn random_trigger_set(rng: &mut impl Rng, d: usize) -> TriggerSet {
    let k = rng.random_range(1..d);
    TriggerSet::new(d, sample(rng, d, k)).unwrap()
}

/// Direct evaluation of the multi-level CZ: flip the sign of every `|m, n⟩`
/// with `m ∈ c1` and `n ∈ c2`.
pub fn mcz_oracle(psi: &PureState, c1: &TriggerSet, c2: &TriggerSet) -> PureState {
    let d2 = c2.dim();
    let amps = psi
        .amps()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if c1.contains(i / d2) && c2.contains(i % d2) {
                -a
            } else {
                a
            }
        })
        .collect();
    PureState::new(psi.dims().to_vec(), amps).unwrap()
}
