//! Counter-based sampling of the ensemble.
//!
//! Each `(seed, domain, k, n)` tuple keys a ChaCha20 stream and the trial
//! index selects the stream number, so a trial's draws never depend on which
//! other trials ran or in what order. Within a trial, coefficients are drawn
//! in row-major entry order and, inside an entry, in group-element order.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{EnsembleParams, GeneratorMatrix, MessageVector};
use crate::field::FieldElem;
use crate::group::{AlgebraElem, GroupAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Domain {
    Matrix = 1,
    Messages = 2,
}

pub(crate) fn stream_rng(seed: u64, domain: Domain, k: usize, n: usize, trial: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(k as u64).to_le_bytes());
    key[24..].copy_from_slice(&(n as u64).to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

fn draw_element(alg: &GroupAlgebra, rng: &mut ChaCha20Rng) -> AlgebraElem {
    let q = alg.q();
    let coeffs: Vec<FieldElem> = (0..alg.m()).map(|_| FieldElem::from_raw(rng.gen_range(0..q) as u8)).collect();
    alg.element(coeffs).expect("length m")
}

/// A uniform element of `(FG)^{k x n}`, determined by `(params, seed, trial)`.
pub fn sample_matrix(params: &EnsembleParams, seed: u64, trial: u64) -> GeneratorMatrix {
    let alg = params.algebra();
    let (k, n) = (params.k(), params.n());
    let mut rng = stream_rng(seed, Domain::Matrix, k, n, trial);
    let entries = (0..k * n).map(|_| draw_element(alg, &mut rng)).collect();
    GeneratorMatrix::new(alg, k, n, entries).expect("shape matches")
}

/// A uniform message in `(FG)^k`, drawn from the message stream of `(seed, trial)`.
pub fn sample_message(params: &EnsembleParams, seed: u64, trial: u64) -> MessageVector {
    let alg = params.algebra();
    let mut rng = stream_rng(seed, Domain::Messages, params.k(), params.n(), trial);
    MessageVector::new((0..params.k()).map(|_| draw_element(alg, &mut rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::group::AbelianGroup;
    use std::prelude::v1::*;

    fn params(q: u32, orders: &[u32], k: usize, n: usize) -> EnsembleParams {
        let alg = GroupAlgebra::new(Field::with_size(q).unwrap(), AbelianGroup::new(orders).unwrap());
        EnsembleParams::with_k(alg, k, n, 0.25).unwrap()
    }

    #[test]
    fn deterministic_per_seed_and_trial() {
        let p = params(4, &[3], 2, 3);
        assert_eq!(sample_matrix(&p, 42, 7), sample_matrix(&p, 42, 7));
        assert_ne!(sample_matrix(&p, 42, 7), sample_matrix(&p, 42, 8));
        assert_ne!(sample_matrix(&p, 42, 7), sample_matrix(&p, 43, 7));
        assert_eq!(sample_message(&p, 1, 2), sample_message(&p, 1, 2));
    }

    #[test]
    fn micro_ensemble_is_uniform() {
        // q=2, G=Z_2, k=n=1: four matrices, each expected 25_000 times.
        let p = params(2, &[2], 1, 1);
        let trials = 100_000u64;
        let mut counts = [0u64; 4];
        for t in 0..trials {
            let a = sample_matrix(&p, 2024, t);
            let c = a.get(0, 0).coeffs();
            counts[c[0].index() + 2 * c[1].index()] += 1;
        }
        let expected = trials as f64 / 4.0;
        let sigma = libm::sqrt(trials as f64 * 0.25 * 0.75);
        for c in counts {
            assert!((c as f64 - expected).abs() <= 4.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn neighbouring_trials_are_independent() {
        // Joint law of the first coefficient of trials t and t+1 over GF(4):
        // 16 cells, chi-square with 15 degrees of freedom.
        let p = params(4, &[2], 1, 1);
        let pairs = 50_000u64;
        let first = |t: u64| sample_matrix(&p, 99, t).get(0, 0).coeffs()[0].index();
        let mut table = [0u64; 16];
        for t in 0..pairs {
            table[first(2 * t) * 4 + first(2 * t + 1)] += 1;
        }
        let expected = pairs as f64 / 16.0;
        let chi2: f64 = table.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        // 0.9999 quantile of chi-square(15)
        assert!(chi2 < 44.26, "chi2 = {chi2}");
    }
}
