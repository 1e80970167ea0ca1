//! Shared helpers for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::PrimeField;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial with at most `terms` terms of degree at most `deg`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    field: PrimeField,
    nvars: usize,
    deg: u32,
    terms: usize,
) -> Polynomial {
    let count = rng.gen_range(0..=terms);
    let raw = (0..count)
        .map(|_| {
            let mut exps = vec![0u32; nvars];
            let mut budget = rng.gen_range(0..=deg);
            while budget > 0 {
                exps[rng.gen_range(0..nvars)] += 1;
                budget -= 1;
            }
            (Monomial::from_exponents(&exps).unwrap(), field.random_nonzero(rng))
        })
        .collect();
    Polynomial::from_terms(field, nvars, raw)
}
