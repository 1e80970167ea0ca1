//! Degrees of polar varieties for structured matrices against those for
//! uniformly random matrices of the same shape.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::Budget;
use crate::matrix::ConstMatrix;
use crate::polar::{polar_ideal, verify_smooth_complete_intersection, Flavor, PolarSpec};
use crate::poly::{Point, Polynomial};

use super::example1::{example1_transform, parameter_count};
use super::example2::{example2_augmented, example2_matrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDominationReport {
    pub n: usize,
    pub p: usize,
    pub i: usize,
    /// Degrees for random classic matrices (0 for an empty variety).
    pub classic_random: Vec<u64>,
    pub dual_random: Vec<u64>,
    /// Degrees for `B_i(z)`, classic flavor.
    pub example1: Vec<u64>,
    /// Degrees for `B_(i,γ)(z)`, dual flavor.
    pub example2: Vec<u64>,
    /// `d^n p^(n-p)` with `d` the largest degree of the system.
    pub bound: u128,
    pub random_agree: bool,
    pub dominated: bool,
    pub within_bound: bool,
}

impl DegreeDominationReport {
    pub fn passed(&self) -> bool {
        self.random_agree && self.dominated && self.within_bound
    }
}

fn all_equal(v: &[u64]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Structured degrees never exceed the generic one, where both varieties are
/// nonempty.
fn dominated_by(structured: &[u64], random: &[u64]) -> bool {
    let generic = random.iter().copied().max().unwrap_or(0);
    generic == 0 || structured.iter().all(|&d| d == 0 || d <= generic)
}

pub fn degree_domination_check(
    polys: &[Polynomial],
    i: usize,
    trials: usize,
    seed: u64,
    budget: &Budget,
) -> Result<DegreeDominationReport> {
    let first = polys.first().ok_or_else(|| Error::precondition("empty system"))?;
    let (field, n, p) = (first.field(), first.nvars(), polys.len());
    if p >= n || i == 0 || i > n - p {
        return Err(Error::precondition(format!("invalid (n, p, i) = ({n}, {p}, {i})")));
    }
    if trials == 0 {
        return Err(Error::precondition("need at least one trial"));
    }
    if !verify_smooth_complete_intersection(polys, budget)?.passed() {
        return Err(Error::precondition("system is not a smooth complete intersection"));
    }
    let rows = n - p - i + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full_rank = |cols: usize, rng: &mut ChaCha8Rng| loop {
        let a = ConstMatrix::random(field, rows, cols, rng);
        if a.col_slice(cols - n..cols).has_full_row_rank() {
            return a;
        }
    };

    let mut jobs: Vec<(u8, Flavor, ConstMatrix)> = Vec::new();
    for _ in 0..trials {
        jobs.push((0, Flavor::Classic, full_rank(n, &mut rng)));
    }
    for _ in 0..trials {
        jobs.push((1, Flavor::Dual, full_rank(n + 1, &mut rng)));
    }
    for _ in 0..trials {
        let z = Point::new((0..parameter_count(n, p)).map(|_| field.random(&mut rng)).collect());
        jobs.push((2, Flavor::Classic, example1_transform(field, n, p, i, &z)?.b));
    }
    for _ in 0..trials {
        let mut gamma: Vec<_> = (0..n - i).map(|_| field.random(&mut rng)).collect();
        gamma[n - i - 1] = field.random_nonzero(&mut rng);
        let z = Point::new((0..i).map(|_| field.random(&mut rng)).collect());
        let b = example2_matrix(field, n, p, i, &Point::new(gamma), &z)?.b;
        jobs.push((3, Flavor::Dual, example2_augmented(&b)));
    }

    let degrees: Vec<(u8, u64)> = jobs
        .into_par_iter()
        .map(|(kind, flavor, a)| {
            let spec = PolarSpec::new(polys.to_vec(), i, flavor, a)?;
            let w = polar_ideal(&spec, budget)?;
            Ok((kind, if w.is_empty() { 0 } else { w.degree }))
        })
        .collect::<Result<_>>()?;
    let pick = |k: u8| -> Vec<u64> { degrees.iter().filter(|d| d.0 == k).map(|d| d.1).collect() };
    let (classic_random, dual_random, example1, example2) = (pick(0), pick(1), pick(2), pick(3));

    let d = polys.iter().map(|f| f.degree().max(0) as u128).max().unwrap_or(0);
    let bound = d
        .checked_pow(n as u32)
        .and_then(|x| x.checked_mul((p as u128).checked_pow((n - p) as u32)?))
        .unwrap_or(u128::MAX);
    let within_bound = degrees.iter().all(|&(_, deg)| deg as u128 <= bound);

    Ok(DegreeDominationReport {
        n,
        p,
        i,
        random_agree: all_equal(&classic_random) && all_equal(&dual_random),
        dominated: dominated_by(&example1, &classic_random) && dominated_by(&example2, &dual_random),
        within_bound,
        classic_random,
        dual_random,
        example1,
        example2,
        bound,
    })
}
