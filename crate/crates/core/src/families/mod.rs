//! Explicit families of polar varieties: singular generic ones built from
//! two quadrics, the unipotent coordinate changes of the meagerly generic
//! classic family, the dual chains with a fixed bottom row and the degree
//! comparison between structured and random matrices.

mod degcmp;
mod example1;
mod example2;
mod family31;

pub use degcmp::{degree_domination_check, DegreeDominationReport};
pub use example1::{
    example1_nesting_holds, example1_symbolic, example1_transform, parameter_count, unitriangular_inverse,
};
pub use example2::{draw_gamma, example2_augmented, example2_chain, example2_matrix, ChainLevel, ChainReport};
pub use family31::{
    build_family_31, cofactors, verify_singular_witness, Family31Instance, WitnessReport, FAMILY_RETRIES,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::random_dense;
use crate::field::PrimeField;
use crate::groebner::Budget;
use crate::matrix::{ConstMatrix, PolyMatrix};
use crate::polar::verify_smooth_complete_intersection;
use crate::poly::{Point, Polynomial};

/// A structured matrix together with the parameter point it came from.
#[derive(Clone, Debug, Serialize)]
pub struct MeagerMatrixZ {
    pub n: usize,
    pub p: usize,
    pub i: usize,
    #[serde(serialize_with = "serialize_point")]
    pub z: Point,
    /// The `(n-p-i+1) x n` matrix (columns `1..n`).
    #[serde(serialize_with = "serialize_matrix")]
    pub b: ConstMatrix,
}

fn serialize_point<S: serde::Serializer>(x: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.coords().iter().map(|c| c.value()))
}

fn serialize_matrix<S: serde::Serializer>(m: &ConstMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&m.to_json(), s)
}

/// `det [dF_k/dX_l]` for `1 <= k, l <= p-1`; the constant 1 when `p = 1`.
pub fn leading_minor(polys: &[Polynomial]) -> Result<Polynomial> {
    let first = polys.first().ok_or_else(|| Error::precondition("empty system"))?;
    let k = polys.len() - 1;
    let idx: Vec<usize> = (0..k).collect();
    if k == 0 {
        return Ok(Polynomial::one(first.field(), first.nvars()));
    }
    PolyMatrix::jacobian(polys)?.submatrix(&idx, &idx).determinant()
}

/// `p` dense random quadrics in `n` variables forming a smooth complete
/// intersection, drawn from `seed` with at most `attempts` tries.
pub fn draw_smooth_quadrics(
    field: PrimeField,
    n: usize,
    p: usize,
    seed: u64,
    attempts: usize,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    if p == 0 || p >= n {
        return Err(Error::precondition(format!("need 1 <= p <= n-1, got p = {p}, n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts.max(1) {
        let polys: Vec<Polynomial> = (0..p).map(|_| random_dense(field, n, 2, &mut rng)).collect();
        if verify_smooth_complete_intersection(&polys, budget)?.passed() {
            return Ok(polys);
        }
    }
    Err(Error::RetriesExhausted(format!(
        "no smooth complete intersection of {p} quadrics in {n} variables after {attempts} draws"
    )))
}
