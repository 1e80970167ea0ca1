//! Dual polar varieties for the matrices `B_(i,γ)(z)`: unit rows in the
//! middle columns over a bottom row `(γ_1..γ_{n-i}, z_{n-i+1}..z_n)`, with
//! column 0 equal to `(0, .., 0, 1)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{localize_rabinowitsch, Budget};
use crate::matrix::ConstMatrix;
use crate::polar::{
    localized_singular_locus_ideal, polar_generators, verify_smooth_complete_intersection, Flavor, PolarIdealResult,
    PolarSpec, SingularOptions,
};
use crate::poly::{Point, Polynomial};

use super::{leading_minor, MeagerMatrixZ};

/// `B_(i,γ)(z)`; `gamma` needs at least `n-i` entries (extra ones are
/// ignored) and `z` exactly `i`.
pub fn example2_matrix(
    field: PrimeField,
    n: usize,
    p: usize,
    i: usize,
    gamma: &Point,
    z: &Point,
) -> Result<MeagerMatrixZ> {
    if p == 0 || p >= n || i == 0 || i > n - p {
        return Err(Error::precondition(format!("invalid (n, p, i) = ({n}, {p}, {i})")));
    }
    if gamma.len() < n - i || z.len() != i {
        return Err(Error::precondition(format!(
            "need at least {} gamma entries and {i} parameters, got {} and {}",
            n - i,
            gamma.len(),
            z.len()
        )));
    }
    if gamma[n - i - 1].is_zero() {
        return Err(Error::precondition(format!("gamma_{} must be nonzero", n - i)));
    }
    let rows = n - p - i + 1;
    let mut b = ConstMatrix::zeros(field, rows, n);
    for k in 0..rows - 1 {
        b.set(k, p - 1 + k, field.one());
    }
    for l in 0..n {
        let v = if l < n - i { gamma[l] } else { z[l - (n - i)] };
        b.set(rows - 1, l, v);
    }
    Ok(MeagerMatrixZ {
        n,
        p,
        i,
        z: z.clone(),
        b,
    })
}

/// A point with every coordinate nonzero, drawn from `seed`; admissible as
/// `γ` for every level of the chain.
pub fn draw_gamma(field: PrimeField, n: usize, seed: u64) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Point::new((0..n).map(|_| field.random_nonzero(&mut rng)).collect())
}

/// The `(n+1)`-column dual matrix: `b` with column 0 set to `(0, .., 0, 1)`.
pub fn example2_augmented(b: &ConstMatrix) -> ConstMatrix {
    let field = b.field();
    let mut out = ConstMatrix::zeros(field, b.rows(), b.cols() + 1);
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            out.set(r, c + 1, b.get(r, c));
        }
    }
    out.set(b.rows() - 1, 0, field.one());
    out
}

/// One level `i` of the chain, localized at the leading `(p-1)`-minor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLevel {
    pub i: usize,
    pub expected_dim: i64,
    pub dim: i64,
    pub degree: u64,
    /// Dimension of the singular locus of the localized variety, `-1` if smooth.
    pub singular_dim: i64,
    /// Every generator of the previous level lies in this level's ideal.
    pub contained_in_previous: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub n: usize,
    pub p: usize,
    pub gamma: Vec<u64>,
    pub levels: Vec<ChainLevel>,
}

impl ChainReport {
    /// Nonempty levels have dimension `n-p-i`.
    pub fn dims_descend(&self) -> bool {
        self.levels.iter().all(|l| l.dim < 0 || l.dim == l.expected_dim)
    }

    pub fn all_smooth(&self) -> bool {
        self.levels.iter().all(|l| l.singular_dim < 0)
    }

    pub fn inclusions_hold(&self) -> bool {
        self.levels.iter().all(|l| l.contained_in_previous != Some(false))
    }

    pub fn passed(&self) -> bool {
        self.dims_descend() && self.all_smooth() && self.inclusions_hold()
    }
}

/// The chain `i = 1..n-p` with `z_i = (γ_{n-i+1}..γ_n)`, so every level
/// shares the bottom row `γ`. Each level is localized at `m` by a
/// Rabinowitsch variable and checked with the Jacobian criterion.
pub fn example2_chain(
    polys: &[Polynomial],
    gamma: &Point,
    opts: &SingularOptions,
    budget: &Budget,
) -> Result<ChainReport> {
    let first = polys.first().ok_or_else(|| Error::precondition("empty system"))?;
    let (field, n, p) = (first.field(), first.nvars(), polys.len());
    if p >= n {
        return Err(Error::precondition(format!("need p < n, got p = {p}, n = {n}")));
    }
    if gamma.len() != n {
        return Err(Error::precondition(format!("gamma needs {n} entries, has {}", gamma.len())));
    }
    if let Some(i) = (1..=n - p).find(|&i| gamma[n - i - 1].is_zero()) {
        return Err(Error::precondition(format!("gamma_{} must be nonzero (level {i})", n - i)));
    }
    if !verify_smooth_complete_intersection(polys, budget)?.passed() {
        return Err(Error::precondition("system is not a smooth complete intersection"));
    }
    let m = leading_minor(polys)?;

    let mut levels = Vec::with_capacity(n - p);
    let mut previous: Option<PolarIdealResult> = None;
    for i in 1..=n - p {
        let z = Point::new(gamma.coords()[n - i..].to_vec());
        let b = example2_matrix(field, n, p, i, gamma, &z)?;
        let spec = PolarSpec::new(polys.to_vec(), i, Flavor::Dual, example2_augmented(&b.b))?;
        let base = polar_generators(&spec)?;
        let local = localize_rabinowitsch(&base, &m)?;
        let w = PolarIdealResult::solve(local, None, budget)?;
        let singular_dim = if w.is_empty() {
            -1
        } else {
            localized_singular_locus_ideal(&w, &base, opts, budget)?.dim
        };
        let contained_in_previous = match &previous {
            None => None,
            Some(prev) => {
                let mut all = true;
                for g in prev.ideal.generators() {
                    all &= w.gb.contains(g)?;
                }
                Some(all)
            }
        };
        levels.push(ChainLevel {
            i,
            expected_dim: (n - p - i) as i64,
            dim: w.dim,
            degree: w.degree,
            singular_dim,
            contained_in_previous,
        });
        previous = Some(w);
    }
    Ok(ChainReport {
        n,
        p,
        gamma: gamma.coords().iter().map(|c| c.value()).collect(),
        levels,
    })
}
