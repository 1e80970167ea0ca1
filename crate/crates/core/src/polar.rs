//! Classic and dual polar varieties of a complete intersection, the
//! degeneracy locus Δ_i, Jacobian-criterion singular loci and the pointwise
//! rank analyses (Thom–Boardman class, incidence fibers).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{
    extend_groebner_basis, linear_interreduce, reduced_groebner_basis, Budget, GroebnerBasis,
    IdealPresentation,
};
use crate::matrix::{ConstMatrix, PolyMatrix};
use crate::poly::{Point, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Classic,
    Dual,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Classic => "classic",
            Flavor::Dual => "dual",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(Flavor::Classic),
            "dual" => Ok(Flavor::Dual),
            other => Err(Error::Input(format!("unknown flavor '{other}'"))),
        }
    }
}

/// One polar-variety construction: `p` equations in `n` variables, index `i`
/// and a matrix with `n-p-i+1` rows. Dual matrices carry an extra leading
/// column `a_{k,0}`.
#[derive(Clone, Debug)]
pub struct PolarSpec {
    n: usize,
    i: usize,
    flavor: Flavor,
    polys: Vec<Polynomial>,
    a: ConstMatrix,
}

impl PolarSpec {
    /// Validates shapes, ranges and the rank of the constant part of `a`.
    /// A dual matrix with only `n` columns gets the all-ones column 0.
    pub fn new(polys: Vec<Polynomial>, i: usize, flavor: Flavor, a: ConstMatrix) -> Result<Self> {
        let first = polys
            .first()
            .ok_or_else(|| Error::precondition("a polar construction needs at least one equation"))?;
        let (field, n) = (first.field(), first.nvars());
        if polys.iter().any(|f| f.nvars() != n || f.field() != field) {
            return Err(Error::structural("equations live in different rings"));
        }
        let p = polys.len();
        if p >= n {
            return Err(Error::precondition(format!("need 1 <= p <= n-1, got p = {p}, n = {n}")));
        }
        if i == 0 || i > n - p {
            return Err(Error::precondition(format!("need 1 <= i <= n-p = {}, got i = {i}", n - p)));
        }
        let rows = n - p - i + 1;
        if a.rows() != rows {
            return Err(Error::precondition(format!(
                "matrix must have n-p-i+1 = {rows} rows, has {}",
                a.rows()
            )));
        }
        let a = match (flavor, a.cols()) {
            (Flavor::Classic, c) if c == n => a,
            (Flavor::Dual, c) if c == n + 1 => a,
            (Flavor::Dual, c) if c == n => with_unit_column(&a),
            (_, c) => {
                return Err(Error::precondition(format!(
                    "{flavor} matrix has {c} columns for n = {n}"
                )))
            }
        };
        let spec = PolarSpec { n, i, flavor, polys, a };
        if !spec.a_star().has_full_row_rank() {
            return Err(Error::precondition(format!(
                "constant part of the matrix does not have maximal rank {rows}"
            )));
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.polys.len()
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    /// The matrix as supplied (with column 0 for dual specs).
    pub fn matrix(&self) -> &ConstMatrix {
        &self.a
    }

    /// Columns `1..n` of the matrix.
    pub fn a_star(&self) -> ConstMatrix {
        match self.flavor {
            Flavor::Classic => self.a.clone(),
            Flavor::Dual => self.a.col_slice(1..self.n + 1),
        }
    }

    /// The rows stacked under the Jacobian: constants for classic specs,
    /// `a_{k,l} - a_{k,0} X_l` for dual ones.
    pub fn polar_rows(&self) -> PolyMatrix {
        let field = self.field();
        match self.flavor {
            Flavor::Classic => PolyMatrix::from_const(&self.a, self.n),
            Flavor::Dual => {
                let entries = (0..self.a.rows())
                    .flat_map(|k| (0..self.n).map(move |l| (k, l)))
                    .map(|(k, l)| {
                        let c = Polynomial::constant(field, self.n, self.a.get(k, l + 1));
                        let x = Polynomial::var(field, self.n, l).expect("index in range");
                        &c - &x.scale(self.a.get(k, 0))
                    })
                    .collect();
                PolyMatrix::new(self.a.rows(), self.n, entries).expect("shape is consistent")
            }
        }
    }

    /// `[J(F); rows]`, an `(n-i+1) x n` polynomial matrix.
    pub fn stacked(&self) -> PolyMatrix {
        PolyMatrix::jacobian(&self.polys)
            .expect("equations are nonempty")
            .vstack(&self.polar_rows())
            .expect("column counts agree")
    }

    /// The same construction with the top `k` rows of the matrix removed,
    /// i.e. the next index `i + k` of a nested sequence.
    pub fn descend(&self, k: usize) -> Result<PolarSpec> {
        if k >= self.a.rows() {
            return Err(Error::precondition("cannot drop every matrix row"));
        }
        PolarSpec::new(
            self.polys.clone(),
            self.i + k,
            self.flavor,
            self.a.row_slice(k..self.a.rows()),
        )
    }
}

fn with_unit_column(a: &ConstMatrix) -> ConstMatrix {
    let field = a.field();
    let mut out = ConstMatrix::zeros(field, a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        out.set(r, 0, field.one());
        for c in 0..a.cols() {
            out.set(r, c + 1, a.get(r, c));
        }
    }
    out
}

/// An ideal together with its reduced basis and staircase invariants.
#[derive(Clone, Debug)]
pub struct PolarIdealResult {
    pub ideal: IdealPresentation,
    pub gb: GroebnerBasis,
    pub dim: i64,
    /// `(n-p) - dim` for nonempty varieties inside `S`.
    pub codim_in_s: Option<i64>,
    pub degree: u64,
}

impl PolarIdealResult {
    fn from_gb(ideal: IdealPresentation, gb: GroebnerBasis, dim_s: Option<i64>) -> Self {
        let summary = gb.summary();
        PolarIdealResult {
            ideal,
            gb,
            dim: summary.dimension,
            codim_in_s: dim_s.filter(|_| summary.dimension >= 0).map(|d| d - summary.dimension),
            degree: summary.degree,
        }
    }

    /// Reduced basis and invariants of an arbitrary ideal; `dim_s` is the
    /// dimension of the ambient variety, if there is one.
    pub fn solve(ideal: IdealPresentation, dim_s: Option<i64>, budget: &Budget) -> Result<Self> {
        let gb = reduced_groebner_basis(&ideal, budget)?;
        Ok(PolarIdealResult::from_gb(ideal, gb, dim_s))
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }
}

/// All `r`-minors of `m`, computed in parallel, in lexicographic order.
pub fn all_minors(m: &PolyMatrix, r: usize) -> Result<Vec<Polynomial>> {
    let idx: Vec<_> = m.minor_indices(r)?.collect();
    idx.par_iter()
        .map(|(rs, cs)| m.submatrix(rs, cs).determinant())
        .collect()
}

/// All `r`-minors of `m` as normal forms modulo `gb`; zero ones are dropped.
pub fn all_minors_modulo(m: &PolyMatrix, r: usize, gb: &GroebnerBasis) -> Result<Vec<Polynomial>> {
    let idx: Vec<_> = m.minor_indices(r)?.collect();
    let reduce = gb.reducer();
    let minors: Vec<Polynomial> = idx
        .par_iter()
        .map(|(rs, cs)| m.submatrix(rs, cs).determinant_reduced(&reduce))
        .collect::<Result<_>>()?;
    Ok(minors.into_iter().filter(|f| !f.is_zero()).collect())
}

/// `F` together with every `(n-i+1)`-minor of the stacked matrix.
pub fn polar_generators(spec: &PolarSpec) -> Result<IdealPresentation> {
    let stack = spec.stacked();
    let minors = all_minors(&stack, spec.n - spec.i + 1)?;
    let mut ideal = IdealPresentation::new(spec.field(), spec.n, spec.polys.clone())?;
    ideal.extend(minors)?;
    Ok(ideal)
}

/// `F` together with every `(n-i)`-minor of the stacked matrix (rank at most
/// `n-i-1`).
pub fn delta_generators(spec: &PolarSpec) -> Result<IdealPresentation> {
    let stack = spec.stacked();
    let minors = all_minors(&stack, spec.n - spec.i)?;
    let mut ideal = IdealPresentation::new(spec.field(), spec.n, spec.polys.clone())?;
    ideal.extend(minors)?;
    Ok(ideal)
}

fn solve(ideal: IdealPresentation, spec: &PolarSpec, budget: &Budget) -> Result<PolarIdealResult> {
    let gb = reduced_groebner_basis(&ideal, budget)?;
    let dim_s = (spec.n - spec.p()) as i64;
    Ok(PolarIdealResult::from_gb(ideal, gb, Some(dim_s)))
}

pub fn classic_polar_ideal(spec: &PolarSpec, budget: &Budget) -> Result<PolarIdealResult> {
    if spec.flavor != Flavor::Classic {
        return Err(Error::precondition("classic polar ideal needs a classic spec"));
    }
    solve(polar_generators(spec)?, spec, budget)
}

pub fn dual_polar_ideal(spec: &PolarSpec, budget: &Budget) -> Result<PolarIdealResult> {
    if spec.flavor != Flavor::Dual {
        return Err(Error::precondition("dual polar ideal needs a dual spec"));
    }
    solve(polar_generators(spec)?, spec, budget)
}

/// Either flavor.
pub fn polar_ideal(spec: &PolarSpec, budget: &Budget) -> Result<PolarIdealResult> {
    solve(polar_generators(spec)?, spec, budget)
}

/// The rank-form degeneracy locus Δ_i.
pub fn delta_ideal(spec: &PolarSpec, budget: &Budget) -> Result<PolarIdealResult> {
    solve(delta_generators(spec)?, spec, budget)
}

/// Δ_i as the intersection of the polar varieties of the matrices with one
/// row deleted (sum of their ideals). Agrees with [`delta_ideal`] at regular
/// points of `S`. For `i = n-p` (a single row) the intersection is empty.
pub fn delta_deleted_row_ideal(spec: &PolarSpec, budget: &Budget) -> Result<PolarIdealResult> {
    let rows = spec.a.rows();
    let mut ideal = IdealPresentation::new(spec.field(), spec.n, spec.polys.clone())?;
    if rows == 1 {
        ideal.push(Polynomial::one(spec.field(), spec.n))?;
        return solve(ideal, spec, budget);
    }
    let jac = PolyMatrix::jacobian(&spec.polys)?;
    let polar = spec.polar_rows();
    for h in 0..rows {
        let stack = jac.vstack(&polar.delete_row(h))?;
        ideal.extend(all_minors(&stack, spec.n - spec.i)?)?;
    }
    solve(ideal, spec, budget)
}

/// Options for the Jacobian-criterion singular locus.
#[derive(Clone, Copy, Debug)]
pub struct SingularOptions {
    /// Largest number of minors that will be formed.
    pub minor_cap: u128,
}

impl Default for SingularOptions {
    fn default() -> Self {
        SingularOptions { minor_cap: 20_000 }
    }
}

/// Singular locus of an equidimensional variety by the Jacobian criterion:
/// the ideal plus all `c`-minors of the Jacobian of its generators, with
/// `c = n - dim`. The generators are first replaced by a linearly reduced
/// spanning set, which describes the same ideal with fewer rows. Minors are
/// added in growing batches and the search stops once the ideal becomes the
/// unit ideal, so `ideal` lists only the minors that were needed.
pub fn singular_locus_ideal(
    r: &PolarIdealResult,
    opts: &SingularOptions,
    budget: &Budget,
) -> Result<PolarIdealResult> {
    let c = criterion_codim(r)?;
    close_with_minors(r, r.ideal.generators(), c, opts, budget)
}

fn criterion_codim(r: &PolarIdealResult) -> Result<usize> {
    if r.dim < 0 {
        return Err(Error::precondition("singular locus of an empty variety"));
    }
    Ok(r.ideal.nvars() - r.dim as usize)
}

/// Jacobian of a linearly reduced span of `gens`, with entries lifted into
/// the ring of `gb`; `None` when `c = 0` (the locus is empty).
fn criterion_jacobian(
    gens: &[Polynomial],
    c: usize,
    gb: &GroebnerBasis,
    opts: &SingularOptions,
) -> Result<Option<PolyMatrix>> {
    if c == 0 {
        return Ok(None);
    }
    let gens = linear_interreduce(gens.to_vec());
    if c > gens.len() {
        return Err(Error::precondition(format!(
            "{} generators cannot cut out codimension {c}",
            gens.len()
        )));
    }
    let jac = PolyMatrix::jacobian(&gens)?;
    let count = jac.minor_count(c);
    if count > opts.minor_cap {
        return Err(Error::Budget(format!(
            "{count} Jacobian minors exceed the cap {}; use delta-proxy mode",
            opts.minor_cap
        )));
    }
    if jac.nvars() == gb.nvars() {
        return Ok(Some(jac));
    }
    let mut entries = Vec::with_capacity(jac.rows() * jac.cols());
    for r in 0..jac.rows() {
        for e in jac.row(r) {
            entries.push(e.extend_vars(gb.nvars())?);
        }
    }
    PolyMatrix::new(jac.rows(), jac.cols(), entries).map(Some)
}

const FIRST_BATCH: usize = 16;

fn close_with_minors(
    r: &PolarIdealResult,
    gens: &[Polynomial],
    c: usize,
    opts: &SingularOptions,
    budget: &Budget,
) -> Result<PolarIdealResult> {
    let mut ideal = r.ideal.clone();
    let Some(jac) = criterion_jacobian(gens, c, &r.gb, opts)? else {
        let one = Polynomial::one(ideal.field(), ideal.nvars());
        ideal.push(one.clone())?;
        let gb = extend_groebner_basis(&r.gb, &[one], budget)?;
        return Ok(PolarIdealResult::from_gb(ideal, gb, None));
    };
    let idx: Vec<_> = jac.minor_indices(c)?.collect();
    let mut gb = r.gb.clone();
    let mut done = 0;
    let mut batch = FIRST_BATCH;
    while done < idx.len() && !gb.is_unit() {
        let end = (done + batch).min(idx.len());
        let minors: Vec<Polynomial> = {
            let reduce = gb.reducer();
            let computed: Vec<Polynomial> = idx[done..end]
                .par_iter()
                .map(|(rs, cs)| jac.submatrix(rs, cs).determinant_reduced(&reduce))
                .collect::<Result<_>>()?;
            computed.into_iter().filter(|f| !f.is_zero()).collect()
        };
        if !minors.is_empty() {
            gb = extend_groebner_basis(&gb, &minors, budget)?;
            ideal.extend(minors)?;
        }
        done = end;
        batch *= 2;
    }
    Ok(PolarIdealResult::from_gb(ideal, gb, None))
}

/// Every `c`-minor of the Jacobian of a linearly reduced spanning set of the
/// generators, `c = n - dim`, as nonzero normal forms modulo the ideal.
/// Together with the ideal they cut out the singular locus. For `c = 0` this
/// is the single generator `1`.
pub fn jacobian_criterion_minors(r: &PolarIdealResult, opts: &SingularOptions) -> Result<Vec<Polynomial>> {
    let c = criterion_codim(r)?;
    match criterion_jacobian(r.ideal.generators(), c, &r.gb, opts)? {
        None => Ok(vec![Polynomial::one(r.ideal.field(), r.ideal.nvars())]),
        Some(jac) => all_minors_modulo(&jac, c, &r.gb),
    }
}

/// Singular locus of `V(base) \ V(m)` from its Rabinowitsch presentation
/// `r` (the ideal `base + <T m - 1>` in one more variable). On that variety
/// the row of `T m - 1` has the unit `m` in the column of `T`, so the Jacobian
/// drops below rank `c` exactly where the Jacobian of `base` in the original
/// variables drops below `c - 1`.
pub fn localized_singular_locus_ideal(
    r: &PolarIdealResult,
    base: &IdealPresentation,
    opts: &SingularOptions,
    budget: &Budget,
) -> Result<PolarIdealResult> {
    let c = criterion_codim(r)?;
    if r.ideal.nvars() != base.nvars() + 1 {
        return Err(Error::structural("localized ideal must have exactly one extra variable"));
    }
    close_with_minors(r, base.generators(), c.saturating_sub(1), opts, budget)
}

/// Outcome of [`verify_smooth_complete_intersection`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    /// `dim V(F_1..F_k)` for `k = 1..p`. A regular sequence generates a
    /// proper ideal, so every prefix variety must also be nonempty.
    pub prefix_dims: Vec<i64>,
    pub regular_sequence: bool,
    pub smooth: bool,
}

impl SmoothnessReport {
    pub fn passed(&self) -> bool {
        self.regular_sequence && self.smooth
    }
}

/// Checks that every prefix of `polys` cuts the dimension by one and that
/// the `p`-minors of the Jacobian have no common zero on `S`.
pub fn verify_smooth_complete_intersection(polys: &[Polynomial], budget: &Budget) -> Result<SmoothnessReport> {
    let first = polys
        .first()
        .ok_or_else(|| Error::precondition("empty system"))?;
    let (field, n) = (first.field(), first.nvars());
    let mut prefix_dims = Vec::with_capacity(polys.len());
    let mut gb = None;
    for k in 1..=polys.len() {
        let ideal = IdealPresentation::new(field, n, polys[..k].to_vec())?;
        let g = reduced_groebner_basis(&ideal, budget)?;
        prefix_dims.push(g.dimension());
        gb = Some(g);
    }
    let regular_sequence = prefix_dims
        .iter()
        .enumerate()
        .all(|(k, &d)| d >= 0 && d == n as i64 - k as i64 - 1);
    let gb = gb.expect("at least one prefix");
    let smooth = if gb.is_unit() {
        true
    } else {
        let jac = PolyMatrix::jacobian(polys)?;
        let minors = all_minors(&jac, polys.len())?;
        extend_groebner_basis(&gb, &minors, budget)?.is_unit()
    };
    Ok(SmoothnessReport {
        prefix_dims,
        regular_sequence,
        smooth,
    })
}

fn check_regular_point(polys: &[Polynomial], x: &Point) -> Result<PolyMatrix> {
    for (k, f) in polys.iter().enumerate() {
        if !f.evaluate(x)?.is_zero() {
            return Err(Error::Classification(format!(
                "point is not on S: equation {} does not vanish",
                k + 1
            )));
        }
    }
    let jac = PolyMatrix::jacobian(polys)?;
    let rank = jac.rank_at(x)?;
    if rank != polys.len() {
        return Err(Error::Classification(format!(
            "point is singular on S: Jacobian rank {rank} < {}",
            polys.len()
        )));
    }
    Ok(jac)
}

/// `j = n - rank [J(F)(x); a]` at a regular point `x` of `S`.
pub fn thom_boardman_class(polys: &[Polynomial], a: &ConstMatrix, x: &Point) -> Result<usize> {
    let jac = check_regular_point(polys, x)?;
    let n = jac.cols();
    if a.cols() != n {
        return Err(Error::structural(format!("matrix has {} columns, expected {n}", a.cols())));
    }
    let stacked = jac.evaluate(x)?.vstack(a)?;
    Ok(n - stacked.rank())
}

/// Projective dimension of the incidence fiber `{(λ:θ) : J(x)^T λ + a^T θ = 0}`
/// over a regular point `x`; `-1` means the fiber is empty. `a` may be
/// rank deficient but must have `n-p-i+1` rows.
pub fn incidence_fiber_dim(polys: &[Polynomial], a: &ConstMatrix, x: &Point, i: usize) -> Result<i64> {
    let jac = check_regular_point(polys, x)?;
    let (n, p) = (jac.cols(), polys.len());
    if i == 0 || i > n - p || a.rows() != n - p - i + 1 || a.cols() != n {
        return Err(Error::precondition(format!(
            "fiber needs a ({} x {n}) matrix for i = {i}",
            (n + 1).saturating_sub(p + i)
        )));
    }
    let system = jac.evaluate(x)?.vstack(a)?.transpose();
    let unknowns = (p + a.rows()) as i64;
    Ok(unknowns - system.rank() as i64 - 1)
}
