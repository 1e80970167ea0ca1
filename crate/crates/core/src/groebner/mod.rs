//! Reduced Gröbner bases in degrevlex and the staircase invariants derived
//! from them.

mod buchberger;
mod linear;
mod reduce;
mod staircase;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

pub use linear::linear_interreduce;
pub use staircase::{
    dimension_of_monomials, hilbert_numerator, independent_set_dimension, HilbertNumerator,
};

/// Resource limits for one Gröbner computation. Exceeding any of them aborts
/// with [`Error::Budget`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// S-pairs reduced (pairs discarded by the criteria are free).
    pub max_pairs: usize,
    /// Elements in the working basis.
    pub max_basis: usize,
    /// Total degree of any basis element.
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 200_000,
            max_basis: 20_000,
            max_degree: 60,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_pairs: usize::MAX,
            max_basis: usize::MAX,
            max_degree: u32::MAX,
        }
    }
}

/// A finite generating set of an ideal. Generators are kept nonzero, monic
/// and free of duplicates.
#[derive(Clone, PartialEq, Eq)]
pub struct IdealPresentation {
    field: PrimeField,
    nvars: usize,
    generators: Vec<Polynomial>,
}

impl IdealPresentation {
    pub fn new(field: PrimeField, nvars: usize, generators: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        let mut ideal = IdealPresentation {
            field,
            nvars,
            generators: Vec::new(),
        };
        ideal.extend(generators)?;
        Ok(ideal)
    }

    /// The zero ideal of the polynomial ring.
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        IdealPresentation {
            field,
            nvars,
            generators: Vec::new(),
        }
    }

    pub fn extend(&mut self, generators: impl IntoIterator<Item = Polynomial>) -> Result<()> {
        let mut seen: HashSet<Polynomial> = self.generators.iter().cloned().collect();
        for g in generators {
            if g.field() != self.field || g.nvars() != self.nvars {
                return Err(Error::structural("generator lives in a different ring"));
            }
            if g.is_zero() {
                continue;
            }
            let g = g.make_monic();
            if seen.insert(g.clone()) {
                self.generators.push(g);
            }
        }
        Ok(())
    }

    pub fn push(&mut self, g: Polynomial) -> Result<()> {
        self.extend(std::iter::once(g))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The same generators viewed in a ring with more variables.
    pub fn extend_vars(&self, nvars: usize) -> Result<IdealPresentation> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.extend_vars(nvars))
            .collect::<Result<Vec<_>>>()?;
        IdealPresentation::new(self.field, nvars, gens)
    }
}

impl fmt::Debug for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.generators).finish()
    }
}

/// A reduced Gröbner basis: monic, interreduced, sorted by increasing leading
/// monomial. Equal ideals produce identical bases.
#[derive(Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    field: PrimeField,
    nvars: usize,
    basis: Vec<Polynomial>,
    leading: Vec<Monomial>,
}

/// Dimension and degree read off the staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseSummary {
    pub dimension: i64,
    pub degree: u64,
    pub is_zero_dimensional: bool,
}

impl GroebnerBasis {
    pub(crate) fn from_reduced(field: PrimeField, nvars: usize, mut basis: Vec<Polynomial>) -> Self {
        basis.sort_by_key(|g| g.leading_monomial().expect("basis elements are nonzero"));
        let leading = basis.iter().map(|g| g.leading_monomial().unwrap()).collect();
        GroebnerBasis {
            field,
            nvars,
            basis,
            leading,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    #[inline]
    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// True iff the ideal is the whole ring (the variety is empty).
    pub fn is_unit(&self) -> bool {
        self.leading.first().is_some_and(Monomial::is_one)
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.field() != self.field || f.nvars() != self.nvars {
            return Err(Error::structural("normal form across different rings"));
        }
        Ok(reduce::Divisors::new(&self.basis).reduce_full(f.clone()))
    }

    /// Normal-form map that reuses one divisor index; the caller guarantees
    /// the inputs live in this ring.
    pub fn reducer(&self) -> impl Fn(Polynomial) -> Polynomial + Sync + '_ {
        let divisors = reduce::Divisors::new(&self.basis);
        move |f| divisors.reduce_full(f)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Krull dimension of the variety, `-1` when it is empty.
    pub fn dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        dimension_of_monomials(&self.leading, self.nvars)
    }

    /// Numerator of the Hilbert series of the leading-term ideal.
    pub fn hilbert_numerator(&self) -> HilbertNumerator {
        hilbert_numerator(&self.leading, self.nvars)
    }

    /// Degree of the top-dimensional part; 0 for the empty variety.
    pub fn degree(&self) -> u64 {
        self.summary().degree
    }

    pub fn summary(&self) -> StaircaseSummary {
        if self.is_unit() {
            return StaircaseSummary {
                dimension: -1,
                degree: 0,
                is_zero_dimensional: false,
            };
        }
        let (dimension, degree) = self.hilbert_numerator().dimension_and_degree(self.nvars);
        StaircaseSummary {
            dimension,
            degree,
            is_zero_dimensional: dimension == 0,
        }
    }

    /// Every monomial outside the leading-term ideal, or `None` when there are
    /// infinitely many or more than `cap`.
    pub fn standard_monomials(&self, cap: usize) -> Option<Vec<Monomial>> {
        staircase::standard_monomials(&self.leading, self.nvars, cap)
    }
}

impl fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.basis).finish()
    }
}

/// Reduced Gröbner basis of `ideal` with respect to degrevlex.
pub fn reduced_groebner_basis(ideal: &IdealPresentation, budget: &Budget) -> Result<GroebnerBasis> {
    buchberger::groebner(ideal.field, ideal.nvars, ideal.generators.clone(), budget)
}

/// Gröbner basis of `ideal + extra`, where `gb` is already a Gröbner basis of
/// `ideal`. The known basis seeds the computation.
pub fn extend_groebner_basis(gb: &GroebnerBasis, extra: &[Polynomial], budget: &Budget) -> Result<GroebnerBasis> {
    let mut gens = gb.basis.clone();
    for e in extra {
        if e.field() != gb.field || e.nvars() != gb.nvars {
            return Err(Error::structural("extra generator lives in a different ring"));
        }
        let r = gb.normal_form(e)?;
        if !r.is_zero() {
            gens.push(r);
        }
    }
    buchberger::groebner(gb.field, gb.nvars, gens, budget)
}

pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    gb.normal_form(f)
}

/// Adjoins a fresh last variable `T` and the generator `T*m - 1`; the variety
/// of the result is the graph of `1/m` over `V(I) \ V(m)`.
pub fn localize_rabinowitsch(ideal: &IdealPresentation, m: &Polynomial) -> Result<IdealPresentation> {
    if m.is_zero() {
        return Err(Error::Degenerate("localization at the zero polynomial".into()));
    }
    if m.nvars() != ideal.nvars || m.field() != ideal.field {
        return Err(Error::structural("localizing element lives in a different ring"));
    }
    let n1 = ideal.nvars + 1;
    let mut out = ideal.extend_vars(n1)?;
    let t = Polynomial::var(ideal.field, n1, ideal.nvars)?;
    let tm = &t * &m.extend_vars(n1)?;
    out.push(&tm - &Polynomial::one(ideal.field, n1))?;
    Ok(out)
}

/// Reduces every S-polynomial of basis pairs; used to certify bases in tests
/// and by callers who want an independent check.
pub fn spolynomials_reduce_to_zero(gb: &GroebnerBasis) -> bool {
    let div = reduce::Divisors::new(&gb.basis);
    for a in 0..gb.basis.len() {
        for b in a + 1..gb.basis.len() {
            let s = reduce::spolynomial(&gb.basis[a], &gb.basis[b]);
            if !div.reduce_full(s).is_zero() {
                return false;
            }
        }
    }
    true
}

/// No term of any element is divisible by the leading monomial of another,
/// and every element is monic.
pub fn is_reduced(gb: &GroebnerBasis) -> bool {
    gb.basis.iter().enumerate().all(|(k, g)| {
        g.leading_coefficient().is_some_and(|c| c.is_one())
            && g.terms().iter().all(|(m, _)| {
                gb.leading
                    .iter()
                    .enumerate()
                    .all(|(j, lm)| j == k || !lm.divides(m))
            })
    })
}
