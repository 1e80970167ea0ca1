//! Exact polar-variety computations over prime fields.
//!
//! The crate is layered bottom-up: field and polynomial arithmetic, polynomial
//! matrices, Gröbner bases with dimension and degree, the polar constructions
//! themselves, the explicit example families and the randomized experiment.

pub mod error;
pub mod experiment;
pub mod families;
pub mod field;
pub mod groebner;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod polar;
pub mod poly;
pub mod system;

#[cfg(test)]
pub(crate) mod testing;

pub use error::{Error, Result};
pub use matrix::{ConstMatrix, PolyMatrix};
pub use field::{FieldElement, PrimeField, DEFAULT_PRIME, SMALL_PRIME};
pub use monomial::{Monomial, MAX_VARS};
pub use parse::parse_polynomial;
pub use poly::{Point, Polynomial};
pub use system::PolySystem;
pub use groebner::{
    localize_rabinowitsch, reduced_groebner_basis, Budget, GroebnerBasis, IdealPresentation,
    StaircaseSummary,
};
pub use polar::{Flavor, PolarIdealResult, PolarSpec};
