//! Two diagonal quadrics `F_u = Σ_j c_{u,j} X_j^2 - c_u` and a matrix `a`
//! for which the polar variety of index 1 is singular at a known point ξ.
//!
//! ξ is taken in the linear space `E` of points `x` where both vectors
//! `(c_{u,j} x_j)_j` lie in the row span of `a`. At such a point the whole
//! `n x n` matrix `N = [J(F_1, F_2); a]` has rank `n-2`, so every
//! `(n-1)`-minor of `N` vanishes and with it the gradient of `det N`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::groebner::Budget;
use crate::matrix::{ConstMatrix, PolyMatrix};
use crate::monomial::Monomial;
use crate::polar::{
    jacobian_criterion_minors, polar_ideal, verify_smooth_complete_intersection, Flavor, PolarSpec,
    SingularOptions,
};
use crate::poly::{Point, Polynomial};

/// Draws allowed before giving up on a generic instance.
pub const FAMILY_RETRIES: usize = 64;

#[derive(Clone, Debug)]
pub struct Family31Instance {
    pub n: usize,
    pub field: PrimeField,
    /// `2 x n` coefficient matrix.
    pub c: ConstMatrix,
    /// `(n-2) x n`.
    pub a: ConstMatrix,
    pub c1: FieldElement,
    pub c2: FieldElement,
    pub f1: Polynomial,
    pub f2: Polynomial,
    pub xi: Point,
    /// Dimension of the linear space `E` ξ was drawn from.
    pub e_dim: usize,
}

impl Family31Instance {
    pub fn polys(&self) -> Vec<Polynomial> {
        vec![self.f1.clone(), self.f2.clone()]
    }

    /// `N = [J(F_1, F_2); a]`, square of size `n`.
    pub fn n_star(&self) -> PolyMatrix {
        PolyMatrix::jacobian(&self.polys())
            .expect("two equations")
            .vstack(&PolyMatrix::from_const(&self.a, self.n))
            .expect("column counts agree")
    }

    /// The classic polar construction of index 1 with matrix `a`.
    pub fn polar_spec(&self) -> Result<PolarSpec> {
        PolarSpec::new(self.polys(), 1, Flavor::Classic, self.a.clone())
    }
}

fn diagonal_quadric(field: PrimeField, c: &[FieldElement], rhs: FieldElement) -> Polynomial {
    let n = c.len();
    let mut terms: Vec<_> = c
        .iter()
        .enumerate()
        .map(|(j, &cj)| {
            let mut e = vec![0u32; n];
            e[j] = 2;
            (Monomial::from_exponents(&e).expect("within limits"), cj)
        })
        .collect();
    terms.push((Monomial::one(n), field.neg(rhs)));
    Polynomial::from_terms(field, n, terms)
}

fn generic_c(c: &ConstMatrix) -> bool {
    let f = c.field();
    let n = c.cols();
    if (0..2).any(|u| (0..n).any(|j| c.get(u, j).is_zero())) {
        return false;
    }
    (0..n).all(|j| {
        (j + 1..n).all(|k| {
            let d = f.sub(f.mul(c.get(0, j), c.get(1, k)), f.mul(c.get(0, k), c.get(1, j)));
            !d.is_zero()
        })
    })
}

/// Draws `c`, `a` and ξ until every genericity condition holds and the two
/// quadrics form a smooth complete intersection.
pub fn build_family_31(field: PrimeField, n: usize, seed: u64, budget: &Budget) -> Result<Family31Instance> {
    if n < 6 {
        return Err(Error::precondition(format!("the family needs n >= 6, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..FAMILY_RETRIES {
        let c = ConstMatrix::random(field, 2, n, &mut rng);
        if !generic_c(&c) {
            continue;
        }
        let a = ConstMatrix::random(field, n - 2, n, &mut rng);
        if c.vstack(&a)?.det()?.is_zero() {
            continue;
        }
        // (c_{u,j} x_j)_j is in the row span of a iff it is orthogonal to ker a
        let kernel = a.nullspace();
        debug_assert_eq!(kernel.len(), 2);
        let mut conditions = ConstMatrix::zeros(field, 4, n);
        for u in 0..2 {
            for (t, k) in kernel.iter().enumerate() {
                for j in 0..n {
                    conditions.set(2 * u + t, j, field.mul(c.get(u, j), k[j]));
                }
            }
        }
        let e = conditions.nullspace();
        let mut xi = vec![field.zero(); n];
        for v in &e {
            let w = field.random(&mut rng);
            for (x, &vj) in xi.iter_mut().zip(v) {
                *x = field.add(*x, field.mul(w, vj));
            }
        }
        if xi[0].is_zero() || xi[1].is_zero() {
            continue;
        }
        let rhs = |u: usize| {
            (0..n).fold(field.zero(), |acc, j| {
                field.add(acc, field.mul(c.get(u, j), field.mul(xi[j], xi[j])))
            })
        };
        let (c1, c2) = (rhs(0), rhs(1));
        // c_1 / c_{1,j} != c_2 / c_{2,j}
        if (0..n).any(|j| field.mul(c1, c.get(1, j)) == field.mul(c2, c.get(0, j))) {
            continue;
        }
        let f1 = diagonal_quadric(field, c.row(0), c1);
        let f2 = diagonal_quadric(field, c.row(1), c2);
        if !verify_smooth_complete_intersection(&[f1.clone(), f2.clone()], budget)?.passed() {
            continue;
        }
        return Ok(Family31Instance {
            n,
            field,
            c,
            a,
            c1,
            c2,
            f1,
            f2,
            xi: Point::new(xi),
            e_dim: e.len(),
        });
    }
    Err(Error::RetriesExhausted(format!(
        "no generic instance for n = {n} in {FAMILY_RETRIES} draws"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub n: usize,
    pub on_s: bool,
    pub det_vanishes: bool,
    pub gradient_vanishes: bool,
    /// `∂_j det N = 2(c_{2,j} m_{1,j} + c_{1,j} m_{2,j})` for every `j`.
    pub identity_swapped: bool,
    /// 1-based `j` where the swapped form fails.
    pub identity_swapped_failures: Vec<usize>,
    /// `∂_j det N = 2(c_{1,j} m_{1,j} + c_{2,j} m_{2,j})` for every `j`
    /// (Jacobi's formula, row `u` of `N` holding the derivatives of `F_u`).
    pub identity_cofactor: bool,
    pub rank_with_det: usize,
    pub rank_f: usize,
    pub polar_dim: i64,
    pub singular_generators: usize,
    pub singular_generators_vanish: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.on_s
            && self.det_vanishes
            && self.gradient_vanishes
            && self.identity_cofactor
            && self.rank_with_det == 2
            && self.rank_f == 2
            && self.polar_dim == self.n as i64 - 3
            && self.singular_generators_vanish
    }
}

/// `m_{u,l}`: the signed `(n-1)`-minor of `N` deleting row `u` and column
/// `l`, i.e. the cofactor.
pub fn cofactors(n_star: &PolyMatrix, u: usize) -> Result<Vec<Polynomial>> {
    let n = n_star.cols();
    let rows: Vec<usize> = (0..n).filter(|&r| r != u).collect();
    (0..n)
        .map(|l| {
            let cols: Vec<usize> = (0..n).filter(|&c| c != l).collect();
            let d = n_star.submatrix(&rows, &cols).determinant()?;
            Ok(if (u + l) % 2 == 1 { -&d } else { d })
        })
        .collect()
}

pub fn verify_singular_witness(
    inst: &Family31Instance,
    opts: &SingularOptions,
    budget: &Budget,
) -> Result<WitnessReport> {
    let (field, n) = (inst.field, inst.n);
    let xi = &inst.xi;
    let on_s = inst.f1.evaluate(xi)?.is_zero() && inst.f2.evaluate(xi)?.is_zero();

    let n_star = inst.n_star();
    let det = n_star.determinant()?;
    let det_vanishes = det.evaluate(xi)?.is_zero();
    let gradient = det.gradient();
    let mut gradient_vanishes = true;
    for g in &gradient {
        gradient_vanishes &= g.evaluate(xi)?.is_zero();
    }

    let m1 = cofactors(&n_star, 0)?;
    let m2 = cofactors(&n_star, 1)?;
    let two = field.elem(2);
    let mut identity_swapped_failures = Vec::new();
    let mut identity_cofactor = true;
    for j in 0..n {
        let (c1j, c2j) = (inst.c.get(0, j), inst.c.get(1, j));
        let swapped = (&m1[j].scale(c2j) + &m2[j].scale(c1j)).scale(two);
        let cofactor = (&m1[j].scale(c1j) + &m2[j].scale(c2j)).scale(two);
        if gradient[j] != swapped {
            identity_swapped_failures.push(j + 1);
        }
        identity_cofactor &= gradient[j] == cofactor;
    }

    let with_det = PolyMatrix::jacobian(&[inst.f1.clone(), inst.f2.clone(), det.clone()])?;
    let rank_with_det = with_det.rank_at(xi)?;
    let rank_f = PolyMatrix::jacobian(&inst.polys())?.rank_at(xi)?;

    let w = polar_ideal(&inst.polar_spec()?, budget)?;
    let minors = if w.is_empty() {
        Vec::new()
    } else {
        jacobian_criterion_minors(&w, opts)?
    };
    let mut singular_generators_vanish = true;
    for g in w.ideal.generators().iter().chain(&minors) {
        singular_generators_vanish &= g.evaluate(xi)?.is_zero();
    }

    Ok(WitnessReport {
        n,
        on_s,
        det_vanishes,
        gradient_vanishes,
        identity_swapped: identity_swapped_failures.is_empty(),
        identity_swapped_failures,
        identity_cofactor,
        rank_with_det,
        rank_f,
        polar_dim: w.dim,
        singular_generators: w.ideal.len() + minors.len(),
        singular_generators_vanish,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::rng;
    use rand::Rng;

    #[test]
    fn instance_invariants() {
        let field = PrimeField::default();
        let budget = Budget::default();
        for seed in 0..3 {
            let inst = build_family_31(field, 6, seed, &budget).unwrap();
            assert!(inst.e_dim >= inst.n - 4);
            assert!(generic_c(&inst.c));
            assert!(!inst.c.vstack(&inst.a).unwrap().det().unwrap().is_zero());
            assert!(!inst.xi[0].is_zero() && !inst.xi[1].is_zero());
            assert!(inst.f1.evaluate(&inst.xi).unwrap().is_zero());
            assert!(inst.f2.evaluate(&inst.xi).unwrap().is_zero());
            // N has rank n-2 at ξ
            assert_eq!(inst.n_star().rank_at(&inst.xi).unwrap(), inst.n - 2);
        }
    }

    #[test]
    fn small_n_rejected() {
        let r = build_family_31(PrimeField::default(), 5, 0, &Budget::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn witness_for_n6() {
        let field = PrimeField::default();
        let budget = Budget::default();
        let inst = build_family_31(field, 6, 42, &budget).unwrap();
        let report = verify_singular_witness(&inst, &SingularOptions::default(), &budget).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.polar_dim, 3);
        // the swapped pairing of cofactors and coefficients is not an identity
        assert!(!report.identity_swapped);
    }

    #[test]
    fn derivative_matches_cofactor_expansion_oracle() {
        // independent check of Jacobi's formula on random two-row matrices:
        // differentiate det N numerically along each axis via the exact
        // difference quotient of a degree-2 polynomial in t
        let field = PrimeField::default();
        let budget = Budget::default();
        let mut r = rng(5);
        for seed in 0..20 {
            let inst = build_family_31(field, 6, 100 + seed, &budget).unwrap();
            let det = inst.n_star().determinant().unwrap();
            let x = Point::new((0..6).map(|_| field.random(&mut r)).collect());
            let j = r.gen_range(0..6);
            // det is at most quadratic in X_j: D'(0) = (4 D(1) - D(2) - 3 D(0)) / 2
            let at = |t: u64| {
                let mut c = x.coords().to_vec();
                c[j] = field.add(c[j], field.elem(t));
                det.evaluate(&Point::new(c)).unwrap()
            };
            let num = field.sub(field.sub(field.mul(field.elem(4), at(1)), at(2)), field.mul(field.elem(3), at(0)));
            let deriv = field.div(num, field.elem(2)).unwrap();
            let n_star = inst.n_star();
            let m1 = cofactors(&n_star, 0).unwrap();
            let m2 = cofactors(&n_star, 1).unwrap();
            let (c1j, c2j) = (inst.c.get(0, j), inst.c.get(1, j));
            let formula = field.mul(
                field.elem(2),
                field.add(
                    field.mul(c1j, m1[j].evaluate(&x).unwrap()),
                    field.mul(c2j, m2[j].evaluate(&x).unwrap()),
                ),
            );
            assert_eq!(deriv, formula);
        }
    }
}
