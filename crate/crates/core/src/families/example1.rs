//! The unipotent coordinate change `A(Z) = diag(I_{p-1}, Z)` with `Z` lower
//! unitriangular of size `n-p+1`, and the rows `B_i` of its inverse.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{ConstMatrix, PolyMatrix};
use crate::poly::{Point, Polynomial};

use super::MeagerMatrixZ;

/// Number of parameters `Z_{r,t}`, `p <= t < r <= n`.
pub fn parameter_count(n: usize, p: usize) -> usize {
    (n - p) * (n - p + 1) / 2
}

fn check_shape(n: usize, p: usize, i: usize) -> Result<()> {
    if p == 0 || p >= n {
        return Err(Error::precondition(format!("need 1 <= p <= n-1, got p = {p}, n = {n}")));
    }
    if i == 0 || i > n - p {
        return Err(Error::precondition(format!("need 1 <= i <= n-p = {}, got i = {i}", n - p)));
    }
    Ok(())
}

/// Positions `(row, col, parameter)` of the free entries of `A`, 0-based,
/// parameters ordered row by row.
fn parameter_slots(n: usize, p: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (p + 1..=n)
        .flat_map(move |r| (p..r).map(move |t| (r, t)))
        .enumerate()
        .map(|(k, (r, t))| (r - 1, t - 1, k))
}

fn numeric_a(field: PrimeField, n: usize, p: usize, z: &Point) -> ConstMatrix {
    let mut a = ConstMatrix::identity(field, n);
    for (r, c, k) in parameter_slots(n, p) {
        a.set(r, c, z[k]);
    }
    a
}

/// Forward substitution for a lower unitriangular constant matrix.
fn numeric_unitriangular_inverse(l: &ConstMatrix) -> ConstMatrix {
    let field = l.field();
    let n = l.rows();
    let mut x = ConstMatrix::identity(field, n);
    for r in 0..n {
        for c in 0..r {
            let s = (c..r).fold(field.zero(), |acc, k| field.add(acc, field.mul(l.get(r, k), x.get(k, c))));
            x.set(r, c, field.neg(s));
        }
    }
    x
}

/// Inverse of a lower unitriangular polynomial matrix, with polynomial
/// entries (no division is needed).
pub fn unitriangular_inverse(l: &PolyMatrix) -> Result<PolyMatrix> {
    let n = l.rows();
    if l.cols() != n {
        return Err(Error::structural("unitriangular inverse of a non-square matrix"));
    }
    for r in 0..n {
        if !l.get(r, r).is_one() || (r + 1..n).any(|c| !l.get(r, c).is_zero()) {
            return Err(Error::precondition("matrix is not lower unitriangular"));
        }
    }
    let (field, nvars) = (l.field(), l.nvars());
    let mut x = PolyMatrix::from_const(&ConstMatrix::identity(field, n), nvars);
    for r in 0..n {
        for c in 0..r {
            let mut s = Polynomial::zero(field, nvars);
            for k in c..r {
                s = &s + &(l.get(r, k) * x.get(k, c));
            }
            x.set(r, c, -&s);
        }
    }
    Ok(x)
}

fn check_identity(b: &ConstMatrix, a: &ConstMatrix, p: usize, i: usize) -> Result<()> {
    let prod = b.mul(a)?;
    let offset = p + i - 1;
    let field = b.field();
    for r in 0..prod.rows() {
        for c in 0..prod.cols() {
            let want = if c == offset + r { field.one() } else { field.zero() };
            if prod.get(r, c) != want {
                return Err(Error::structural(format!("B_i A differs from [O | I] at ({r}, {c})")));
            }
        }
    }
    Ok(())
}

/// `B_i(z)`, rows `p+i..n` of `A(z)^{-1}`, checked against `B_i A = [O | I]`.
pub fn example1_transform(field: PrimeField, n: usize, p: usize, i: usize, z: &Point) -> Result<MeagerMatrixZ> {
    check_shape(n, p, i)?;
    let s = parameter_count(n, p);
    if z.len() != s {
        return Err(Error::precondition(format!("expected {s} parameters, got {}", z.len())));
    }
    let a = numeric_a(field, n, p, z);
    let inv = numeric_unitriangular_inverse(&a);
    let b = inv.row_slice(p + i - 1..n);
    check_identity(&b, &a, p, i)?;
    Ok(MeagerMatrixZ {
        n,
        p,
        i,
        z: z.clone(),
        b,
    })
}

/// `A(Z)` and `B_i(Z)` with entries polynomials in the `s` parameters.
pub fn example1_symbolic(field: PrimeField, n: usize, p: usize, i: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    check_shape(n, p, i)?;
    let s = parameter_count(n, p);
    let mut a = PolyMatrix::from_const(&ConstMatrix::identity(field, n), s);
    for (r, c, k) in parameter_slots(n, p) {
        a.set(r, c, Polynomial::var(field, s, k)?);
    }
    let inv = unitriangular_inverse(&a)?;
    let rows: Vec<usize> = (p + i - 1..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    let b = inv.submatrix(&rows, &cols);
    Ok((a, b))
}

/// `B_{i+1}(z)` is `B_i(z)` without its first row, for every `i < n-p`.
pub fn example1_nesting_holds(field: PrimeField, n: usize, p: usize, z: &Point) -> Result<bool> {
    let all: Vec<MeagerMatrixZ> = (1..=n - p)
        .map(|i| example1_transform(field, n, p, i, z))
        .collect::<Result<_>>()?;
    Ok(all.windows(2).all(|w| {
        let (upper, lower) = (&w[0].b, &w[1].b);
        upper.row_slice(1..upper.rows()) == *lower
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::rng;

    fn random_point(field: PrimeField, len: usize, seed: u64) -> Point {
        let mut r = rng(seed);
        Point::new((0..len).map(|_| field.random(&mut r)).collect())
    }

    #[test]
    fn identity_holds_for_random_parameters() {
        let field = PrimeField::default();
        for n in 2..=7 {
            for p in 1..n {
                for i in 1..=n - p {
                    let z = random_point(field, parameter_count(n, p), (n * 100 + p * 10 + i) as u64);
                    let m = example1_transform(field, n, p, i, &z).unwrap();
                    assert_eq!(m.b.rows(), n - p - i + 1);
                    assert!(m.b.has_full_row_rank());
                }
            }
        }
    }

    #[test]
    fn zero_parameters_give_standard_rows() {
        let field = PrimeField::default();
        let (n, p, i) = (6, 2, 2);
        let z = Point::new(vec![field.zero(); parameter_count(n, p)]);
        let m = example1_transform(field, n, p, i, &z).unwrap();
        let id = ConstMatrix::identity(field, n);
        assert_eq!(m.b, id.row_slice(p + i - 1..n));
    }

    #[test]
    fn nesting_on_random_points() {
        let field = PrimeField::default();
        for seed in 0..10 {
            let (n, p) = (7, 2);
            let z = random_point(field, parameter_count(n, p), seed);
            assert!(example1_nesting_holds(field, n, p, &z).unwrap());
        }
    }

    #[test]
    fn symbolic_identity_and_specialization() {
        let field = PrimeField::default();
        for (n, p) in [(4, 1), (5, 2), (6, 3)] {
            for i in 1..=n - p {
                let (a, b) = example1_symbolic(field, n, p, i).unwrap();
                let prod = b.mul(&a).unwrap();
                for r in 0..prod.rows() {
                    for c in 0..n {
                        let e = prod.get(r, c);
                        if c == p + i - 1 + r {
                            assert!(e.is_one(), "entry ({r},{c}) = {e}");
                        } else {
                            assert!(e.is_zero(), "entry ({r},{c}) = {e}");
                        }
                    }
                }
                // evaluating the symbolic rows agrees with the numeric path
                let z = random_point(field, parameter_count(n, p), 77);
                let numeric = example1_transform(field, n, p, i, &z).unwrap();
                assert_eq!(b.evaluate(&z).unwrap(), numeric.b);
            }
        }
    }

    #[test]
    fn inverse_entries_are_polynomial() {
        // L * L^{-1} = I as polynomial matrices
        let field = PrimeField::default();
        let (a, _) = example1_symbolic(field, 5, 2, 1).unwrap();
        let inv = unitriangular_inverse(&a).unwrap();
        let prod = a.mul(&inv).unwrap();
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(prod.get(r, c).is_one(), r == c);
                if r != c {
                    assert!(prod.get(r, c).is_zero());
                }
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let field = PrimeField::default();
        let z = Point::new(vec![field.zero(); 2]);
        assert!(example1_transform(field, 4, 2, 1, &z).is_err());
        assert!(example1_transform(field, 4, 4, 1, &Point::new(vec![])).is_err());
        let z = Point::new(vec![field.zero(); 3]);
        assert!(example1_transform(field, 4, 2, 3, &z).is_err());
        assert!(unitriangular_inverse(&PolyMatrix::from_const(&ConstMatrix::zeros(field, 2, 2), 1)).is_err());
    }
}
