//! Constant and polynomial matrices: Jacobians, Berkowitz determinants, lazy
//! minor enumeration and rank at a point.

use std::fmt;

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::poly::{Point, Polynomial};

/// Determinants are only taken of matrices up to this size.
pub const MAX_DET_SIZE: usize = 12;

/// Dense matrix over the prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConstMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl ConstMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::structural(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ConstMatrix { field, rows, cols, entries })
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        ConstMatrix {
            field,
            rows,
            cols,
            entries: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = ConstMatrix::zeros(field, n, n);
        for k in 0..n {
            m.set(k, k, field.one());
        }
        m
    }

    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::structural("ragged matrix rows"));
        }
        let entries = rows.iter().flatten().map(|&v| field.from_i64(v)).collect();
        ConstMatrix::new(field, rows.len(), cols, entries)
    }

    /// Reads a JSON array of rows of integers; values are reduced mod q.
    pub fn from_json(text: &str, field: PrimeField) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("matrix JSON: {e}")))?;
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Input("matrix JSON must be an array of rows".into()))?;
        if rows.is_empty() {
            return Err(Error::Input("matrix JSON has no rows".into()));
        }
        let mut out = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Input(format!("matrix row {} is not an array", r + 1)))?;
            let parsed = row
                .iter()
                .map(|v| json_integer(v, field))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Input(format!("matrix row {}: {e}", r + 1)))?;
            out.push(parsed);
        }
        let cols = out[0].len();
        if cols == 0 || out.iter().any(|r| r.len() != cols) {
            return Err(Error::Input("matrix rows must be nonempty and of equal length".into()));
        }
        ConstMatrix::new(field, out.len(), cols, out.into_iter().flatten().collect())
    }

    /// Rows of canonical residues, the inverse of [`ConstMatrix::from_json`].
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| self.row(r).iter().map(|e| e.value()).collect::<Vec<_>>().into())
                .collect(),
        )
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let entries = (0..rows * cols).map(|_| field.random(rng)).collect();
        ConstMatrix { field, rows, cols, entries }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Rows `range` as a new matrix.
    pub fn row_slice(&self, range: std::ops::Range<usize>) -> ConstMatrix {
        ConstMatrix {
            field: self.field,
            rows: range.len(),
            cols: self.cols,
            entries: self.entries[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ConstMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect();
        ConstMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Columns `range`, all rows.
    pub fn col_slice(&self, range: std::ops::Range<usize>) -> ConstMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = range.collect();
        self.select(&rows, &cols)
    }

    pub fn transpose(&self) -> ConstMatrix {
        let mut t = ConstMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn vstack(&self, other: &ConstMatrix) -> Result<ConstMatrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::structural("vstack of incompatible matrices"));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        ConstMatrix::new(self.field, self.rows + other.rows, self.cols, entries)
    }

    pub fn mul(&self, other: &ConstMatrix) -> Result<ConstMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::structural("matrix product shape mismatch"));
        }
        let f = self.field;
        let mut out = ConstMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::structural("matrix-vector shape mismatch"));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (ConstMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                m.set(row, c, f.mul(m.get(row, c), inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn has_full_row_rank(&self) -> bool {
        self.rank() == self.rows
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::structural("determinant of a non-square matrix"));
        }
        let f = self.field;
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..m.cols {
            let Some(piv) = (col..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(f.zero());
            };
            if piv != col {
                m.swap_rows(col, piv);
                det = f.neg(det);
            }
            let p = m.get(col, col);
            det = f.mul(det, p);
            let inv = f.inv(p).expect("pivot is nonzero");
            for r in col + 1..m.rows {
                let factor = f.mul(m.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<ConstMatrix> {
        if self.rows != self.cols {
            return Err(Error::structural("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut aug = ConstMatrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, self.field.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Degenerate("matrix is singular".into()));
        }
        Ok(red.col_slice(n..2 * n))
    }
}

fn json_integer(v: &serde_json::Value, field: PrimeField) -> Result<FieldElement> {
    if let Some(i) = v.as_i64() {
        return Ok(field.from_i64(i));
    }
    if let Some(u) = v.as_u64() {
        return Ok(field.elem(u));
    }
    Err(Error::Input(format!("expected an integer, found {v}")))
}

impl fmt::Debug for ConstMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells = self.row(r).iter().map(|e| self.field.to_signed(*e)).join(", ");
            writeln!(f, "[{cells}]")?;
        }
        Ok(())
    }
}

/// Matrix with polynomial entries over a common ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: PrimeField,
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::structural("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::structural(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let (field, nvars) = (entries[0].field(), entries[0].nvars());
        if entries.iter().any(|e| e.field() != field || e.nvars() != nvars) {
            return Err(Error::structural("matrix entries live in different rings"));
        }
        Ok(PolyMatrix { field, nvars, rows, cols, entries })
    }

    pub fn from_const(m: &ConstMatrix, nvars: usize) -> Self {
        let entries = m
            .entries
            .iter()
            .map(|&c| Polynomial::constant(m.field, nvars, c))
            .collect();
        PolyMatrix {
            field: m.field,
            nvars,
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }

    /// `J(F) = [dF_k/dx_l]`, one row per polynomial.
    pub fn jacobian(polys: &[Polynomial]) -> Result<Self> {
        let first = polys
            .first()
            .ok_or_else(|| Error::structural("Jacobian of an empty system"))?;
        let n = first.nvars();
        if polys.iter().any(|p| p.nvars() != n || p.field() != first.field()) {
            return Err(Error::structural("Jacobian of polynomials in different rings"));
        }
        let entries = polys.iter().flat_map(Polynomial::gradient).collect();
        PolyMatrix::new(polys.len(), n, entries)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Polynomial) {
        assert_eq!(v.nvars(), self.nvars);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Polynomial] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn vstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.cols {
            return Err(Error::structural("vstack with different column counts"));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        PolyMatrix::new(self.rows + other.rows, self.cols, entries)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        PolyMatrix {
            field: self.field,
            nvars: self.nvars,
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// The matrix with row `r` removed.
    pub fn delete_row(&self, r: usize) -> PolyMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&k| k != r).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&keep, &cols)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        PolyMatrix {
            field: self.field,
            nvars: self.nvars,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::structural("matrix product shape mismatch"));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Polynomial::zero(self.field, self.nvars);
                for k in 0..self.cols {
                    acc = acc.try_add(&self.get(r, k).try_mul(other.get(k, c))?)?;
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.rows, other.cols, entries)
    }

    pub fn evaluate(&self, x: &Point) -> Result<ConstMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.evaluate(x))
            .collect::<Result<Vec<_>>>()?;
        ConstMatrix::new(self.field, self.rows, self.cols, entries)
    }

    /// Rank of the evaluated matrix over the prime field.
    pub fn rank_at(&self, x: &Point) -> Result<usize> {
        Ok(self.evaluate(x)?.rank())
    }

    /// Division-free determinant (Berkowitz). Each leading principal block
    /// `[[A, C], [R, a]]` contributes a lower-triangular Toeplitz factor with
    /// first column `(1, -a, -RC, -RAC, ..., -RA^{k-2}C)`; the product of all
    /// factors applied to `(1)` is the characteristic polynomial.
    pub fn determinant(&self) -> Result<Polynomial> {
        self.determinant_reduced(|f| f)
    }

    /// Berkowitz with every intermediate entry passed through `reduce`. When
    /// `reduce` maps each polynomial to a representative of its class modulo
    /// an ideal (a normal form), the result is congruent to the determinant.
    pub fn determinant_reduced(&self, reduce: impl Fn(Polynomial) -> Polynomial) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::structural(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n > MAX_DET_SIZE {
            return Err(Error::precondition(format!(
                "determinant size {n} exceeds {MAX_DET_SIZE}"
            )));
        }
        let m: Vec<Polynomial> = self.entries.iter().map(|e| reduce(e.clone())).collect();
        let get = |r: usize, c: usize| &m[r * n + c];
        let zero = Polynomial::zero(self.field, self.nvars);
        let mut p = vec![Polynomial::one(self.field, self.nvars)];
        for k in 1..=n {
            let last = k - 1;
            let a = get(last, last);
            let mut t = Vec::with_capacity(k + 1);
            t.push(Polynomial::one(self.field, self.nvars));
            t.push(-a);
            // v runs through C, AC, A^2C, ...
            let mut v: Vec<Polynomial> = (0..last).map(|r| get(r, last).clone()).collect();
            for _ in 0..last {
                let mut rv = zero.clone();
                for (c, vc) in v.iter().enumerate() {
                    rv = &rv + &(get(last, c) * vc);
                }
                t.push(-&reduce(rv));
                v = (0..last)
                    .map(|r| {
                        reduce(
                            v.iter()
                                .enumerate()
                                .fold(zero.clone(), |acc, (c, vc)| &acc + &(get(r, c) * vc)),
                        )
                    })
                    .collect();
            }
            let next: Vec<Polynomial> = (0..=k)
                .map(|r| {
                    reduce(
                        (0..k.min(r + 1))
                            .filter(|&c| r - c < t.len())
                            .fold(zero.clone(), |acc, c| &acc + &(&t[r - c] * &p[c])),
                    )
                })
                .collect();
            p = next;
        }
        let det = p.pop().expect("characteristic vector is nonempty");
        Ok(if n % 2 == 1 { -&det } else { det })
    }

    /// Index pairs of all `r`-minors in lexicographic (row set, column set) order.
    pub fn minor_indices(&self, r: usize) -> Result<impl Iterator<Item = (Vec<usize>, Vec<usize>)>> {
        if r == 0 || r > self.rows.min(self.cols) {
            return Err(Error::structural(format!(
                "minor size {r} out of range for a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let cols = self.cols;
        Ok((0..self.rows).combinations(r).flat_map(move |rs| {
            (0..cols).combinations(r).map(move |cs| (rs.clone(), cs))
        }))
    }

    /// Number of `r`-minors, saturating.
    pub fn minor_count(&self, r: usize) -> u128 {
        binomial(self.rows, r).saturating_mul(binomial(self.cols, r))
    }

    /// Lazily computed `r`-minors in lexicographic order.
    pub fn minors(&self, r: usize) -> Result<impl Iterator<Item = Polynomial> + '_> {
        Ok(self.minor_indices(r)?.map(move |(rs, cs)| {
            self.submatrix(&rs, &cs)
                .determinant()
                .expect("square submatrix within size limit")
        }))
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// Rank of `m` evaluated at `x`.
pub fn rank_at_point(m: &PolyMatrix, x: &Point) -> Result<usize> {
    m.rank_at(x)
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "[{}]", self.row(r).iter().join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::parse::parse_polynomial;
    use crate::testing::{random_poly, rng};

    fn fq() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn pm(rows: usize, cols: usize, n: usize, text: &[&str]) -> PolyMatrix {
        let entries = text.iter().map(|t| parse_polynomial(t, fq(), n).unwrap()).collect();
        PolyMatrix::new(rows, cols, entries).unwrap()
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(m: &PolyMatrix) -> Polynomial {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = Polynomial::zero(m.field(), m.nvars());
        for c in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
            let term = m.get(0, c) * &cofactor_det(&m.submatrix(&rows, &cols));
            acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn random_matrix(seed: u64, size: usize, nvars: usize) -> PolyMatrix {
        let mut r = rng(seed);
        let entries = (0..size * size)
            .map(|_| random_poly(&mut r, fq(), nvars, 2, 3))
            .collect();
        PolyMatrix::new(size, size, entries).unwrap()
    }

    #[test]
    fn small_determinants() {
        let id = PolyMatrix::from_const(&ConstMatrix::identity(fq(), 3), 2);
        assert_eq!(id.determinant().unwrap(), Polynomial::one(fq(), 2));
        let m = pm(2, 2, 4, &["x1", "x2", "x3", "x4"]);
        assert_eq!(
            m.determinant().unwrap(),
            parse_polynomial("x1*x4 - x2*x3", fq(), 4).unwrap()
        );
        let single = pm(1, 1, 1, &["x1 + 5"]);
        assert_eq!(single.determinant().unwrap().to_string(), "x1 + 5");
        assert!(pm(1, 2, 1, &["x1", "1"]).determinant().is_err());
    }

    #[test]
    fn berkowitz_matches_cofactor_oracle() {
        for seed in 0..50 {
            let size = 4 + (seed as usize % 2);
            let m = random_matrix(seed, size, 3);
            assert_eq!(m.determinant().unwrap(), cofactor_det(&m), "seed {seed}");
        }
    }

    #[test]
    fn row_swap_negates() {
        for seed in 100..110 {
            let m = random_matrix(seed, 3, 2);
            let swapped = m.submatrix(&[1, 0, 2], &[0, 1, 2]);
            assert_eq!(swapped.determinant().unwrap(), -&m.determinant().unwrap());
        }
    }

    #[test]
    fn constant_det_is_multiplicative() {
        let f = fq();
        let mut r = rng(5);
        for _ in 0..20 {
            let a = ConstMatrix::random(f, 4, 4, &mut r);
            let b = ConstMatrix::random(f, 4, 4, &mut r);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.det().unwrap(), f.mul(a.det().unwrap(), b.det().unwrap()));
            let pa = PolyMatrix::from_const(&a, 1).determinant().unwrap();
            assert_eq!(pa.constant_term(), a.det().unwrap());
        }
    }

    #[test]
    fn jacobian_examples() {
        let circle = parse_polynomial("x1^2 + x2^2 - 1", fq(), 2).unwrap();
        let j = PolyMatrix::jacobian(&[circle]).unwrap();
        assert_eq!(j.row(0).iter().join(" "), "2*x1 2*x2");
        let lin = vec![
            parse_polynomial("3*x1 - x2 + 4", fq(), 2).unwrap(),
            parse_polynomial("x2", fq(), 2).unwrap(),
        ];
        let j = PolyMatrix::jacobian(&lin).unwrap();
        assert_eq!(format!("{j:?}"), "[3, -1]\n[0, 1]\n");
        assert!(PolyMatrix::jacobian(&[]).is_err());
    }

    #[test]
    fn jacobian_entries_are_partials() {
        let mut r = rng(8);
        let polys: Vec<_> = (0..3).map(|_| random_poly(&mut r, fq(), 4, 3, 6)).collect();
        let polys: Vec<_> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        let j = PolyMatrix::jacobian(&polys).unwrap();
        for (k, f) in polys.iter().enumerate() {
            for l in 0..4 {
                assert_eq!(j.get(k, l), &f.differentiate(l).unwrap());
            }
        }
    }

    #[test]
    fn minor_enumeration_order_and_count() {
        let m = pm(2, 3, 3, &["x1", "x2", "x3", "1", "2", "3"]);
        let idx: Vec<_> = m.minor_indices(2).unwrap().map(|(_, c)| c).collect();
        assert_eq!(idx, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let minors: Vec<String> = m.minors(2).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(minors, vec!["-x2 + 2*x1", "-x3 + 3*x1", "-2*x3 + 3*x2"]
            .into_iter()
            .map(|s| parse_polynomial(s, fq(), 3).unwrap().to_string())
            .collect::<Vec<_>>());
        let ones: Vec<_> = m.minors(1).unwrap().collect();
        assert_eq!(ones.len(), 6);
        assert_eq!(ones[4], *m.get(1, 1));
        assert!(m.minors(3).is_err());
        assert!(m.minors(0).is_err());
        assert_eq!(m.minor_count(2), 3);
    }

    #[test]
    fn minors_equal_extracted_determinants() {
        let mut r = rng(12);
        let entries = (0..12).map(|_| random_poly(&mut r, fq(), 3, 2, 4)).collect();
        let m = PolyMatrix::new(3, 4, entries).unwrap();
        for ((rs, cs), minor) in m.minor_indices(2).unwrap().zip(m.minors(2).unwrap()) {
            assert_eq!(minor, cofactor_det(&m.submatrix(&rs, &cs)));
        }
    }

    #[test]
    fn rank_examples() {
        let f = fq();
        let x = Point::from_i64s(&f, &[3, 4]);
        let zero = PolyMatrix::from_const(&ConstMatrix::zeros(f, 2, 3), 2);
        assert_eq!(rank_at_point(&zero, &x).unwrap(), 0);
        let id = PolyMatrix::from_const(&ConstMatrix::identity(f, 4), 2);
        assert_eq!(rank_at_point(&id, &x).unwrap(), 4);
        assert!(rank_at_point(&id, &Point::from_i64s(&f, &[1])).is_err());
    }

    #[test]
    fn rank_is_largest_nonvanishing_minor() {
        // small field so that rank drops happen often
        let f = PrimeField::new(7).unwrap();
        let mut r = rng(21);
        for _ in 0..100 {
            let entries = (0..12).map(|_| random_poly(&mut r, f, 2, 2, 2)).collect();
            let m = PolyMatrix::new(3, 4, entries).unwrap();
            let x = Point::new(vec![f.random(&mut r), f.random(&mut r)]);
            let rank = rank_at_point(&m, &x).unwrap();
            assert!(rank <= 3);
            let oracle = (1..=3)
                .rev()
                .find(|&s| m.minors(s).unwrap().any(|d| !d.evaluate(&x).unwrap().is_zero()))
                .unwrap_or(0);
            assert_eq!(rank, oracle);
        }
    }

    #[test]
    fn stacking_full_rank_rows_never_lowers_rank() {
        let f = fq();
        let mut r = rng(31);
        for _ in 0..30 {
            let polys: Vec<_> = (0..2).map(|_| random_poly(&mut r, f, 4, 2, 6)).collect();
            if polys.iter().any(Polynomial::is_zero) {
                continue;
            }
            let a = ConstMatrix::random(f, 2, 4, &mut r);
            let stack = PolyMatrix::jacobian(&polys)
                .unwrap()
                .vstack(&PolyMatrix::from_const(&a, 4))
                .unwrap();
            let x = Point::new((0..4).map(|_| f.random(&mut r)).collect());
            assert!(stack.rank_at(&x).unwrap() >= a.rank());
        }
    }

    #[test]
    fn nullspace_and_inverse() {
        let f = fq();
        let a = ConstMatrix::from_i64_rows(f, &[vec![1, 2, 3], vec![2, 4, 7]]).unwrap();
        let ker = a.nullspace();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).unwrap().iter().all(|v| v.is_zero()));
        let b = ConstMatrix::from_i64_rows(f, &[vec![2, 1], vec![1, 1]]).unwrap();
        let prod = b.mul(&b.inverse().unwrap()).unwrap();
        assert_eq!(prod, ConstMatrix::identity(f, 2));
        let sing = ConstMatrix::from_i64_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = fq();
        let m = ConstMatrix::from_json("[[1, 0, -1], [0, 2, 3]]", f).unwrap();
        assert_eq!(m.get(0, 2), f.from_i64(-1));
        let again = ConstMatrix::from_json(&m.to_json().to_string(), f).unwrap();
        assert_eq!(again, m);
        assert!(ConstMatrix::from_json("[[1, 2], [3]]", f).is_err());
        assert!(ConstMatrix::from_json("[[1.5]]", f).is_err());
        assert!(ConstMatrix::from_json("{}", f).is_err());
    }
}
