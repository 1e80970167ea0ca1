//! Sparse multivariate polynomials over a prime field.
//!
//! Terms are kept strictly decreasing in degrevlex with no zero coefficients,
//! so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::monomial::{Monomial, MAX_VARS};

pub type Term = (Monomial, FieldElement);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: PrimeField,
    nvars: usize,
    terms: Vec<Term>,
}

/// A point of affine `n`-space over the prime field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<FieldElement>,
}

impl Point {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        Point { coords }
    }

    pub fn from_i64s(field: &PrimeField, values: &[i64]) -> Self {
        Point {
            coords: values.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl std::ops::Index<usize> for Point {
    type Output = FieldElement;
    fn index(&self, i: usize) -> &FieldElement {
        &self.coords[i]
    }
}

impl Polynomial {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Polynomial {
            field,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: FieldElement) -> Self {
        let mut p = Polynomial::zero(field, nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Polynomial::constant(field, nvars, field.one())
    }

    /// The coordinate function `x_{var+1}`.
    pub fn var(field: PrimeField, nvars: usize, var: usize) -> Result<Self> {
        let m = Monomial::var(nvars, var)?;
        Ok(Polynomial {
            field,
            nvars,
            terms: vec![(m, field.one())],
        })
    }

    pub fn monomial(field: PrimeField, m: Monomial, c: FieldElement) -> Self {
        let mut p = Polynomial::zero(field, m.nvars());
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Canonicalizes an arbitrary bag of terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(field: PrimeField, nvars: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert!(m.nvars() <= nvars);
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if matches!(out.last(), Some(t) if t.1.is_zero()) {
            out.pop();
        }
        let mut p = Polynomial { field, nvars, terms: out };
        for t in p.terms.iter_mut() {
            t.0 = t.0.with_nvars(nvars).expect("term uses more variables than the ring");
        }
        p
    }

    /// Wraps terms that are already strictly decreasing with nonzero coefficients.
    pub(crate) fn from_sorted_terms(field: PrimeField, nvars: usize, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial { field, nvars, terms }
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
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_unit() && self.terms[0].1.is_one()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coefficient(&self) -> Option<FieldElement> {
        self.terms.first().map(|t| t.1)
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.0.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Coefficient of the constant term.
    pub fn constant_term(&self) -> FieldElement {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => FieldElement::ZERO,
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::structural(format!(
                "field mismatch: q = {} vs q = {}",
                self.field.modulus(),
                other.field.modulus()
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::structural(format!(
                "ambient mismatch: {} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.merge(other, self.field.one()))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.merge(other, self.field.neg(self.field.one())))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.product(other))
    }

    /// `self + scale * other`, merged in one pass.
    fn merge(&self, other: &Polynomial, scale: FieldElement) -> Polynomial {
        let f = self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let c = f.mul(b[j].1, scale);
                    if !c.is_zero() {
                        out.push((b[j].0, c));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(a[i].1, f.mul(b[j].1, scale));
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = f.mul(t.1, scale);
            if !c.is_zero() {
                out.push((t.0, c));
            }
        }
        Polynomial::from_sorted_terms(f, self.nvars, out)
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.field, self.nvars);
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        // Multiplying a sorted polynomial by one term keeps it sorted, so the
        // product is a sum of `small.len()` sorted runs.
        let mut acc = large.mul_term(&small.terms[0].0, small.terms[0].1);
        for (m, c) in &small.terms[1..] {
            acc = acc.merge(&large.mul_term(m, *c), self.field.one());
        }
        acc
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field, self.nvars);
        }
        let f = self.field;
        let terms = self
            .terms
            .iter()
            .map(|(tm, tc)| (tm.mul(m), f.mul(*tc, c)))
            .collect();
        Polynomial::from_sorted_terms(f, self.nvars, terms)
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn make_monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).expect("leading coefficient is nonzero")),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    /// Formal partial derivative with respect to `x_{var+1}`.
    pub fn differentiate(&self, var: usize) -> Result<Polynomial> {
        if var >= self.nvars {
            return Err(Error::VariableIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        let f = self.field;
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (lowered, e) = m.lower(var)?;
                let c = f.mul(*c, f.elem(e as u64));
                (!c.is_zero()).then_some((lowered, c))
            })
            .collect();
        // Lowering one exponent can reorder terms of different degree classes.
        Ok(Polynomial::from_terms(f, self.nvars, terms))
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|j| self.differentiate(j).expect("index in range"))
            .collect()
    }

    /// Value at `x`. Powers of each coordinate are tabulated once, so every
    /// term costs one multiplication per occurring variable.
    pub fn evaluate(&self, x: &Point) -> Result<FieldElement> {
        if x.len() != self.nvars {
            return Err(Error::structural(format!(
                "point has {} coordinates, polynomial has {} variables",
                x.len(),
                self.nvars
            )));
        }
        let f = self.field;
        let mut max_exp = [0u16; MAX_VARS];
        for (m, _) in &self.terms {
            for (slot, &e) in max_exp.iter_mut().zip(m.exponents()) {
                *slot = (*slot).max(e);
            }
        }
        let powers: Vec<Vec<FieldElement>> = (0..self.nvars)
            .map(|j| {
                let mut row = Vec::with_capacity(max_exp[j] as usize + 1);
                let mut acc = f.one();
                row.push(acc);
                for _ in 0..max_exp[j] {
                    acc = f.mul(acc, x[j]);
                    row.push(acc);
                }
                row
            })
            .collect();
        let mut total = f.zero();
        for (m, c) in &self.terms {
            let mut v = *c;
            for (j, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    v = f.mul(v, powers[j][e as usize]);
                }
            }
            total = f.add(total, v);
        }
        Ok(total)
    }

    /// Same polynomial in a ring with `nvars >= self.nvars()` variables.
    pub fn extend_vars(&self, nvars: usize) -> Result<Polynomial> {
        if nvars < self.nvars {
            return Err(Error::structural("cannot shrink the ambient ring"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.with_nvars(nvars)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        // degrevlex on the old variables is unchanged by appending unused slots
        Ok(Polynomial::from_sorted_terms(self.field, nvars, terms))
    }

    /// Substitutes `x_j := values[j]` for every variable, each value being a
    /// polynomial in a common target ring.
    pub fn compose(&self, values: &[Polynomial]) -> Result<Polynomial> {
        if values.len() != self.nvars {
            return Err(Error::structural("substitution length mismatch"));
        }
        let target = values
            .first()
            .map(|v| (v.field, v.nvars))
            .unwrap_or((self.field, 0));
        let mut acc = Polynomial::zero(target.0, target.1);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target.0, target.1, *c);
            for (j, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    t = t.try_mul(&values[j].pow(e as u32))?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    /// Prints in the input grammar, e.g. `x1^2 + 2*x2 - 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = self.field.to_signed(*c);
            let (neg, mag) = (s < 0, s.unsigned_abs());
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<'a> $trait<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$inner(rhs).expect("incompatible polynomial operands")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$inner(&rhs).expect("incompatible polynomial operands")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.field.neg(self.field.one()))
    }
}
