//! Exponent vectors under the degree-reverse-lexicographic order with
//! `x1 > x2 > ... > xn`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the number of variables a monomial can carry.
pub const MAX_VARS: usize = 16;

/// A power product `x1^e1 * ... * xn^en`.
///
/// Exponents are stored inline; unused slots stay zero so that comparisons
/// never need to look at the ambient variable count.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    degree: u32,
    nvars: u8,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Monomial {
            exps: [0; MAX_VARS],
            degree: 0,
            nvars: nvars as u8,
        }
    }

    /// The variable `x_{var+1}` (0-based index).
    pub fn var(nvars: usize, var: usize) -> Result<Self> {
        if var >= nvars {
            return Err(Error::VariableIndex { index: var, nvars });
        }
        let mut m = Monomial::one(nvars);
        m.exps[var] = 1;
        m.degree = 1;
        Ok(m)
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::structural(format!(
                "{} variables requested, at most {MAX_VARS} supported",
                exps.len()
            )));
        }
        let mut m = Monomial::one(exps.len());
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).map_err(|_| Error::ExponentOverflow)?;
            m.degree += e;
        }
        Ok(m)
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.exps[..self.nvars as usize]
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u16 {
        self.exps[var]
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Bit `j` set iff `x_{j+1}` occurs.
    #[inline]
    pub fn support(&self) -> u32 {
        let mut mask = 0u32;
        for (j, &e) in self.exps.iter().enumerate() {
            if e != 0 {
                mask |= 1 << j;
            }
        }
        mask
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = *self;
        for (a, &b) in out.exps.iter_mut().zip(&other.exps) {
            *a = a.checked_add(b)?;
        }
        out.degree = self.degree + other.degree;
        out.nvars = self.nvars.max(other.nvars);
        Some(out)
    }

    /// Product; panics on exponent overflow (exponents are bounded by 65535).
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = *self;
        for (a, &b) in out.exps.iter_mut().zip(&other.exps) {
            *a -= b;
        }
        out.degree = self.degree - other.degree;
        Some(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        let mut degree = 0;
        for (a, &b) in out.exps.iter_mut().zip(&other.exps) {
            *a = (*a).max(b);
            degree += *a as u32;
        }
        out.degree = degree;
        out
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        let mut degree = 0;
        for (a, &b) in out.exps.iter_mut().zip(&other.exps) {
            *a = (*a).min(b);
            degree += *a as u32;
        }
        out.degree = degree;
        out
    }

    #[inline]
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.support() & other.support() == 0
    }

    /// Partial derivative bookkeeping: lowers the exponent of `var` by one and
    /// returns the old exponent, or `None` if the variable is absent.
    pub fn lower(&self, var: usize) -> Option<(Monomial, u16)> {
        let e = self.exps[var];
        if e == 0 {
            return None;
        }
        let mut out = *self;
        out.exps[var] -= 1;
        out.degree -= 1;
        Some((out, e))
    }

    /// Same exponents viewed in a ring with `nvars` variables (must not drop
    /// occurring variables).
    pub fn with_nvars(&self, nvars: usize) -> Result<Monomial> {
        if nvars > MAX_VARS || self.exps[nvars.min(MAX_VARS)..].iter().any(|&e| e != 0) {
            return Err(Error::structural("cannot change ambient variable count"));
        }
        let mut out = *self;
        out.nvars = nvars as u8;
        Ok(out)
    }

    pub(crate) fn set_exponent(&mut self, var: usize, e: u16) {
        self.degree = self.degree - self.exps[var] as u32 + e as u32;
        self.exps[var] = e;
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for j in (0..MAX_VARS).rev() {
            match self.exps[j].cmp(&other.exps[j]) {
                Ordering::Equal => continue,
                // a smaller power of the last differing variable wins
                ord => return ord.reverse(),
            }
        }
        self.nvars.cmp(&other.nvars)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &e) in self.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", j + 1)?;
            } else {
                write!(f, "x{}^{}", j + 1, e)?;
            }
        }
        Ok(())
    }
}
