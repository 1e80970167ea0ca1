//! Multivariate division by a set of monic divisors.

use std::cmp::Ordering;

use crate::field::{FieldElement, PrimeField};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Term};

/// Divisors indexed by the support mask of their leading monomials.
pub(crate) struct Divisors<'a> {
    polys: Vec<&'a Polynomial>,
    lms: Vec<Monomial>,
    masks: Vec<u32>,
}

impl<'a> Divisors<'a> {
    pub fn new(polys: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        let polys: Vec<&Polynomial> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        debug_assert!(polys.iter().all(|p| p.leading_coefficient().unwrap().is_one()));
        let lms: Vec<Monomial> = polys.iter().map(|p| p.leading_monomial().unwrap()).collect();
        let masks = lms.iter().map(Monomial::support).collect();
        Divisors { polys, lms, masks }
    }

    pub fn find(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support();
        (0..self.lms.len()).find(|&k| self.masks[k] & !mask == 0 && self.lms[k].divides(m))
    }

    /// Remainder of the full division of `f`; every term of the result is
    /// irreducible.
    pub fn reduce_full(&self, f: Polynomial) -> Polynomial {
        let field = f.field();
        let nvars = f.nvars();
        let mut rest = f.into_terms();
        let mut out: Vec<Term> = Vec::new();
        let mut pos = 0;
        while pos < rest.len() {
            let (m, c) = rest[pos];
            match self.find(&m) {
                Some(k) => {
                    let g = self.polys[k];
                    let q = m.div(&self.lms[k]).expect("divisor checked");
                    rest = sub_scaled(field, &rest[pos + 1..], &g.terms()[1..], &q, c);
                    pos = 0;
                }
                None => {
                    out.push((m, c));
                    pos += 1;
                }
            }
        }
        Polynomial::from_sorted_terms(field, nvars, out)
    }
}

/// `a - c * q * b` for sorted term slices.
pub(crate) fn sub_scaled(field: PrimeField, a: &[Term], b: &[Term], q: &Monomial, c: FieldElement) -> Vec<Term> {
    let neg = field.neg(c);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bj = b.first().map(|t| (t.0.mul(q), t.1));
    while i < a.len() {
        let Some((bm, bc)) = bj else { break };
        match a[i].0.cmp(&bm) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, field.mul(bc, neg)));
                j += 1;
                bj = b.get(j).map(|t| (t.0.mul(q), t.1));
            }
            Ordering::Equal => {
                let v = field.add(a[i].1, field.mul(bc, neg));
                if !v.is_zero() {
                    out.push((bm, v));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|t| (t.0.mul(q), t.1));
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    if let Some((bm, bc)) = bj {
        out.push((bm, field.mul(bc, neg)));
        for t in &b[j + 1..] {
            out.push((t.0.mul(q), field.mul(t.1, neg)));
        }
    }
    out
}

/// S-polynomial of two monic polynomials.
pub(crate) fn spolynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lf.lcm(&lg);
    let (qf, qg) = (l.div(&lf).unwrap(), l.div(&lg).unwrap());
    let field = f.field();
    let a = f.mul_term(&qf, field.inv(f.leading_coefficient().unwrap()).unwrap());
    let terms = sub_scaled(
        field,
        &a.terms()[1..],
        &g.terms()[1..],
        &qg,
        field.inv(g.leading_coefficient().unwrap()).unwrap(),
    );
    Polynomial::from_sorted_terms(field, f.nvars(), terms)
}
