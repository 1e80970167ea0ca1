//! Gaussian elimination on the coefficient vectors of a generator list.

use std::collections::HashMap;

use crate::monomial::Monomial;
use crate::poly::{Polynomial, Term};

use super::reduce::sub_scaled;

/// Reduced row echelon form of the span of `polys`, one monic polynomial per
/// pivot. Leading monomials are distinct and no element contains another
/// element's leading monomial. The span (and hence the ideal) is unchanged.
pub fn linear_interreduce(polys: Vec<Polynomial>) -> Vec<Polynomial> {
    let Some(first) = polys.iter().find(|p| !p.is_zero()) else {
        return Vec::new();
    };
    let (field, nvars) = (first.field(), first.nvars());
    let one = Monomial::one(nvars);
    let mut rows: Vec<Polynomial> = Vec::new();
    let mut pivot: HashMap<Monomial, usize> = HashMap::new();

    for f in polys {
        // eliminate every pivot monomial from f
        let mut rest = f.into_terms();
        let mut out: Vec<Term> = Vec::new();
        let mut pos = 0;
        while pos < rest.len() {
            let (m, c) = rest[pos];
            if let Some(&k) = pivot.get(&m) {
                rest = sub_scaled(field, &rest[pos + 1..], &rows[k].terms()[1..], &one, c);
                pos = 0;
            } else {
                out.push((m, c));
                pos += 1;
            }
        }
        if out.is_empty() {
            continue;
        }
        let r = Polynomial::from_sorted_terms(field, nvars, out).make_monic();
        let lm = r.leading_monomial().unwrap();
        // back-substitute into earlier rows
        for row in rows.iter_mut() {
            if let Some(c) = coefficient(row, &lm) {
                let terms = sub_scaled(field, row.terms(), r.terms(), &one, c);
                *row = Polynomial::from_sorted_terms(field, nvars, terms);
            }
        }
        pivot.insert(lm, rows.len());
        rows.push(r);
    }
    rows
}

fn coefficient(p: &Polynomial, m: &Monomial) -> Option<crate::field::FieldElement> {
    p.terms()
        .binary_search_by(|t| m.cmp(&t.0))
        .ok()
        .map(|k| p.terms()[k].1)
}
