//! Buchberger's algorithm with the Gebauer–Möller installation of the chain
//! and product criteria and sugar-degree pair selection.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

use super::linear::linear_interreduce;
use super::reduce::{spolynomial, Divisors};
use super::{Budget, GroebnerBasis};

struct Element {
    poly: Polynomial,
    lm: Monomial,
    sugar: u32,
    active: bool,
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct State<'b> {
    elems: Vec<Element>,
    pairs: Vec<Pair>,
    budget: &'b Budget,
    active_count: usize,
}

impl State<'_> {
    fn pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (&self.elems[i], &self.elems[j]);
        let lcm = a.lm.lcm(&b.lm);
        let sugar = (a.sugar - a.lm.degree()).max(b.sugar - b.lm.degree()) + lcm.degree();
        Pair { i, j, lcm, sugar }
    }

    /// Gebauer–Möller update for a new element `h`.
    fn insert(&mut self, poly: Polynomial, sugar: u32) -> Result<()> {
        let lm = poly.leading_monomial().expect("nonzero element");
        if lm.degree() > self.budget.max_degree {
            return Err(Error::Budget(format!(
                "basis element of degree {} exceeds the degree cap {}",
                lm.degree(),
                self.budget.max_degree
            )));
        }
        let h = self.elems.len();
        self.elems.push(Element {
            poly,
            lm,
            sugar: sugar.max(lm.degree()),
            active: true,
        });

        let candidates: Vec<Pair> = (0..h)
            .filter(|&g| self.elems[g].active)
            .map(|g| self.pair(g, h))
            .collect();

        // chain criterion among the new pairs: drop (g1, h) whenever another
        // new pair has an lcm dividing its lcm (keeping one of equal lcms)
        let mut kept: Vec<Pair> = Vec::new();
        for (k, p) in candidates.iter().enumerate() {
            let coprime = self.elems[p.i].lm.is_coprime(&lm);
            let dominated = candidates[k + 1..].iter().any(|q| q.lcm.divides(&p.lcm))
                || kept.iter().any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(*p);
            }
        }
        // product criterion
        kept.retain(|p| !self.elems[p.i].lm.is_coprime(&lm));

        // old pairs made redundant by h
        let elems = &self.elems;
        self.pairs.retain(|p| {
            !(lm.divides(&p.lcm)
                && elems[p.i].lm.lcm(&lm) != p.lcm
                && elems[p.j].lm.lcm(&lm) != p.lcm)
        });
        self.pairs.extend(kept);

        for g in 0..h {
            if self.elems[g].active && lm.divides(&self.elems[g].lm) {
                self.elems[g].active = false;
                self.active_count -= 1;
            }
        }
        self.active_count += 1;
        if self.active_count > self.budget.max_basis {
            return Err(Error::Budget(format!(
                "working basis exceeds {} elements",
                self.budget.max_basis
            )));
        }
        Ok(())
    }

    /// Index of the pair with least sugar, ties broken by the smaller lcm.
    fn select(&self) -> Option<usize> {
        (0..self.pairs.len()).min_by(|&a, &b| {
            let (p, q) = (&self.pairs[a], &self.pairs[b]);
            p.sugar.cmp(&q.sugar).then(p.lcm.cmp(&q.lcm))
        })
    }
}

pub(crate) fn groebner(
    field: PrimeField,
    nvars: usize,
    generators: Vec<Polynomial>,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let mut gens = linear_interreduce(generators);
    if gens.iter().any(Polynomial::is_unit) {
        return Ok(GroebnerBasis::from_reduced(field, nvars, vec![Polynomial::one(field, nvars)]));
    }
    // smallest leading monomials first keeps early reductions cheap
    gens.sort_by_key(|g| g.leading_monomial().unwrap());

    let mut state = State {
        elems: Vec::new(),
        pairs: Vec::new(),
        budget,
        active_count: 0,
    };
    for g in gens {
        let sugar = g.degree() as u32;
        state.insert(g, sugar)?;
    }

    let mut processed = 0usize;
    while let Some(k) = state.select() {
        let pair = state.pairs.swap_remove(k);
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::Budget(format!(
                "more than {} S-pairs reduced",
                budget.max_pairs
            )));
        }
        let s = spolynomial(&state.elems[pair.i].poly, &state.elems[pair.j].poly);
        let h = {
            let div = Divisors::new(
                state.elems.iter().filter(|e| e.active).map(|e| &e.poly),
            );
            div.reduce_full(s)
        };
        if h.is_zero() {
            continue;
        }
        if h.is_unit() {
            return Ok(GroebnerBasis::from_reduced(field, nvars, vec![Polynomial::one(field, nvars)]));
        }
        state.insert(h.make_monic(), pair.sugar)?;
    }

    let survivors: Vec<Polynomial> = state
        .elems
        .into_iter()
        .filter(|e| e.active)
        .map(|e| e.poly)
        .collect();
    Ok(GroebnerBasis::from_reduced(field, nvars, interreduce(survivors)))
}

/// Minimalizes and fully interreduces a Gröbner basis.
fn interreduce(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.sort_by_key(|g| g.leading_monomial().unwrap());
    let mut minimal: Vec<Polynomial> = Vec::with_capacity(basis.len());
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !minimal.iter().any(|h| h.leading_monomial().unwrap().divides(&lm)) {
            minimal.push(g);
        }
    }
    (0..minimal.len())
        .map(|k| {
            let others = Divisors::new(
                minimal.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p),
            );
            others.reduce_full(minimal[k].clone()).make_monic()
        })
        .collect()
}
