//! Combinatorics of monomial ideals: independent sets, Hilbert series
//! numerators and standard monomials.

use crate::monomial::Monomial;

/// Numerator `N(t)` of the Hilbert series `N(t) / (1-t)^n` of a monomial
/// ideal; `coeffs[k]` is the coefficient of `t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertNumerator {
    pub coeffs: Vec<i64>,
}

impl HilbertNumerator {
    fn trim(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Cancels factors `(1 - t)`: with `N = (1-t)^k Q`, `Q(1) != 0`, returns
    /// `(n - k, Q(1))`. The zero numerator (unit ideal) gives `(-1, 0)`.
    pub fn dimension_and_degree(&self, nvars: usize) -> (i64, u64) {
        if self.is_zero() {
            return (-1, 0);
        }
        let mut q = self.coeffs.clone();
        let mut k = 0;
        while q.iter().sum::<i64>() == 0 {
            // N = (1 - t) Q  =>  q_i = n_i + q_{i-1}
            let mut next = Vec::with_capacity(q.len());
            let mut acc = 0;
            for &c in &q[..q.len() - 1] {
                acc += c;
                next.push(acc);
            }
            q = next;
            k += 1;
        }
        let degree = q.iter().sum::<i64>();
        debug_assert!(degree > 0, "Hilbert polynomial has positive leading coefficient");
        (nvars as i64 - k, degree as u64)
    }

    fn mul(&self, other: &HilbertNumerator) -> HilbertNumerator {
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        HilbertNumerator { coeffs: out }.trim()
    }

    fn add_shifted(mut self, other: &HilbertNumerator, shift: usize) -> HilbertNumerator {
        if self.coeffs.len() < other.coeffs.len() + shift {
            self.coeffs.resize(other.coeffs.len() + shift, 0);
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            self.coeffs[k + shift] += c;
        }
        self.trim()
    }

    fn one_minus_t_pow(d: u32) -> HilbertNumerator {
        let mut coeffs = vec![0i64; d as usize + 1];
        coeffs[0] += 1;
        coeffs[d as usize] -= 1;
        HilbertNumerator { coeffs }.trim()
    }
}

/// Keeps the divisibility-minimal monomials, sorted and deduplicated.
fn minimize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        // sorted by degree first, so any divisor of g is already in `out`
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Hilbert series numerator of the ideal generated by `gens`, computed by
/// pivot splitting `N(I) = N(I + <x_j>) + t N(I : x_j)`.
pub fn hilbert_numerator(gens: &[Monomial], nvars: usize) -> HilbertNumerator {
    let _ = nvars;
    numerator(minimize(gens.to_vec()))
}

fn numerator(gens: Vec<Monomial>) -> HilbertNumerator {
    if gens.is_empty() {
        return HilbertNumerator { coeffs: vec![1] };
    }
    if gens.iter().any(Monomial::is_one) {
        return HilbertNumerator { coeffs: vec![] };
    }
    let pairwise_coprime = {
        let mut seen = 0u32;
        gens.iter().all(|g| {
            let s = g.support();
            let ok = seen & s == 0;
            seen |= s;
            ok
        })
    };
    if pairwise_coprime {
        return gens.iter().fold(HilbertNumerator { coeffs: vec![1] }, |acc, g| {
            acc.mul(&HilbertNumerator::one_minus_t_pow(g.degree()))
        });
    }
    // pivot on the variable shared by the most generators
    let nslots = crate::monomial::MAX_VARS;
    let mut counts = vec![0usize; nslots];
    for g in &gens {
        for (j, c) in counts.iter_mut().enumerate() {
            if g.exponent(j) > 0 {
                *c += 1;
            }
        }
    }
    let j = (0..nslots).max_by_key(|&j| (counts[j], std::cmp::Reverse(j))).unwrap();
    let nvars = gens[0].nvars();
    let pivot = Monomial::var(nvars, j).expect("pivot variable in range");

    let mut with_pivot: Vec<Monomial> = gens.iter().filter(|g| g.exponent(j) == 0).copied().collect();
    with_pivot.push(pivot);
    let quotient: Vec<Monomial> = gens
        .iter()
        .map(|g| g.div(&g.gcd(&pivot)).unwrap())
        .collect();

    let left = numerator(minimize(with_pivot));
    let right = numerator(minimize(quotient));
    left.add_shifted(&right, 1)
}

/// Largest size of a variable subset containing the support of no
/// generator; `-1` if a generator is constant.
pub fn dimension_of_monomials(gens: &[Monomial], nvars: usize) -> i64 {
    if gens.iter().any(Monomial::is_one) {
        return -1;
    }
    let masks: Vec<u32> = minimize(gens.to_vec()).iter().map(Monomial::support).collect();
    let mut best = 0;
    search(&masks, nvars, 0, 0, 0, &mut best);
    best as i64
}

fn search(masks: &[u32], nvars: usize, next: usize, set: u32, size: usize, best: &mut usize) {
    if size + (nvars - next) <= *best {
        return;
    }
    if next == nvars {
        *best = size;
        return;
    }
    let with = set | (1 << next);
    if masks.iter().all(|&m| m & !with != 0) {
        search(masks, nvars, next + 1, with, size + 1, best);
    }
    search(masks, nvars, next + 1, set, size, best);
}

/// Exhaustive maximal independent set over all `2^n` subsets. Only for
/// small `n`; serves as a reference for [`dimension_of_monomials`].
pub fn independent_set_dimension(gens: &[Monomial], nvars: usize) -> i64 {
    if gens.iter().any(Monomial::is_one) {
        return -1;
    }
    (0u32..1 << nvars)
        .filter(|u| gens.iter().all(|g| g.support() & !u != 0))
        .map(|u| u.count_ones() as i64)
        .max()
        .unwrap_or(0)
}

/// Standard monomials of a zero-dimensional monomial ideal, at most `cap`.
pub fn standard_monomials(gens: &[Monomial], nvars: usize, cap: usize) -> Option<Vec<Monomial>> {
    if dimension_of_monomials(gens, nvars) != 0 {
        return None;
    }
    // every variable has a pure power among the generators
    let bounds: Vec<u32> = (0..nvars)
        .map(|j| {
            gens.iter()
                .filter(|g| g.support() == 1 << j)
                .map(|g| g.exponent(j) as u32)
                .min()
                .expect("zero-dimensional ideal has pure powers")
        })
        .collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    loop {
        let m = Monomial::from_exponents(&exps).ok()?;
        if !gens.iter().any(|g| g.divides(&m)) {
            out.push(m);
            if out.len() > cap {
                return None;
            }
        }
        // odometer over the box
        let mut k = 0;
        loop {
            if k == nvars {
                return Some(out);
            }
            exps[k] += 1;
            if exps[k] < bounds[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}
