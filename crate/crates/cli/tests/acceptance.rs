//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line with
//! the evidence it checked; run with `--nocapture` to see them.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::OnceLock;

use polar_core::experiment::{random_dense, run_grid, CellResult, GridSpec, Mode, RunConfig};
use polar_core::families::{
    build_family_31, degree_domination_check, draw_gamma, draw_smooth_quadrics, example2_chain,
    verify_singular_witness,
};
use polar_core::groebner::{is_reduced, spolynomials_reduce_to_zero};
use polar_core::polar::{incidence_fiber_dim, thom_boardman_class, SingularOptions};
use polar_core::{
    reduced_groebner_basis, Budget, ConstMatrix, Flavor, IdealPresentation, Monomial, Point, PolarSpec,
    PolyMatrix, Polynomial, PrimeField, DEFAULT_PRIME,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASTER_SEED: u64 = 2024;
const SEEDS: usize = 3;
const MAX_REDRAWS: usize = 5;

fn verdict(id: u32, pass: bool, detail: &str) {
    println!("criterion {id}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
}

fn grid(nmin: usize, nmax: usize, pmax: Option<usize>, mode: Mode, flavor: Flavor) -> Vec<CellResult> {
    let grid = GridSpec {
        nmin,
        nmax,
        pmax,
        seeds: SEEDS,
        mode,
        flavor,
        prime: DEFAULT_PRIME,
        master_seed: MASTER_SEED,
        redraw_budget: MAX_REDRAWS,
    };
    let config = RunConfig {
        budget: Budget::default(),
        singular: SingularOptions::default(),
        timing: false,
    };
    run_grid(&grid, &config).expect("grid runs")
}

fn full_classic() -> &'static [CellResult] {
    static CELLS: OnceLock<Vec<CellResult>> = OnceLock::new();
    CELLS.get_or_init(|| grid(2, 5, None, Mode::Full, Flavor::Classic))
}

fn full_dual() -> &'static [CellResult] {
    static CELLS: OnceLock<Vec<CellResult>> = OnceLock::new();
    CELLS.get_or_init(|| grid(2, 5, None, Mode::Full, Flavor::Dual))
}

fn delta_n6() -> &'static [CellResult] {
    static CELLS: OnceLock<Vec<CellResult>> = OnceLock::new();
    CELLS.get_or_init(|| grid(6, 6, Some(3), Mode::Delta, Flavor::Classic))
}

/// Δ_i dimensions for the same draws as the full-mode grids.
fn delta_all() -> &'static [CellResult] {
    static CELLS: OnceLock<Vec<CellResult>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let mut v = grid(2, 5, None, Mode::Delta, Flavor::Classic);
        v.extend(grid(2, 5, None, Mode::Delta, Flavor::Dual));
        v.extend(delta_n6().iter().cloned());
        v
    })
}

fn formula(n: usize, p: usize, i: usize) -> i64 {
    (-1i64).max(n as i64 - p as i64 - (2 * i as i64 + 2))
}

fn describe(cells: &[&CellResult]) -> String {
    cells
        .iter()
        .take(5)
        .map(|c| format!("({},{},{}) {}: {:?} vs {}", c.n, c.p, c.i, c.flavor, c.dim_sing, formula(c.n, c.p, c.i)))
        .collect::<Vec<_>>()
        .join("; ")
}

#[test]
fn criterion_01_scaled_replication() {
    let cells = full_classic();
    let triples: BTreeSet<_> = cells.iter().map(|c| (c.n, c.p, c.i)).collect();
    let want: BTreeSet<_> = (2..=5usize)
        .flat_map(|n| (1..n).flat_map(move |p| (1..=n - p).map(move |i| (n, p, i))))
        .collect();
    let bad: Vec<_> = cells
        .iter()
        .filter(|c| !c.completed() || c.dim_sing != Some(formula(c.n, c.p, c.i)))
        .collect();
    let redraws = cells.iter().map(|c| c.redraws_used).max().unwrap_or(0);
    let pass = triples == want && cells.len() == want.len() * SEEDS && bad.is_empty() && redraws <= MAX_REDRAWS;
    verdict(
        1,
        pass,
        &format!(
            "{} cells over {} triples, {} mismatches, max redraws {redraws}{}",
            cells.len(),
            triples.len(),
            bad.len(),
            if bad.is_empty() { String::new() } else { format!(": {}", describe(&bad)) }
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_02_delta_proxy_n6() {
    let cells = delta_n6();
    let bad: Vec<_> = cells
        .iter()
        .filter(|c| !c.completed() || c.dim_sing != Some(c.expected_dim_sing))
        .collect();
    let pass = cells.len() == 12 * SEEDS && bad.is_empty();
    verdict(
        2,
        pass,
        &format!(
            "n = 6, p <= 3: {} cells, {} mismatches; the published range up to n = 11 is not reproduced here",
            cells.len(),
            bad.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_hypersurfaces_smooth() {
    let cells: Vec<_> = full_classic()
        .iter()
        .chain(delta_n6())
        .filter(|c| c.completed() && c.p == 1)
        .collect();
    let bad: Vec<_> = cells.iter().copied().filter(|c| c.dim_sing != Some(-1)).collect();
    let pass = !cells.is_empty() && bad.is_empty();
    verdict(3, pass, &format!("{} classic p = 1 cells, {} with a singular point", cells.len(), bad.len()));
    assert!(pass);
}

#[test]
fn criterion_04_smoothness_zone() {
    let cells: Vec<_> = full_classic()
        .iter()
        .chain(full_dual())
        .chain(delta_n6())
        .filter(|c| c.completed() && 2 * c.i + 2 > c.n - c.p)
        .collect();
    let bad: Vec<_> = cells.iter().copied().filter(|c| c.dim_sing != Some(-1)).collect();
    let pass = !cells.is_empty() && bad.is_empty();
    verdict(4, pass, &format!("{} cells with 2i+2 > n-p, {} not smooth", cells.len(), bad.len()));
    assert!(pass);
}

#[test]
fn criterion_05_pure_codimension() {
    let cells: Vec<_> = full_classic()
        .iter()
        .chain(full_dual())
        .chain(delta_n6())
        .filter(|c| c.completed() && c.dim_w.is_some_and(|d| d >= 0))
        .collect();
    let bad: Vec<_> = cells
        .iter()
        .filter(|c| c.dim_w != Some((c.n - c.p - c.i) as i64))
        .collect();
    let flavors: BTreeSet<_> = cells.iter().map(|c| c.flavor.to_string()).collect();
    let pass = cells.len() >= 50 && flavors.len() == 2 && bad.is_empty();
    verdict(
        5,
        pass,
        &format!("{} nonempty instances over {} flavors, {} with dim_W != n-p-i", cells.len(), flavors.len(), bad.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_06_delta_codimension() {
    let cells: Vec<_> = delta_all()
        .iter()
        .filter(|c| c.completed() && c.dim_w.is_some_and(|d| d >= 0))
        .collect();
    let bad: Vec<_> = cells
        .iter()
        .filter(|c| {
            let d = c.dim_sing.expect("completed");
            d >= 0 && d > c.n as i64 - c.p as i64 - 2 * c.i as i64 - 2
        })
        .collect();
    let pass = !cells.is_empty() && bad.is_empty();
    verdict(6, pass, &format!("{} nonempty instances, {} with codim of Δ_i in W below i+2", cells.len(), bad.len()));
    assert!(pass);
}

#[test]
fn criterion_07_singular_witness() {
    let field = PrimeField::default();
    let budget = Budget::default();
    let opts = SingularOptions::default();
    let mut lines = Vec::new();
    let (mut geometric, mut literal) = (true, true);
    for n in [6, 7] {
        for seed in 0..5 {
            let inst = build_family_31(field, n, seed, &budget).expect("instance");
            let r = verify_singular_witness(&inst, &opts, &budget).expect("witness");
            geometric &= r.on_s
                && r.det_vanishes
                && r.gradient_vanishes
                && r.rank_with_det == 2
                && r.rank_f == 2
                && r.singular_generators_vanish
                && r.polar_dim == n as i64 - 3;
            literal &= r.identity_swapped;
            lines.push(format!(
                "n={n} seed={seed}: 2(c2j m1j + c1j m2j) {} (fails for j in {:?}), 2(c1j m1j + c2j m2j) {}",
                if r.identity_swapped { "holds" } else { "fails" },
                r.identity_swapped_failures,
                if r.identity_cofactor { "holds" } else { "fails" },
            ));
        }
    }
    for l in &lines {
        println!("  {l}");
    }
    let pass = geometric && literal;
    verdict(
        7,
        pass,
        &format!(
            "det, gradient, ranks and singular generators at xi: {}; literal derivative identity: {}",
            if geometric { "all exact" } else { "violated" },
            if literal { "holds" } else { "false as a polynomial identity" }
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_08_degree_domination() {
    let field = PrimeField::default();
    let budget = Budget::default();
    let shapes = [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3), (4, 2), (5, 2), (3, 1), (4, 1)];
    let (mut systems, mut comparisons, mut failures) = (0, 0, Vec::new());
    for (k, &(n, p)) in shapes.iter().enumerate() {
        let seed = 800 + k as u64;
        let polys = draw_smooth_quadrics(field, n, p, seed, MAX_REDRAWS, &budget).expect("smooth system");
        systems += 1;
        for i in 1..=n - p {
            let r = degree_domination_check(&polys, i, 2, seed * 31 + i as u64, &budget).expect("degrees");
            comparisons += r.example1.len() + r.example2.len();
            if !r.passed() {
                failures.push(format!("{r:?}"));
            }
        }
    }
    let pass = systems >= 10 && failures.is_empty();
    verdict(
        8,
        pass,
        &format!("{systems} systems, {comparisons} structured degrees compared, {} failing (F, i)", failures.len()),
    );
    for f in &failures {
        println!("  {f}");
    }
    assert!(pass);
}

#[test]
fn criterion_09_dual_chain() {
    let field = PrimeField::default();
    let budget = Budget::default();
    let mut details = Vec::new();
    let mut pass = true;
    for (n, p, seed) in [(5, 1, 91), (5, 2, 92), (5, 3, 93), (4, 2, 94), (6, 2, 95)] {
        let polys = draw_smooth_quadrics(field, n, p, seed, MAX_REDRAWS, &budget).expect("smooth system");
        let gamma = draw_gamma(field, n, seed + 1000);
        let opts = SingularOptions { minor_cap: 200_000 };
        let r = example2_chain(&polys, &gamma, &opts, &budget).expect("chain");
        let dims: Vec<i64> = r.levels.iter().map(|l| l.dim).collect();
        let want: Vec<i64> = (1..=n - p).map(|i| (n - p - i) as i64).collect();
        let nonempty_ok = r.levels.iter().all(|l| l.dim < 0 || l.dim == l.expected_dim);
        let ok = nonempty_ok && r.all_smooth() && r.inclusions_hold() && dims.iter().any(|&d| d >= 0);
        pass &= ok;
        let singular: Vec<i64> = r.levels.iter().map(|l| l.singular_dim).collect();
        details.push(format!("n={n} p={p}: dims {dims:?} (expected {want:?}), singular dims {singular:?}"));
    }
    verdict(9, pass, &details.join("; "));
    assert!(pass);
}

/// Dimension of the solution space of `m v = 0` by enumerating all vectors.
fn kernel_dim_by_enumeration(m: &ConstMatrix) -> usize {
    let field = m.field();
    let q = field.modulus();
    let cols = m.cols();
    let mut count: u64 = 0;
    let mut v = vec![field.zero(); cols];
    for code in 0..q.pow(cols as u32) {
        let mut c = code;
        for x in v.iter_mut() {
            *x = field.elem(c % q);
            c /= q;
        }
        if m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()) {
            count += 1;
        }
    }
    let mut k = 0;
    while q.pow(k as u32) < count {
        k += 1;
    }
    assert_eq!(q.pow(k as u32), count);
    k
}

#[test]
fn criterion_10_pointwise_ranks() {
    let field = PrimeField::new(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut checked, mut counterexamples) = (0usize, Vec::new());
    for n in 2..=4usize {
        for p in 1..=2usize.min(n - 1) {
            for _ in 0..4 {
                let polys: Vec<Polynomial> = (0..p).map(|_| random_dense(field, n, 2, &mut rng)).collect();
                let jac = PolyMatrix::jacobian(&polys).unwrap();
                for i in 1..=n - p {
                    let a = loop {
                        let a = ConstMatrix::random(field, n - p - i + 1, n, &mut rng);
                        if a.has_full_row_rank() {
                            break a;
                        }
                    };
                    let spec = PolarSpec::new(polys.clone(), i, Flavor::Classic, a.clone()).unwrap();
                    let stacked = spec.stacked();
                    let top: Vec<Polynomial> = stacked.minors(n - i + 1).unwrap().collect();
                    let next: Vec<Polynomial> = if n - i >= 1 {
                        stacked.minors(n - i).unwrap().collect()
                    } else {
                        Vec::new()
                    };
                    for code in 0..7u64.pow(n as u32) {
                        let x = Point::new((0..n).map(|k| field.elem(code / 7u64.pow(k as u32) % 7)).collect());
                        if polys.iter().any(|f| !f.evaluate(&x).unwrap().is_zero()) {
                            continue;
                        }
                        if jac.evaluate(&x).unwrap().rank() < p {
                            continue;
                        }
                        checked += 1;
                        let j = thom_boardman_class(&polys, &a, &x).unwrap();
                        let vanish = |ms: &[Polynomial]| ms.iter().all(|m| m.evaluate(&x).unwrap().is_zero());
                        let fiber = incidence_fiber_dim(&polys, &a, &x, i).unwrap();
                        let system = jac.evaluate(&x).unwrap().vstack(&a).unwrap().transpose();
                        let oracle_fiber = kernel_dim_by_enumeration(&system) as i64 - 1;
                        let ok = vanish(&top) == (j >= i)
                            && vanish(&next) == (j > i)
                            && fiber == j as i64 - i as i64
                            && fiber == oracle_fiber;
                        if !ok {
                            counterexamples.push(format!("n={n} p={p} i={i} x={:?} j={j}", x.coords()));
                        }
                    }
                }
            }
        }
    }
    let pass = checked > 0 && counterexamples.is_empty();
    verdict(
        10,
        pass,
        &format!("{checked} (point, i) pairs over F7, {} counterexamples", counterexamples.len()),
    );
    for c in counterexamples.iter().take(5) {
        println!("  {c}");
    }
    assert!(pass);
}

fn random_sparse(field: PrimeField, n: usize, deg: u32, terms: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let t = (0..terms)
        .map(|_| {
            let mut e = vec![0u32; n];
            for _ in 0..rng.gen_range(0..=deg) {
                e[rng.gen_range(0..n)] += 1;
            }
            (Monomial::from_exponents(&e).unwrap(), field.random_nonzero(rng))
        })
        .collect();
    Polynomial::from_terms(field, n, t)
}

/// Largest set of variables containing the support of no generator.
fn independent_set_dim(gens: &[Vec<u32>], n: usize) -> i64 {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return -1;
    }
    (0u32..1 << n)
        .filter(|set| {
            gens.iter()
                .all(|g| g.iter().enumerate().any(|(k, &e)| e > 0 && set & (1 << k) == 0))
        })
        .map(|set| set.count_ones() as i64)
        .max()
        .unwrap()
}

/// Monomials in the box below the pure powers that no leading monomial divides.
fn standard_monomial_count(lead: &[Monomial], n: usize) -> Option<u64> {
    let bounds: Vec<u32> = (0..n)
        .map(|k| {
            lead.iter()
                .filter(|m| (0..n).all(|l| l == k || m.exponent(l) == 0))
                .map(|m| m.exponent(k) as u32)
                .min()
        })
        .collect::<Option<_>>()?;
    let total: u64 = bounds.iter().map(|&b| b as u64).product();
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let e: Vec<u32> = bounds
            .iter()
            .map(|&b| {
                let v = (c % b as u64) as u32;
                c /= b as u64;
                v
            })
            .collect();
        let m = Monomial::from_exponents(&e).unwrap();
        if !lead.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
    }
    Some(count)
}

fn laplace(m: &PolyMatrix) -> Polynomial {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = Polynomial::zero(m.field(), m.nvars());
    for c in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&k| k != c).collect();
        let sub = m.submatrix(&(1..n).collect::<Vec<_>>(), &rest);
        let term = m.get(0, c).try_mul(&laplace(&sub)).unwrap();
        acc = if c % 2 == 0 { acc.try_add(&term) } else { acc.try_sub(&term) }.unwrap();
    }
    acc
}

#[test]
fn criterion_11_engine_oracles() {
    let field = PrimeField::default();
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let mut gb_fail = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let gens: Vec<Polynomial> = (0..rng.gen_range(2..=3))
            .map(|_| random_sparse(field, n, 3, rng.gen_range(2..=4), &mut rng))
            .collect();
        let ideal = IdealPresentation::new(field, n, gens.clone()).unwrap();
        let gb = reduced_groebner_basis(&ideal, &budget).unwrap();
        let mut shuffled = gens;
        shuffled.shuffle(&mut rng);
        let shuffled = shuffled
            .iter()
            .map(|g| g.scale(field.random_nonzero(&mut rng)))
            .collect::<Vec<_>>();
        let other = reduced_groebner_basis(&IdealPresentation::new(field, n, shuffled).unwrap(), &budget).unwrap();
        if !(spolynomials_reduce_to_zero(&gb) && is_reduced(&gb) && gb.basis() == other.basis()) {
            gb_fail += 1;
        }
    }

    let mut dim_fail = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let gens: Vec<Vec<u32>> = (0..rng.gen_range(1..=6))
            .map(|_| {
                let mut e = vec![0u32; n];
                for _ in 0..rng.gen_range(1..=3) {
                    e[rng.gen_range(0..n)] += 1;
                }
                e
            })
            .collect();
        let polys = gens
            .iter()
            .map(|e| Polynomial::monomial(field, Monomial::from_exponents(e).unwrap(), field.one()));
        let gb = reduced_groebner_basis(&IdealPresentation::new(field, n, polys).unwrap(), &budget).unwrap();
        if gb.dimension() != independent_set_dim(&gens, n) {
            dim_fail += 1;
        }
    }

    let mut deg_fail = 0;
    for k in 0..30 {
        let n = 2 + k % 2;
        let mut gens: Vec<Polynomial> = (0..n).map(|_| random_dense(field, n, 2 + (k % 3) as u32 / 2, &mut rng)).collect();
        if k % 5 == 0 {
            gens.push(random_dense(field, n, 2, &mut rng));
        }
        let gb = reduced_groebner_basis(&IdealPresentation::new(field, n, gens).unwrap(), &budget).unwrap();
        let count = standard_monomial_count(gb.leading_monomials(), n);
        if gb.dimension() > 0 || count != Some(gb.degree()) {
            deg_fail += 1;
        }
    }

    let mut det_fail = 0;
    for k in 0..50 {
        let size = 1 + k % 5;
        let nvars = 2 + k % 2;
        let entries = (0..size * size)
            .map(|_| random_sparse(field, nvars, 2, rng.gen_range(1..=3), &mut rng))
            .collect();
        let m = PolyMatrix::new(size, size, entries).unwrap();
        if m.determinant().unwrap() != laplace(&m) {
            det_fail += 1;
        }
    }

    let pass = gb_fail + dim_fail + deg_fail + det_fail == 0;
    verdict(
        11,
        pass,
        &format!(
            "failures: reduced GB {gb_fail}/100, dimension {dim_fail}/100, degree {deg_fail}/30, determinant {det_fail}/50"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_12_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_polar"))
            .args(["experiment", "--nmax", "4", "--seeds", "2", "--master-seed", "77", "--json", "--out"])
            .arg(&out)
            .env_remove("POLAR_PRIME")
            .status()
            .expect("binary runs");
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("a.jsonl"), run("b.jsonl"));
    let pass = !a.is_empty() && a == b;
    verdict(12, pass, &format!("two runs, {} bytes each, identical: {}", a.len(), a == b));
    assert!(pass);
}
