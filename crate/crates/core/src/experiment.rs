//! Randomized singular-locus experiment over a grid of `(n, p, i)` triples.
//!
//! Each cell draws dense random quadrics, checks that they form a smooth
//! complete intersection, draws a random `(n-p) x n` matrix, keeps its top
//! `n-p-i+1` rows and measures the singular locus of the polar variety.
//! Cell randomness comes from ChaCha8 seeded with a SplitMix64 mix of the
//! master seed and the cell coordinates, so every cell is reproducible on its
//! own and the grid is independent of scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::groebner::Budget;
use crate::matrix::{ConstMatrix, PolyMatrix};
use crate::monomial::Monomial;
use crate::polar::{
    delta_ideal, polar_ideal, singular_locus_ideal, verify_smooth_complete_intersection, Flavor,
    PolarSpec, SingularOptions,
};
use crate::poly::{Point, Polynomial};

/// Default number of redraws allowed per cell.
pub const DEFAULT_REDRAWS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Jacobian criterion on the polar ideal.
    #[serde(rename = "full-singular")]
    Full,
    /// Dimension of Δ_i stands in for the singular locus.
    #[serde(rename = "delta-proxy")]
    Delta,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full-singular",
            Mode::Delta => "delta-proxy",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full-singular" => Ok(Mode::Full),
            "delta" | "delta-proxy" => Ok(Mode::Delta),
            other => Err(Error::Input(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Ok,
    /// Full mode hit the minor cap and reported dim Δ_i instead.
    FallbackDelta,
    /// A Gröbner budget was exceeded.
    Skipped,
    /// No admissible draw within the redraw budget.
    RedrawExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub n: usize,
    pub p: usize,
    pub i: usize,
    pub flavor: Flavor,
    pub prime: u64,
    pub seed: u64,
    pub mode: Mode,
    pub redraw_budget: usize,
}

impl CellSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.p == 0 || self.p >= self.n || self.i == 0 || self.i > self.n - self.p {
            return Err(Error::Input(format!(
                "invalid triple (n, p, i) = ({}, {}, {})",
                self.n, self.p, self.i
            )));
        }
        PrimeField::new(self.prime)?;
        Ok(())
    }
}

/// One JSON line of the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub p: usize,
    pub i: usize,
    pub flavor: Flavor,
    pub prime: u64,
    pub seed: u64,
    pub regular_sequence_ok: bool,
    pub smooth_ok: bool,
    #[serde(rename = "dim_W")]
    pub dim_w: Option<i64>,
    #[serde(rename = "deg_W")]
    pub deg_w: Option<u64>,
    pub dim_sing: Option<i64>,
    pub expected_dim_sing: i64,
    #[serde(rename = "match")]
    pub matches: bool,
    pub mode: Mode,
    pub status: CellStatus,
    pub redraws_used: usize,
    pub elapsed_ms: Option<u64>,
}

impl CellResult {
    pub fn completed(&self) -> bool {
        matches!(self.status, CellStatus::Ok | CellStatus::FallbackDelta)
    }
}

/// Predicted singular-locus dimension. Classic hypersurface polar varieties
/// never meet Δ_i: the constant rows alone already have rank `n-i`.
pub fn expected_dim_sing(n: usize, p: usize, i: usize, flavor: Flavor) -> i64 {
    if flavor == Flavor::Classic && p == 1 {
        return -1;
    }
    (n as i64 - p as i64 - 2 * i as i64 - 2).max(-1)
}

/// Knobs shared by every cell of a run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunConfig {
    pub budget: Budget,
    pub singular: SingularOptions,
    /// Record wall-clock time per cell (makes reports nondeterministic).
    pub timing: bool,
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of cell `(n, p, i)`, replicate `k`, under `master`.
pub fn derive_seed(master: u64, n: usize, p: usize, i: usize, k: usize) -> u64 {
    [n, p, i, k]
        .iter()
        .fold(splitmix64(master), |acc, &v| splitmix64(acc ^ v as u64))
}

/// Dense polynomial of degree at most `deg` with uniform coefficients.
pub fn random_dense<R: Rng + ?Sized>(field: PrimeField, nvars: usize, deg: u32, rng: &mut R) -> Polynomial {
    let terms = monomials_up_to(nvars, deg)
        .into_iter()
        .map(|m| (m, field.random(rng)))
        .collect();
    Polynomial::from_terms(field, nvars, terms)
}

fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    let mut frontier = out.clone();
    for _ in 0..deg {
        let mut next = Vec::new();
        for m in &frontier {
            // only multiply by variables at or after the last one used
            let start = (0..nvars).rev().find(|&j| m.exponent(j) > 0).unwrap_or(0);
            for j in start..nvars {
                next.push(m.mul(&Monomial::var(nvars, j).expect("index in range")));
            }
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    out
}

struct Draw {
    polys: Vec<Polynomial>,
    a: ConstMatrix,
}

/// Draws until the quadrics form a smooth complete intersection and the
/// matrix has full rank. Returns the draw and the number of redraws.
fn draw<R: Rng>(
    field: PrimeField,
    spec: &CellSpec,
    rng: &mut R,
    budget: &Budget,
) -> Result<(Option<Draw>, usize, bool, bool)> {
    let (mut reg_ok, mut smooth_ok) = (false, false);
    for attempt in 0..=spec.redraw_budget {
        let polys: Vec<Polynomial> = (0..spec.p).map(|_| random_dense(field, spec.n, 2, rng)).collect();
        let a = ConstMatrix::random(field, spec.n - spec.p, spec.n, rng);
        let report = verify_smooth_complete_intersection(&polys, budget)?;
        reg_ok = report.regular_sequence;
        smooth_ok = report.smooth;
        if report.passed() && a.has_full_row_rank() {
            return Ok((Some(Draw { polys, a }), attempt, reg_ok, smooth_ok));
        }
    }
    Ok((None, spec.redraw_budget, reg_ok, smooth_ok))
}

pub fn run_cell(spec: &CellSpec, config: &RunConfig) -> Result<CellResult> {
    spec.validate()?;
    let start = Instant::now();
    let field = PrimeField::new(spec.prime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let expected = expected_dim_sing(spec.n, spec.p, spec.i, spec.flavor);
    let mut result = CellResult {
        n: spec.n,
        p: spec.p,
        i: spec.i,
        flavor: spec.flavor,
        prime: spec.prime,
        seed: spec.seed,
        regular_sequence_ok: false,
        smooth_ok: false,
        dim_w: None,
        deg_w: None,
        dim_sing: None,
        expected_dim_sing: expected,
        matches: false,
        mode: spec.mode,
        status: CellStatus::Skipped,
        redraws_used: 0,
        elapsed_ms: None,
    };
    let finish = |mut r: CellResult| {
        if config.timing {
            r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        r.matches = r.completed() && r.dim_sing == Some(r.expected_dim_sing);
        r
    };

    let drawn = match draw(field, spec, &mut rng, &config.budget) {
        Ok(d) => d,
        Err(e) if e.is_budget() => return Ok(finish(result)),
        Err(e) => return Err(e),
    };
    let (draw, redraws, reg_ok, smooth_ok) = drawn;
    result.redraws_used = redraws;
    result.regular_sequence_ok = reg_ok;
    result.smooth_ok = smooth_ok;
    let Some(draw) = draw else {
        result.status = CellStatus::RedrawExhausted;
        return Ok(finish(result));
    };

    let rows = spec.n - spec.p - spec.i + 1;
    let a = draw.a.row_slice(0..rows);
    let polar = PolarSpec::new(draw.polys, spec.i, spec.flavor, a)?;

    match measure(&polar, spec.mode, config) {
        Ok((dim_w, deg_w, dim_sing, status)) => {
            result.dim_w = Some(dim_w);
            result.deg_w = Some(deg_w);
            result.dim_sing = Some(dim_sing);
            result.status = status;
        }
        Err(e) if e.is_budget() => result.status = CellStatus::Skipped,
        Err(e) => return Err(e),
    }
    Ok(finish(result))
}

fn measure(spec: &PolarSpec, mode: Mode, config: &RunConfig) -> Result<(i64, u64, i64, CellStatus)> {
    let w = polar_ideal(spec, &config.budget)?;
    if w.is_empty() {
        return Ok((w.dim, w.degree, -1, CellStatus::Ok));
    }
    let (dim_sing, status) = match mode {
        Mode::Delta => (delta_ideal(spec, &config.budget)?.dim, CellStatus::Ok),
        Mode::Full => match singular_locus_ideal(&w, &config.singular, &config.budget) {
            Ok(s) => (s.dim, CellStatus::Ok),
            // only the minor cap falls back; Gröbner budgets propagate
            Err(Error::Budget(msg)) if msg.contains("minors exceed") => {
                (delta_ideal(spec, &config.budget)?.dim, CellStatus::FallbackDelta)
            }
            Err(e) => return Err(e),
        },
    };
    Ok((w.dim, w.degree, dim_sing, status))
}

/// Which cells a grid run covers.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub nmin: usize,
    pub nmax: usize,
    /// Largest `p` considered (inclusive); `None` for all.
    pub pmax: Option<usize>,
    pub seeds: usize,
    pub mode: Mode,
    pub flavor: Flavor,
    pub prime: u64,
    pub master_seed: u64,
    pub redraw_budget: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nmin: 2,
            nmax: 4,
            pmax: None,
            seeds: 1,
            mode: Mode::Full,
            flavor: Flavor::Classic,
            prime: DEFAULT_PRIME,
            master_seed: 0,
            redraw_budget: DEFAULT_REDRAWS,
        }
    }
}

impl GridSpec {
    /// Cells in `(n, p, i, replicate)` order.
    pub fn cells(&self) -> Vec<CellSpec> {
        let mut out = Vec::new();
        for n in self.nmin.max(2)..=self.nmax {
            for p in 1..n {
                if self.pmax.is_some_and(|m| p > m) {
                    continue;
                }
                for i in 1..=n - p {
                    for k in 0..self.seeds {
                        out.push(CellSpec {
                            n,
                            p,
                            i,
                            flavor: self.flavor,
                            prime: self.prime,
                            seed: derive_seed(self.master_seed, n, p, i, k),
                            mode: self.mode,
                            redraw_budget: self.redraw_budget,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Runs every cell in parallel; results are sorted by `(n, p, i, seed)`.
pub fn run_grid(grid: &GridSpec, config: &RunConfig) -> Result<Vec<CellResult>> {
    if grid.nmax < 2 {
        return Err(Error::Input("nmax must be at least 2".into()));
    }
    PrimeField::new(grid.prime)?;
    let mut results = grid
        .cells()
        .par_iter()
        .map(|c| run_cell(c, config))
        .collect::<Result<Vec<_>>>()?;
    results.sort_by_key(|r| (r.n, r.p, r.i, r.seed));
    Ok(results)
}

/// One JSON object per line, newline terminated.
pub fn to_json_lines(results: &[CellResult]) -> String {
    results
        .iter()
        .map(|r| serde_json::to_string(r).expect("results serialize") + "\n")
        .collect()
}

/// Human-readable table, one line per `(n, p, i)`.
pub fn summary_table(results: &[CellResult]) -> String {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(usize, usize, usize), Vec<&CellResult>> = BTreeMap::new();
    for r in results {
        groups.entry((r.n, r.p, r.i)).or_default().push(r);
    }
    let mut out = String::from(" n  p  i  expected  observed        match  done\n");
    for ((n, p, i), rs) in groups {
        let observed: Vec<String> = rs
            .iter()
            .map(|r| r.dim_sing.map_or("-".into(), |d| d.to_string()))
            .collect();
        let matched = rs.iter().filter(|r| r.matches).count();
        let done = rs.iter().filter(|r| r.completed()).count();
        out.push_str(&format!(
            "{n:>2} {p:>2} {i:>2}  {:>8}  {:<14} {matched:>2}/{:<2} {done:>2}/{}\n",
            rs[0].expected_dim_sing,
            observed.join(","),
            rs.len(),
            rs.len()
        ));
    }
    let total = results.len();
    let matched = results.iter().filter(|r| r.matches).count();
    let skipped = results.iter().filter(|r| !r.completed()).count();
    out.push_str(&format!("{matched}/{total} cells match, {skipped} not completed\n"));
    out
}

/// Points of `V(F)` over a small prime field, each tagged regular when the
/// Jacobian has full rank there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledPoints {
    pub points: Vec<(Point, bool)>,
    /// False when the search stopped at the cap or sampled at random.
    pub exhaustive: bool,
}

/// Largest search space enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

/// Enumerates `V(F)` when `q^n <= 10^7`; otherwise samples random points,
/// keeping at most `cap` solutions out of `cap * 1000` trials.
pub fn sample_points_small_field(polys: &[Polynomial], cap: usize, seed: u64) -> Result<SampledPoints> {
    let first = polys.first().ok_or_else(|| Error::precondition("empty system"))?;
    let (field, n) = (first.field(), first.nvars());
    let jac = PolyMatrix::jacobian(polys)?;
    let q = field.modulus();
    let on_variety = |x: &Point| -> Result<bool> {
        for f in polys {
            if !f.evaluate(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut points = Vec::new();
    let space = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if space <= EXHAUSTIVE_LIMIT as u128 {
        let mut coords = vec![0u64; n];
        let mut exhaustive = true;
        'outer: loop {
            let x = Point::new(coords.iter().map(|&v| field.elem(v)).collect());
            if on_variety(&x)? {
                if points.len() == cap {
                    exhaustive = false;
                    break 'outer;
                }
                let regular = jac.rank_at(&x)? == polys.len();
                points.push((x, regular));
            }
            let mut k = 0;
            loop {
                if k == n {
                    break 'outer;
                }
                coords[k] += 1;
                if coords[k] < q {
                    break;
                }
                coords[k] = 0;
                k += 1;
            }
        }
        return Ok(SampledPoints { points, exhaustive });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cap.saturating_mul(1000) {
        if points.len() == cap {
            break;
        }
        let x = Point::new((0..n).map(|_| field.random(&mut rng)).collect());
        if on_variety(&x)? && !points.iter().any(|(p, _)| p == &x) {
            let regular = jac.rank_at(&x)? == polys.len();
            points.push((x, regular));
        }
    }
    Ok(SampledPoints {
        points,
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SMALL_PRIME;
    use crate::parse::parse_polynomial;

    #[test]
    fn expected_values() {
        assert_eq!(expected_dim_sing(5, 2, 1, Flavor::Classic), -1);
        assert_eq!(expected_dim_sing(6, 2, 1, Flavor::Classic), 0);
        assert_eq!(expected_dim_sing(4, 1, 1, Flavor::Classic), -1);
        assert_eq!(expected_dim_sing(6, 1, 1, Flavor::Classic), -1);
        assert_eq!(expected_dim_sing(6, 1, 1, Flavor::Dual), 1);
    }

    #[test]
    fn grid_cell_count() {
        let grid = GridSpec {
            nmax: 4,
            seeds: 1,
            ..GridSpec::default()
        };
        assert_eq!(grid.cells().len(), 10);
        let ext = GridSpec {
            nmin: 6,
            nmax: 6,
            pmax: Some(3),
            ..GridSpec::default()
        };
        assert_eq!(ext.cells().len(), 5 + 4 + 3);
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a = derive_seed(1, 5, 2, 1, 0);
        assert_eq!(a, derive_seed(1, 5, 2, 1, 0));
        assert_ne!(a, derive_seed(1, 5, 2, 1, 1));
        assert_ne!(a, derive_seed(2, 5, 2, 1, 0));
        assert_ne!(derive_seed(0, 5, 1, 2, 0), derive_seed(0, 5, 2, 1, 0));
    }

    #[test]
    fn dense_quadrics_have_all_terms() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_dense(f, 3, 2, &mut rng);
        // 1 + 3 + 6 monomials; a zero coefficient is vanishingly unlikely
        assert_eq!(q.len(), 10);
        assert_eq!(monomials_up_to(4, 2).len(), 15);
    }

    #[test]
    fn small_cells_run_and_match() {
        let config = RunConfig::default();
        for (n, p, i) in [(2, 1, 1), (3, 1, 2), (3, 2, 1), (4, 2, 1)] {
            let spec = CellSpec {
                n,
                p,
                i,
                flavor: Flavor::Classic,
                prime: DEFAULT_PRIME,
                seed: derive_seed(7, n, p, i, 0),
                mode: Mode::Full,
                redraw_budget: DEFAULT_REDRAWS,
            };
            let r = run_cell(&spec, &config).unwrap();
            assert_eq!(r.status, CellStatus::Ok);
            assert!(r.smooth_ok && r.regular_sequence_ok);
            assert_eq!(r.dim_w, Some((n - p - i) as i64));
            assert!(r.matches, "{r:?}");
            assert_eq!(r.elapsed_ms, None);
        }
    }

    #[test]
    fn json_schema_keys() {
        let spec = CellSpec {
            n: 3,
            p: 1,
            i: 1,
            flavor: Flavor::Classic,
            prime: DEFAULT_PRIME,
            seed: 9,
            mode: Mode::Delta,
            redraw_budget: DEFAULT_REDRAWS,
        };
        let r = run_cell(&spec, &RunConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        let mut expected = vec![
            "n", "p", "i", "flavor", "prime", "seed", "regular_sequence_ok", "smooth_ok", "dim_W",
            "deg_W", "dim_sing", "expected_dim_sing", "match", "mode", "status", "redraws_used",
            "elapsed_ms",
        ];
        expected.sort_unstable();
        assert_eq!(keys, expected);
        assert_eq!(v["mode"], "delta-proxy");
        assert_eq!(v["status"], "ok");
        let back: CellResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn circle_over_f7() {
        let f = PrimeField::new(SMALL_PRIME).unwrap();
        let circle = parse_polynomial("x1^2 + x2^2 - 1", f, 2).unwrap();
        let s = sample_points_small_field(std::slice::from_ref(&circle), 1000, 0).unwrap();
        assert!(s.exhaustive);
        // oracle: count pairs directly
        let oracle = (0..7u64)
            .flat_map(|a| (0..7u64).map(move |b| (a, b)))
            .filter(|(a, b)| (a * a + b * b) % 7 == 1)
            .count();
        assert_eq!(oracle, 8);
        assert_eq!(s.points.len(), 8);
        assert!(s.points.iter().all(|(x, reg)| *reg && circle.evaluate(x).unwrap().is_zero()));
    }

    #[test]
    fn inconsistent_system_has_no_points() {
        let f = PrimeField::new(SMALL_PRIME).unwrap();
        let sys = vec![
            parse_polynomial("x1", f, 2).unwrap(),
            parse_polynomial("x1 + 1", f, 2).unwrap(),
        ];
        assert!(sample_points_small_field(&sys, 100, 0).unwrap().points.is_empty());
    }
}
