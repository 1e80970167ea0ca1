use std::fmt::Write as _;
use std::path::Path;

use polar_core::experiment::{run_grid, summary_table, to_json_lines, GridSpec, RunConfig};
use polar_core::families::{
    build_family_31, degree_domination_check, draw_gamma, example2_chain, verify_singular_witness,
};
use polar_core::polar::{
    delta_ideal, incidence_fiber_dim, polar_ideal, singular_locus_ideal, thom_boardman_class,
    verify_smooth_complete_intersection,
};
use polar_core::{reduced_groebner_basis, IdealPresentation, PolarIdealResult, PolarSpec, PolySystem};
use serde_json::{json, Value};

use crate::{input, Cli, CliError, Command, ExperimentArgs, Global, Outcome, PolarArgs};

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Parse { system } => parse(g, system),
        Command::Gb { system } => gb(g, system),
        Command::Dim { system } => staircase(g, system, "dim"),
        Command::Deg { system } => staircase(g, system, "degree"),
        Command::Construct(args) => construct(g, args),
        Command::Delta(args) => delta(g, args),
        Command::Singular(args) => singular(g, args),
        Command::Tb { polar, point } => tb(g, polar, point),
        Command::Fiber { polar, point } => fiber(g, polar, point),
        Command::Family31 { n, seed } => family31(g, *n, *seed),
        Command::Chain2 { system, gamma, seed } => chain2(g, system, gamma.as_deref(), *seed),
        Command::Degcmp { system, i, trials, seed } => degcmp(g, system, *i, *trials, *seed),
        Command::Experiment(args) => experiment(g, args),
    }
}

fn done(text: String) -> Outcome {
    Outcome { text, ok: true }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn system_ideal(sys: &PolySystem) -> Result<IdealPresentation, CliError> {
    Ok(IdealPresentation::new(sys.field, sys.nvars, sys.polys.iter().cloned())?)
}

fn parse(g: &Global, path: &Path) -> Result<Outcome, CliError> {
    let sys = input::system(path, g.field()?)?;
    Ok(done(if g.json {
        pretty(&json!({
            "nvars": sys.nvars,
            "polys": sys.polys.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        }))
    } else {
        sys.to_string()
    }))
}

fn gb(g: &Global, path: &Path) -> Result<Outcome, CliError> {
    let sys = input::system(path, g.field()?)?;
    let basis = reduced_groebner_basis(&system_ideal(&sys)?, &g.budget())?;
    let polys: Vec<String> = basis.basis().iter().map(|f| f.to_string()).collect();
    Ok(done(if g.json {
        pretty(&json!({ "nvars": sys.nvars, "basis": polys }))
    } else {
        polys.iter().map(|p| format!("{p}\n")).collect()
    }))
}

fn staircase(g: &Global, path: &Path, what: &str) -> Result<Outcome, CliError> {
    let sys = input::system(path, g.field()?)?;
    let basis = reduced_groebner_basis(&system_ideal(&sys)?, &g.budget())?;
    let summary = basis.summary();
    let value = if what == "dim" {
        summary.dimension
    } else {
        summary.degree as i64
    };
    Ok(done(if g.json {
        pretty(&json!({ what: value }))
    } else {
        format!("{value}\n")
    }))
}

/// Loads system and matrix and validates the shape before any algebra.
fn spec(g: &Global, args: &PolarArgs) -> Result<PolarSpec, CliError> {
    let field = g.field()?;
    let sys = input::system(&args.system, field)?;
    let a = input::matrix(input::required(&args.matrix, "matrix")?, field)?;
    let i = args.i.ok_or_else(|| CliError::Input("missing --i".into()))?;
    PolarSpec::new(sys.polys, i, args.flavor, a).map_err(|e| CliError::Input(e.to_string()))
}

fn require_smooth(spec: &PolarSpec, g: &Global) -> Result<(), CliError> {
    let report = verify_smooth_complete_intersection(spec.polys(), &g.budget())?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "system is not a smooth complete intersection (prefix dims {:?})",
            report.prefix_dims
        )))
    }
}

fn ideal_json(r: &PolarIdealResult) -> Value {
    json!({
        "dim": r.dim,
        "codim_in_S": r.codim_in_s,
        "degree": r.degree,
        "generators": r.ideal.len(),
        "basis_size": r.gb.len(),
        "empty": r.is_empty(),
    })
}

fn header(spec: &PolarSpec) -> Value {
    json!({
        "flavor": spec.flavor(),
        "n": spec.n(),
        "p": spec.p(),
        "i": spec.i(),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

fn report(args: &PolarArgs, v: &Value) -> Result<(), CliError> {
    if let Some(path) = &args.report {
        std::fs::write(path, pretty(v)).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

fn construct(g: &Global, args: &PolarArgs) -> Result<Outcome, CliError> {
    let spec = spec(g, args)?;
    require_smooth(&spec, g)?;
    let w = polar_ideal(&spec, &g.budget())?;
    let v = merge(header(&spec), ideal_json(&w));
    report(args, &v)?;
    Ok(done(pretty(&v)))
}

fn delta(g: &Global, args: &PolarArgs) -> Result<Outcome, CliError> {
    let spec = spec(g, args)?;
    require_smooth(&spec, g)?;
    let d = delta_ideal(&spec, &g.budget())?;
    let v = merge(header(&spec), ideal_json(&d));
    report(args, &v)?;
    Ok(done(pretty(&v)))
}

fn singular(g: &Global, args: &PolarArgs) -> Result<Outcome, CliError> {
    let spec = spec(g, args)?;
    require_smooth(&spec, g)?;
    let w = polar_ideal(&spec, &g.budget())?;
    let sing = if w.is_empty() {
        None
    } else {
        Some(singular_locus_ideal(&w, &g.singular(), &g.budget())?)
    };
    let v = merge(
        header(&spec),
        json!({
            "polar": ideal_json(&w),
            "dim_sing": sing.as_ref().map_or(-1, |s| s.dim),
            "singular": sing.as_ref().map(ideal_json),
        }),
    );
    report(args, &v)?;
    Ok(done(pretty(&v)))
}

fn tb(g: &Global, args: &PolarArgs, point: &str) -> Result<Outcome, CliError> {
    let field = g.field()?;
    let sys = input::system(&args.system, field)?;
    let a = input::matrix(input::required(&args.matrix, "matrix")?, field)?;
    let x = input::point(point, field, sys.nvars)?;
    let class = thom_boardman_class(&sys.polys, &a, &x).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(done(if g.json {
        pretty(&json!({ "class": class }))
    } else {
        format!("{class}\n")
    }))
}

fn fiber(g: &Global, args: &PolarArgs, point: &str) -> Result<Outcome, CliError> {
    let field = g.field()?;
    let sys = input::system(&args.system, field)?;
    let a = input::matrix(input::required(&args.matrix, "matrix")?, field)?;
    let i = args.i.ok_or_else(|| CliError::Input("missing --i".into()))?;
    let x = input::point(point, field, sys.nvars)?;
    let class = thom_boardman_class(&sys.polys, &a, &x).map_err(|e| CliError::Input(e.to_string()))?;
    let dim = incidence_fiber_dim(&sys.polys, &a, &x, i).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(done(if g.json {
        pretty(&json!({ "fiber_dim": dim, "class": class }))
    } else {
        format!("{dim}\n")
    }))
}

fn family31(g: &Global, n: usize, seed: u64) -> Result<Outcome, CliError> {
    let field = g.field()?;
    let inst = build_family_31(field, n, seed, &g.budget())?;
    let r = verify_singular_witness(&inst, &g.singular(), &g.budget())?;
    let v = merge(
        serde_json::to_value(&r).expect("report serializes"),
        json!({
            "seed": seed,
            "xi": inst.xi.coords().iter().map(|c| c.value()).collect::<Vec<_>>(),
            "passed": r.passed(),
        }),
    );
    let text = if g.json {
        pretty(&v)
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "n = {n}, seed = {seed}");
        let _ = writeln!(s, "det N* vanishes at xi: {}", r.det_vanishes);
        let _ = writeln!(s, "gradient vanishes at xi: {}", r.gradient_vanishes);
        let _ = writeln!(s, "cofactor identity: {}", r.identity_cofactor);
        let _ = writeln!(
            s,
            "swapped identity: {} (fails for j in {:?})",
            r.identity_swapped, r.identity_swapped_failures
        );
        let _ = writeln!(s, "rank J(F1,F2,det) = {}, rank J(F1,F2) = {}", r.rank_with_det, r.rank_f);
        let _ = writeln!(s, "polar dim = {}", r.polar_dim);
        let _ = writeln!(
            s,
            "singular-locus generators vanish: {} ({} generators)",
            r.singular_generators_vanish, r.singular_generators
        );
        let _ = writeln!(s, "passed: {}", r.passed());
        s
    };
    Ok(Outcome { text, ok: r.passed() })
}

fn chain2(g: &Global, system: &Path, gamma: Option<&Path>, seed: u64) -> Result<Outcome, CliError> {
    let field = g.field()?;
    let sys = input::system(system, field)?;
    let gamma = match gamma {
        Some(path) => input::vector(path, field, sys.nvars)?,
        None => draw_gamma(field, sys.nvars, seed),
    };
    let r = example2_chain(&sys.polys, &gamma, &g.singular(), &g.budget())?;
    let v = merge(
        serde_json::to_value(&r).expect("report serializes"),
        json!({ "passed": r.passed() }),
    );
    let text = if g.json {
        pretty(&v)
    } else {
        let mut s = format!("n = {}, p = {}, gamma = {:?}\n", r.n, r.p, r.gamma);
        for l in &r.levels {
            let _ = writeln!(
                s,
                "i = {}: dim {} (expected {}), degree {}, dim_sing {}, contains previous: {}",
                l.i,
                l.dim,
                l.expected_dim,
                l.degree,
                l.singular_dim,
                l.contained_in_previous.map_or("-".to_string(), |b| b.to_string())
            );
        }
        let _ = writeln!(s, "passed: {}", r.passed());
        s
    };
    Ok(Outcome { text, ok: r.passed() })
}

fn degcmp(g: &Global, system: &Path, i: usize, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let sys = input::system(system, g.field()?)?;
    if trials == 0 {
        return Err(CliError::Input("--trials must be positive".into()));
    }
    let r = degree_domination_check(&sys.polys, i, trials, seed, &g.budget())?;
    let v = merge(
        serde_json::to_value(&r).expect("report serializes"),
        json!({ "passed": r.passed() }),
    );
    let text = if g.json {
        pretty(&v)
    } else {
        format!(
            "n = {}, p = {}, i = {}\nrandom classic {:?}\nrandom dual {:?}\nexample 1 {:?}\nexample 2 {:?}\nbound {}\npassed: {}\n",
            r.n, r.p, r.i, r.classic_random, r.dual_random, r.example1, r.example2, r.bound, r.passed()
        )
    };
    Ok(Outcome { text, ok: r.passed() })
}

fn experiment(g: &Global, args: &ExperimentArgs) -> Result<Outcome, CliError> {
    let grid = GridSpec {
        nmin: args.nmin,
        nmax: args.nmax,
        pmax: args.pmax,
        seeds: args.seeds,
        mode: args.mode,
        flavor: args.flavor,
        prime: g.prime,
        master_seed: args.master_seed,
        redraw_budget: args.redraws,
    };
    if grid.nmin < 2 || grid.nmin > grid.nmax {
        return Err(CliError::Input(format!(
            "need 2 <= nmin <= nmax, got nmin = {}, nmax = {}",
            grid.nmin, grid.nmax
        )));
    }
    if grid.seeds == 0 {
        return Err(CliError::Input("--seeds must be positive".into()));
    }
    g.field()?;
    let config = RunConfig {
        budget: g.budget(),
        singular: g.singular(),
        timing: args.timing,
    };
    let results = run_grid(&grid, &config)?;
    let ok = results.iter().all(|r| !r.completed() || r.matches);
    if !g.json {
        eprint!("{}", summary_table(&results));
    }
    Ok(Outcome {
        text: to_json_lines(&results),
        ok,
    })
}
