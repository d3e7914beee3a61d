use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use affine_hall::catalog::Catalog;
use affine_hall::checks;
use affine_hall::error::Error;
use affine_hall::exec::Exec;
use affine_hall::field::{self, Field};
use affine_hall::flags::{self, Word};
use affine_hall::hall::{Hall, HallCache};
use affine_hall::monomials;
use affine_hall::quiver::{DimVec, Quiver, QuiverSpec};
use affine_hall::strata;
use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Roots,
    Catalog,
    Flags,
    HallCheck,
    Strata,
    Triangularity,
    Resolution,
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

/// Exact checks on affine quiver representations over small finite fields.
#[derive(Parser, Debug)]
#[command(name = "affine-hall", version)]
struct Cli {
    #[arg(value_enum)]
    suite: Suite,
    /// Quiver JSON file, or one of: kronecker, a2, a3, d4
    #[arg(long, default_value = "kronecker")]
    quiver: String,
    /// Field sizes (prime powers); hall-check fits Hall polynomials when given four or more
    #[arg(long, value_delimiter = ',', default_value = "2")]
    q: Vec<usize>,
    /// Dimension vector; defaults to δ
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    nu: Option<Vec<i64>>,
    /// Largest total dimension accepted for ν
    #[arg(long, default_value_t = 12)]
    bound: i64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the extension of --out (.csv, .txt), else json
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Directory for the Hall-number cache
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Words for the flags suite, e.g. "(1j,2i)"; defaults to all words of weight ν
    #[arg(long = "word")]
    words: Vec<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random samples per check
    #[arg(long, default_value_t = 10)]
    samples: usize,
    /// Candidate limit for tube-word search
    #[arg(long, default_value_t = monomials::DEFAULT_TUBE_SEARCH)]
    tube_search: usize,
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::Domain(_) | Error::Resource(_) => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

#[derive(Serialize)]
struct Report {
    suite: String,
    quiver: QuiverSpec,
    affine_type: String,
    q: Vec<usize>,
    nu: DimVec,
    pass: bool,
    results: Value,
}

struct Outcome {
    pass: bool,
    results: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

struct Ctx {
    quiver: Arc<Quiver>,
    qs: Vec<usize>,
    nu: DimVec,
    exec: Exec,
    cache: Option<PathBuf>,
    words: Vec<String>,
    seed: u64,
    samples: usize,
    tube_search: usize,
}

impl Ctx {
    fn catalog(&self, q: usize, bound: &DimVec) -> Res<Arc<Catalog>> {
        Ok(Arc::new(Catalog::build(self.quiver.clone(), Field::new(q)?, bound, self.exec)?))
    }

    fn hall(&self, q: usize, bound: &DimVec) -> Res<Hall> {
        let catalog = self.catalog(q, bound)?;
        let cache = match &self.cache {
            Some(dir) => {
                let c = HallCache::open(dir, &self.quiver, q)?;
                for w in &c.warnings {
                    eprintln!("warning: {w}");
                }
                c
            }
            None => HallCache::in_memory(),
        };
        Ok(Hall::with_cache(catalog, self.exec, cache))
    }
}

fn load_quiver(arg: &str) -> Res<Quiver> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?;
        return Quiver::from_json(&text).map_err(|e| Failure::Usage(format!("{arg}: {e}")));
    }
    match arg {
        "kronecker" => Ok(Quiver::kronecker()),
        "a2" => Ok(Quiver::affine_a(2)),
        "a3" => Ok(Quiver::affine_a(3)),
        "d4" => Ok(Quiver::affine_d4()),
        _ => Err(Failure::Usage(format!("{arg}: no such file and not a built-in quiver"))),
    }
}

fn roots(ctx: &Ctx) -> Res<Outcome> {
    let q = &ctx.quiver;
    let delta = q.delta();
    let mut rows = Vec::new();
    let mut pass = true;
    let mut list = Vec::new();
    for (a, r) in q.positive_roots(&ctx.nu) {
        let form = q.euler_form(&a, &a);
        // imaginary roots are the positive multiples of δ
        let multiple = (0..a.len()).all(|i| a.get(i) * delta.get(0) == delta.get(i) * a.get(0));
        pass &= if r.real { form == 1 } else { form == 0 && multiple };
        rows.push(vec![a.to_string(), if r.real { "real" } else { "imaginary" }.to_string(), form.to_string()]);
        list.push(json!({"root": a, "real": r.real, "euler": form}));
    }
    let order = q.admissible_order().ok();
    Ok(Outcome { pass, results: json!({"delta": delta, "admissible_order": order, "roots": list}), header: vec!["root", "kind", "euler"], rows })
}

fn catalog_suite(ctx: &Ctx) -> Res<Outcome> {
    let mut rows = Vec::new();
    let mut per_q = Vec::new();
    let mut pass = true;
    for &q in &ctx.qs {
        let c = ctx.catalog(q, &ctx.nu)?;
        let mut masses = Vec::new();
        for nu in ctx.nu.below().into_iter().filter(|n| !n.is_zero()) {
            let (total, expected) = c.mass_check(&nu)?;
            pass &= total == expected;
            masses.push(json!({"nu": nu, "classes": c.iso_classes(&nu)?.len(), "mass": total.to_string(), "expected": expected.to_string()}));
        }
        let mut indecs = Vec::new();
        for k in c.within(&ctx.nu) {
            let d = c.rep(k).dimvec();
            rows.push(vec![q.to_string(), c.label(k).to_string(), d.to_string(), c.get(k).residue_degree.to_string()]);
            indecs.push(json!({"label": c.label(k).to_string(), "dims": d, "residue_degree": c.get(k).residue_degree}));
        }
        per_q.push(json!({"q": q, "indecomposables": indecs, "mass_checks": masses}));
    }
    Ok(Outcome { pass, results: json!(per_q), header: vec!["q", "label", "dims", "residue_degree"], rows })
}

fn suite_words(ctx: &Ctx) -> Res<Vec<Word>> {
    if !ctx.words.is_empty() {
        return ctx.words.iter().map(|w| Word::parse(&ctx.quiver, w).map_err(Failure::from)).collect();
    }
    let nv = ctx.quiver.num_vertices();
    Ok(checks::all_words(nv, &ctx.nu)
        .into_iter()
        .filter(|w| w.weight(nv) == ctx.nu && w.entries().windows(2).all(|p| p[0].1 != p[1].1))
        .take(200)
        .collect())
}

fn flags_suite(ctx: &Ctx) -> Res<Outcome> {
    let words = suite_words(ctx)?;
    let nv = ctx.quiver.num_vertices();
    let bound = words.iter().fold(DimVec::zero(nv), |acc, w| DimVec((0..nv).map(|i| acc.get(i).max(w.weight(nv).get(i))).collect()));
    let formula = checks::flag_formulas(&ctx.quiver, &words, &ctx.qs, ctx.exec)?;
    let mut pass = formula.iter().all(|r| r.pass);
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for &q in &ctx.qs {
        let c = ctx.catalog(q, &bound)?;
        for w in &words {
            let nu = w.weight(nv);
            let counts = flags::count_function(w, &c, ctx.exec)?;
            let mut total: u128 = 0;
            for (v, class) in counts.iter().zip(c.iso_classes(&nu)?) {
                total += v.raw as u128 * class.orbit_size;
                let fp = c.fingerprint(&v.parts);
                rows.push(vec![w.display(&ctx.quiver), q.to_string(), fp, v.raw.to_string(), v.value.a.to_string(), v.value.b.to_string()]);
            }
            // Σ over orbits of |orbit|·#flags is |F̃|
            let stable = flags::flag_count(&ctx.quiver, w, q as u128) * (q as u128).pow(flags::flag_dims(&ctx.quiver, w).fiber as u32);
            pass &= total == stable;
            values.push(json!({"word": w.display(&ctx.quiver), "q": q, "orbit_sum": total.to_string(), "stable_pairs": stable.to_string()}));
        }
    }
    Ok(Outcome { pass, results: json!({"formulas": formula, "orbit_sums": values}), header: vec!["word", "q", "fingerprint", "raw", "a", "b"], rows })
}

fn hall_suite(ctx: &Ctx) -> Res<Outcome> {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut pass = true;
    for &q in &ctx.qs {
        let hall = ctx.hall(q, &ctx.nu)?;
        let r = checks::word_checks(&hall, &ctx.nu, 5 * ctx.samples, ctx.seed)?;
        hall.flush_cache()?;
        pass &= r.pass();
        rows.push(vec![q.to_string(), r.words.to_string(), r.splits.to_string(), r.associativity.to_string(), r.failures.len().to_string()]);
        reports.push(r);
    }
    // the last q checks a fit through the others; degree 2 needs three of them
    let fit = if ctx.qs.len() >= 4 {
        let (last, fit) = ctx.qs.split_last().expect("nonempty");
        let r = checks::hall_fit(&ctx.quiver, &ctx.nu, fit, *last, ctx.exec)?;
        pass &= r.pass();
        Some(r)
    } else {
        None
    };
    Ok(Outcome { pass, results: json!({"words": reports, "polynomial_fit": fit}), header: vec!["q", "words", "splits", "associativity", "failures"], rows })
}

fn strata_suite(ctx: &Ctx) -> Res<Outcome> {
    let mut rows = Vec::new();
    let mut per_q = Vec::new();
    let mut pass = true;
    for &q in &ctx.qs {
        let hall = ctx.hall(q, &ctx.nu)?;
        let c = &hall.catalog;
        let delta = checks::delta_check(c, &ctx.nu)?;
        let census = strata::census(c, &ctx.nu)?;
        let (mass, expected) = c.mass_check(&ctx.nu)?;
        let witness = strata::witness_check(&hall, &ctx.nu)?;
        hall.flush_cache()?;
        pass &= delta.pass() && census.total() == expected && mass == expected && witness.contradicted.is_empty();
        let indices = strata::enumerate_delta(c, &ctx.nu)?;
        let mut listed = Vec::new();
        for idx in &indices {
            let n = strata::stratum_count(c, idx)?;
            let dim = monomials::stratum_dimension(c, idx).ok();
            let below: Vec<String> = indices.iter().filter(|r| *r != idx && strata::precedes_eq(c, r, idx).unwrap_or(false)).map(|r| r.to_string()).collect();
            rows.push(vec![q.to_string(), idx.to_string(), n.to_string(), dim.map_or("-".into(), |d| d.to_string())]);
            listed.push(json!({"index": idx.to_string(), "split_points": n.to_string(), "dimension": dim, "below": below}));
        }
        let level: Vec<Value> = census.level.iter().map(|(k, v)| json!([k.to_string(), v.to_string()])).collect();
        per_q.push(json!({
            "q": q, "delta": delta, "strata": listed,
            "census": {"level": level, "repeated": census.repeated.to_string(), "non_split": census.non_split.to_string(), "periodic": census.periodic.to_string(), "total": census.total().to_string(), "expected": expected.to_string()},
            "witness": witness,
        }));
    }
    Ok(Outcome { pass, results: json!(per_q), header: vec!["q", "index", "split_points", "dimension"], rows })
}

fn triangularity_suite(ctx: &Ctx) -> Res<Outcome> {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut pass = true;
    for &q in &ctx.qs {
        let c = ctx.catalog(q, &ctx.nu)?;
        let r = monomials::verify_triangularity(&c, &ctx.nu, ctx.exec)?;
        pass &= r.pass();
        for (i, row) in r.raw.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                rows.push(vec![q.to_string(), r.indices[i].clone(), r.indices[j].clone(), v.to_string(), r.order[i][j].clone()]);
            }
        }
        reports.push(r);
    }
    Ok(Outcome { pass, results: json!(reports), header: vec!["q", "row", "column", "raw", "order"], rows })
}

fn resolution_suite(ctx: &Ctx) -> Res<Outcome> {
    let delta = ctx.quiver.delta();
    // ν = kδ runs δ, 2δ, …, kδ
    let k = ctx.nu.get(0) / delta.get(0).max(1);
    let targets: Vec<DimVec> = if k > 0 && delta.scale(k) == ctx.nu { (1..=k).map(|j| delta.scale(j)).collect() } else { vec![ctx.nu.clone()] };
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut pass = true;
    for &q in &ctx.qs {
        let c = ctx.catalog(q, &ctx.nu)?;
        for nu in &targets {
            for idx in strata::enumerate_delta(&c, nu)? {
                let plan = monomials::build_plan(&c, &idx, ctx.tube_search)?;
                let r = monomials::verify_resolution(&c, &idx, Some(&plan.resolution_word), ctx.exec)?;
                pass &= r.pass;
                rows.push(vec![q.to_string(), r.index.clone(), r.word.clone(), r.own_points.to_string(), r.pass.to_string()]);
                reports.push(json!({"q": q, "report": r}));
            }
        }
    }
    Ok(Outcome { pass, results: json!(reports), header: vec!["q", "index", "word", "own_points", "pass"], rows })
}

fn symbolic_suite(ctx: &Ctx) -> Res<Outcome> {
    let n = ctx.quiver.num_vertices();
    let cartan = affine_hall::uqminus::CartanMatrix::from_quiver(&ctx.quiver);
    // the catalog must also hold every Serre weight
    let mut bound = ctx.nu.clone();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let s = &DimVec::unit(n, i).scale(1 - cartan.get(i, j)) + &DimVec::unit(n, j);
            bound = DimVec((0..n).map(|v| bound.get(v).max(s.get(v))).collect());
        }
    }
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut pass = true;
    for &q in &ctx.qs {
        let hall = ctx.hall(q, &bound)?;
        let r = checks::symbolic_check(&hall, &ctx.nu, ctx.samples, ctx.seed)?;
        hall.flush_cache()?;
        pass &= r.pass();
        for (kind, list) in [("serre", &r.serre), ("random", &r.random)] {
            for c in list {
                rows.push(vec![q.to_string(), kind.into(), c.weight.to_string(), c.words.join(" "), c.symbolic_rank.to_string(), c.numeric_rank.to_string(), c.relations.to_string(), c.pass().to_string()]);
            }
        }
        reports.push(r);
    }
    let correction = checks::a2_correction(4)?;
    pass &= correction.iter().all(|r| r.pass);
    Ok(Outcome {
        pass,
        results: json!({"hall": reports, "a2_correction": correction}),
        header: vec!["q", "kind", "weight", "words", "symbolic_rank", "numeric_rank", "relations", "pass"],
        rows,
    })
}

fn render(format: Format, report: &Report, outcome: &Outcome) -> Res<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map(|s| s + "\n").map_err(|e| Failure::Run(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| Failure::Run(e.to_string());
            w.write_record(&outcome.header).map_err(fail)?;
            for r in &outcome.rows {
                w.write_record(r).map_err(fail)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Run(e.to_string()))?).map_err(|e| Failure::Run(e.to_string()))
        }
        Format::Table => {
            let mut widths: Vec<usize> = outcome.header.iter().map(|h| h.chars().count()).collect();
            for r in &outcome.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| -> String {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                padded.join("  ").trim_end().to_string()
            };
            let mut out = String::new();
            writeln!(out, "{} on {} ({}), verdict: {}", report.suite, report.affine_type, report.nu, if report.pass { "pass" } else { "FAIL" }).ok();
            writeln!(out, "{}", line(outcome.header.clone())).ok();
            for r in &outcome.rows {
                writeln!(out, "{}", line(r.iter().map(String::as_str).collect())).ok();
            }
            Ok(out)
        }
    }
}

fn run(cli: Cli) -> Res<bool> {
    let quiver = Arc::new(load_quiver(&cli.quiver)?);
    for &q in &cli.q {
        if field::prime_power(q).is_none() {
            return Err(Failure::Usage(format!("--q {q} is not a prime power")));
        }
    }
    if cli.bound <= 0 || cli.samples == 0 || cli.tube_search == 0 {
        return Err(Failure::Usage("--bound, --samples and --tube-search must be positive".into()));
    }
    let nu = match &cli.nu {
        Some(v) => DimVec(v.clone()),
        None => quiver.delta().clone(),
    };
    if nu.len() != quiver.num_vertices() || !nu.is_nonnegative() || nu.is_zero() {
        return Err(Failure::Usage(format!("--nu {nu} is not a nonzero dimension vector for {} vertices", quiver.num_vertices())));
    }
    if nu.total() > cli.bound {
        return Err(Failure::Usage(format!("--nu {nu} exceeds --bound {}", cli.bound)));
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let ctx = Ctx { quiver: quiver.clone(), qs: cli.q.clone(), nu: nu.clone(), exec, cache: cli.cache.clone(), words: cli.words.clone(), seed: cli.seed, samples: cli.samples, tube_search: cli.tube_search };
    let outcome = match cli.suite {
        Suite::Roots => roots(&ctx)?,
        Suite::Catalog => catalog_suite(&ctx)?,
        Suite::Flags => flags_suite(&ctx)?,
        Suite::HallCheck => hall_suite(&ctx)?,
        Suite::Strata => strata_suite(&ctx)?,
        Suite::Triangularity => triangularity_suite(&ctx)?,
        Suite::Resolution => resolution_suite(&ctx)?,
        Suite::Symbolic => symbolic_suite(&ctx)?,
    };
    let suite = cli.suite.to_possible_value().expect("named suite").get_name().to_string();
    let report = Report { suite, quiver: quiver.spec(), affine_type: quiver.affine_type().to_string(), q: cli.q.clone(), nu, pass: outcome.pass, results: outcome.results.clone() };
    let format = cli.format.unwrap_or_else(|| match cli.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        Some("txt") => Format::Table,
        _ => Format::Json,
    });
    let text = render(format, &report, &outcome)?;
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verdict: fail");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
