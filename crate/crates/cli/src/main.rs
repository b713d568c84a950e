mod partition;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::json;

use gzcount::counting::{
    a_infinity, binomial, binomial_formula_v, count_by_fiber_recursion, recurrence_v3, tri_table, CacheError,
    CountCache, MultiplicityVector, TableVariant,
};
use gzcount::genfun::{
    build_e, build_g, closed_form_e2, closed_form_g3, closed_form_h, g4_explore, series_to_csv, series_to_json,
    verify_dde_g, verify_e2, verify_g3, verify_h, verify_pde_e, ResidualReport,
};
use gzcount::oracle::{build_hrep, enumerate_vertices, GzShape, OracleConfig, OracleError};
use gzcount::polycore::{fmt_rational, TruncSeries};

use partition::PartitionExpr;

#[derive(Parser)]
#[command(name = "gzcount", version, about = "Vertex counts of Gelfand-Zetlin polytopes and their generating functions")]
struct Cli {
    /// Count cache file, loaded if present and updated after the command.
    #[arg(long, global = true, env = "GZCOUNT_CACHE")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the vertices of the polytope of a weakly increasing list.
    Count {
        /// "1,1,2,3", "1 1 2 3" or "1^2 2 3".
        partition: PartitionExpr,
        #[arg(long, value_enum, default_value_t = Method::AInfinity)]
        method: Method,
        /// Largest polytope dimension the oracle will attempt.
        #[arg(long, default_value_t = OracleConfig::default().max_dim)]
        limit_dim: usize,
        /// Also print the oracle's vertices.
        #[arg(long, value_enum)]
        vertices: Option<Format>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Print the triangular table of order s.
    Table {
        s: u32,
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Dump the coefficients of a generating function.
    Series {
        #[arg(value_enum, ignore_case = true)]
        which: Which,
        /// Number of variables of E and G.
        #[arg(long)]
        k: Option<usize>,
        /// Total-degree cap; for H, the largest power of y.
        #[arg(long)]
        cap: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check the identities exactly and report residuals.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Number of variables for pde and dde: "2" or "1..4".
        #[arg(long, default_value = "1..4")]
        k: String,
        #[arg(long, default_value_t = 8)]
        cap: u32,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Inspect or fill the count cache file.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
    /// Counts for four distinct values, all totals up to cap.
    G4Explore {
        #[arg(long)]
        cap: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Validate a cache file.
    Load { path: Option<PathBuf> },
    /// Fill the cache for all shapes with at most k values and total at most cap, then write it.
    Save {
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        cap: u32,
    },
    /// Entry count and largest total stored.
    Stats { path: Option<PathBuf> },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    AInfinity,
    Fiber,
    Formula,
    Recurrence,
    Oracle,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Plain,
    Skew,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "E")]
    E,
    #[value(name = "G")]
    G,
    #[value(name = "G3closed")]
    G3Closed,
    #[value(name = "E2closed")]
    E2Closed,
    #[value(name = "H")]
    H,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Pde,
    Dde,
    G3,
    E2,
    H,
    All,
}

enum CliError {
    Usage(String),
    Failed(String),
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failed(m) | CliError::Resource(m) => m,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn cache_error(e: CacheError) -> CliError {
    CliError::Failed(format!("cache refused: {e}"))
}

struct CacheHandle {
    path: Option<PathBuf>,
    cache: CountCache,
    loaded: usize,
}

impl CacheHandle {
    fn open(path: Option<&Path>) -> Result<CacheHandle, CliError> {
        let cache = match path {
            Some(p) if p.exists() => CountCache::load(p).map_err(cache_error)?,
            _ => CountCache::new(),
        };
        Ok(CacheHandle { path: path.map(Path::to_path_buf), loaded: cache.len(), cache })
    }

    fn persist(&self) -> Result<(), CliError> {
        match &self.path {
            Some(p) if self.cache.len() != self.loaded => self.cache.save(p).map_err(cache_error),
            _ => Ok(()),
        }
    }
}

fn formula_count(m: &MultiplicityVector) -> Result<BigInt, CliError> {
    let p = m.parts();
    match p.len() {
        0 | 1 => Ok(BigInt::from(1)),
        2 => Ok(binomial(i64::from(p[0] + p[1]), i64::from(p[0]))),
        3 => binomial_formula_v(i64::from(p[0]), i64::from(p[1]), i64::from(p[2])).map_err(usage),
        n => Err(usage(format!("the formula needs at most three distinct values, got {n}"))),
    }
}

fn recurrence_count(m: &MultiplicityVector) -> Result<BigUint, CliError> {
    let p = m.parts();
    if p.len() > 3 {
        return Err(usage(format!("the recurrence needs at most three distinct values, got {}", p.len())));
    }
    let get = |i: usize| p.get(i).copied().unwrap_or(0);
    Ok(recurrence_v3(get(0), get(1), get(2)))
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::DimensionLimit { .. } => CliError::Resource(format!("{e}; raise --limit-dim to attempt it")),
        other => CliError::Failed(other.to_string()),
    }
}

fn cmd_count(
    expr: &PartitionExpr,
    method: Method,
    limit_dim: usize,
    vertices: Option<Format>,
    format: OutFormat,
    handle: &CacheHandle,
) -> Result<(), CliError> {
    let lambda = expr.values();
    let m = MultiplicityVector::from_partition(lambda).map_err(usage)?;
    let run = |method: Method| -> Result<BigInt, CliError> {
        Ok(match method {
            Method::AInfinity => BigInt::from(a_infinity(&m, &handle.cache)),
            Method::Fiber => BigInt::from(count_by_fiber_recursion(&m)),
            Method::Formula => formula_count(&m)?,
            Method::Recurrence => BigInt::from(recurrence_count(&m)?),
            Method::Oracle | Method::All => unreachable!(),
        })
    };
    let mut counts: Vec<(&str, Result<BigInt, CliError>)> = Vec::new();
    let selected: &[Method] = match method {
        Method::All => &[Method::AInfinity, Method::Fiber, Method::Formula, Method::Recurrence, Method::Oracle],
        _ => std::slice::from_ref(&method),
    };
    let mut vertex_dump = None;
    for &meth in selected {
        let name = method_name(meth);
        if meth == Method::Oracle {
            let shape = GzShape::new(lambda.to_vec()).map_err(usage)?;
            let hrep = build_hrep(&shape);
            let result = enumerate_vertices(&hrep, &OracleConfig { max_dim: limit_dim }).map_err(oracle_error);
            counts.push((
                name,
                result.map(|v| {
                    let n = BigInt::from(v.len());
                    vertex_dump = vertices.map(|f| match f {
                        Format::Csv => v.to_csv(),
                        Format::Json => format!("{:#}\n", v.to_json(&hrep)),
                    });
                    n
                }),
            ));
        } else {
            counts.push((name, run(meth)));
        }
    }

    if method != Method::All {
        let (_, result) = counts.pop().expect("one method");
        let value = result?;
        match format {
            OutFormat::Text => println!("{value}"),
            OutFormat::Json => println!(
                "{:#}",
                json!({"partition": lambda, "multiplicities": m.parts(), "counts": {method_name(method): value.to_string()}})
            ),
        }
        if let Some(d) = vertex_dump {
            print!("{d}");
        }
        return Ok(());
    }

    let computed: Vec<(&str, &BigInt)> = counts.iter().filter_map(|(n, r)| r.as_ref().ok().map(|v| (*n, v))).collect();
    let agree = computed.windows(2).all(|w| w[0].1 == w[1].1);
    match format {
        OutFormat::Text => {
            for (name, r) in &counts {
                match r {
                    Ok(v) => println!("{name} {v}"),
                    Err(e) => println!("{name} skipped: {}", e.message()),
                }
            }
            if agree {
                println!("agree {}", computed[0].1);
            } else {
                println!("mismatch");
            }
        }
        OutFormat::Json => {
            let mut map = serde_json::Map::new();
            let mut skipped = serde_json::Map::new();
            for (name, r) in &counts {
                match r {
                    Ok(v) => map.insert(name.to_string(), v.to_string().into()),
                    Err(e) => skipped.insert(name.to_string(), e.message().into()),
                };
            }
            println!(
                "{:#}",
                json!({"partition": lambda, "multiplicities": m.parts(), "counts": map, "skipped": skipped, "agree": agree})
            );
        }
    }
    if let Some(d) = vertex_dump {
        print!("{d}");
    }
    if agree {
        Ok(())
    } else {
        Err(CliError::Failed("methods disagree".into()))
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::AInfinity => "a-infinity",
        Method::Fiber => "fiber",
        Method::Formula => "formula",
        Method::Recurrence => "recurrence",
        Method::Oracle => "oracle",
        Method::All => "all",
    }
}

fn cmd_table(s: u32, variant: Variant, format: Format) -> Result<(), CliError> {
    let variant = match variant {
        Variant::Plain => TableVariant::Plain,
        Variant::Skew => TableVariant::Skew,
    };
    let table = tri_table(s, variant).map_err(usage)?;
    match format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Json => println!("{:#}", table.to_json()),
    }
    Ok(())
}

fn h_up_to(cap: u32) -> TruncSeries {
    let full = closed_form_h(cap);
    TruncSeries::from_terms(
        3,
        full.cap(),
        full.terms().filter(|(m, _)| m.exponent(3) <= cap).map(|(m, c)| (m.clone(), c.clone())),
    )
}

fn cmd_series(which: Which, k: Option<usize>, cap: u32, format: Format, handle: &CacheHandle) -> Result<(), CliError> {
    let need_k = || k.filter(|&k| k >= 1).ok_or_else(|| usage("E and G need --k at least 1"));
    let series = match which {
        Which::E => build_e(need_k()?, cap, &handle.cache).map_err(usage)?,
        Which::G => build_g(need_k()?, cap, &handle.cache).map_err(usage)?,
        Which::G3Closed => closed_form_g3(cap).map_err(|e| CliError::Failed(e.to_string()))?,
        Which::E2Closed => closed_form_e2(cap),
        Which::H => h_up_to(cap),
    };
    match format {
        Format::Csv => print!("{}", series_to_csv(&series)),
        Format::Json => println!("{:#}", series_to_json(&series)),
    }
    Ok(())
}

fn parse_k_range(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || usage(format!("bad k range '{s}'"));
    let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn describe(r: &ResidualReport) -> String {
    let k = r.k.map(|k| format!(" k={k}")).unwrap_or_default();
    if r.pass() {
        return format!("PASS {}{k} cap={} compared={}", r.check, r.cap, r.compared);
    }
    let mut line = format!("FAIL {}{k} cap={} nonzero={} max|r|={}", r.check, r.cap, r.nonzero.len(), fmt_rational(&r.max_abs()));
    if let Some((e, c)) = r.nonzero.first() {
        let e: Vec<String> = e.iter().map(u32::to_string).collect();
        line.push_str(&format!(" first=({}):{}", e.join(","), fmt_rational(c)));
    }
    for f in &r.failures {
        line.push_str(&format!(" [{f}]"));
    }
    line
}

fn cmd_verify(suite: Suite, k: &str, cap: u32, format: OutFormat, handle: &CacheHandle) -> Result<(), CliError> {
    let ks = parse_k_range(k)?;
    let fail = |e: gzcount::genfun::GenFunError| usage(e.to_string());
    let mut reports = Vec::new();
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Pde) {
        for &k in &ks {
            reports.push(verify_pde_e(k, cap, &handle.cache).map_err(fail)?);
        }
    }
    if wants(Suite::Dde) {
        for &k in &ks {
            reports.push(verify_dde_g(k, cap, &handle.cache).map_err(fail)?);
        }
    }
    if wants(Suite::G3) {
        reports.extend(verify_g3(cap, &handle.cache).map_err(fail)?);
    }
    if wants(Suite::E2) {
        reports.extend(verify_e2(cap, &handle.cache).map_err(fail)?);
    }
    if wants(Suite::H) {
        reports.extend(verify_h(cap).map_err(fail)?);
    }
    let failed = reports.iter().filter(|r| !r.pass()).count();
    match format {
        OutFormat::Text => {
            for r in &reports {
                println!("{}", describe(r));
            }
            println!("{} passed, {failed} failed", reports.len() - failed);
        }
        OutFormat::Json => {
            let all: Vec<_> = reports.iter().map(ResidualReport::to_json).collect();
            println!("{:#}", json!({"pass": failed == 0, "reports": all}));
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} checks failed")))
    }
}

fn cmd_cache(action: &CacheAction, default: Option<&Path>) -> Result<(), CliError> {
    let resolve = |p: &Option<PathBuf>| {
        p.clone()
            .or_else(|| default.map(Path::to_path_buf))
            .ok_or_else(|| usage("no cache path given and GZCOUNT_CACHE is not set"))
    };
    match action {
        CacheAction::Load { path } => {
            let path = resolve(path)?;
            let cache = CountCache::load(&path).map_err(cache_error)?;
            println!("loaded {} entries", cache.len());
        }
        CacheAction::Save { path, k, cap } => {
            let path = resolve(path)?;
            let handle = CacheHandle::open(Some(&path))?;
            if *k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            fill_cache(*k, *cap, &handle.cache);
            handle.cache.save(&path).map_err(cache_error)?;
            println!("saved {} entries", handle.cache.len());
        }
        CacheAction::Stats { path } => {
            let path = resolve(path)?;
            let handle = CacheHandle::open(Some(&path))?;
            println!("entries {}", handle.cache.len());
            println!("max_total {}", handle.cache.max_total());
        }
    }
    Ok(())
}

fn fill_cache(k: usize, cap: u32, cache: &CountCache) {
    for m in MultiplicityVector::all_up_to(k, cap) {
        a_infinity(&m, cache);
    }
}

fn cmd_g4(cap: u32, format: Format, handle: &CacheHandle) {
    let rows = g4_explore(cap, &handle.cache);
    match format {
        Format::Csv => {
            println!("i1,i2,i3,i4,count");
            for (m, v) in &rows {
                let p = m.parts();
                println!("{},{},{},{},{v}", p[0], p[1], p[2], p[3]);
            }
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(m, v)| json!({"exponents": m.parts(), "count": v.to_string()}))
                .collect();
            println!("{:#}", json!({"cap": cap, "rows": rows}));
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Cache { action } = &cli.command {
        return cmd_cache(action, cli.cache.as_deref());
    }
    let handle = CacheHandle::open(cli.cache.as_deref())?;
    match &cli.command {
        Command::Count { partition, method, limit_dim, vertices, format } => {
            cmd_count(partition, *method, *limit_dim, *vertices, *format, &handle)?
        }
        Command::Table { s, variant, format } => cmd_table(*s, *variant, *format)?,
        Command::Series { which, k, cap, format } => cmd_series(*which, *k, *cap, *format, &handle)?,
        Command::Verify { suite, k, cap, format } => cmd_verify(*suite, k, *cap, *format, &handle)?,
        Command::G4Explore { cap, format } => cmd_g4(*cap, *format, &handle),
        Command::Cache { .. } => unreachable!(),
    }
    handle.persist()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gzcount: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
