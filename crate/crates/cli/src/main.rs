mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gw_blowup::checks::{self, AxiomConfig, CheckReport};
use gw_blowup::enumerative::{self, emit_table, TableId, TableSpec};
use gw_blowup::invariant::canonicalize_traced;
use gw_blowup::memo::MemoError;
use gw_blowup::session::verify_sample;
use gw_blowup::{BasisIndex, CurveClass, EvalResult, Geometry, MemoStore, Rational, Scalar, Space, Workbench};

use config::{resolve_cache, FileConfig};

const EXIT_PARSE: u8 = 2;
const EXIT_ENGINE: u8 = 3;
const EXIT_TABLE: u8 = 4;
const EXIT_SUITE: u8 = 5;
const EXIT_CACHE: u8 = 6;

#[derive(Parser, Debug)]
#[command(name = "gwinv", version, about = "Genus-0 Gromov-Witten invariants of projective space and its one-point blow-up")]
struct Cli {
    /// Config file of key=value lines (space, n, cache_path, format, verbosity).
    #[arg(long, global = true, env = "GW_CONFIG")]
    config: Option<PathBuf>,
    /// Memo cache file; overrides GW_CACHE and the config file.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Log engine statistics to stderr (repeat for per-level events).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one invariant exactly.
    Invariant {
        #[arg(long)]
        space: Option<Space>,
        #[arg(long)]
        n: Option<u32>,
        /// Curve class as `d,e` (or `d`).
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Comma-separated classes such as `H2,E1,pt`.
        #[arg(long, default_value = "")]
        classes: String,
        /// Also print the canonicalization trace and the levels solved.
        #[arg(long)]
        explain: bool,
    },
    /// Reproduce one of the reference tables.
    Table {
        #[arg(long)]
        id: TableId,
        #[arg(long)]
        dmax: Option<i64>,
        #[arg(long)]
        format: Option<Format>,
        /// Compare with the embedded published grid; exit 4 on any mismatch.
        #[arg(long)]
        diff_paper: bool,
    },
    /// Run a property suite.
    Check {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        dmax: i64,
        /// Blow-up dimension for the wdvv suite.
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Inspect, combine and re-verify cache files.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Print the sorted records of the cache.
    Dump,
    /// Union several cache files; fails on disagreeing entries.
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute a sample of entries from scratch and compare.
    Verify {
        #[arg(long, default_value_t = 0.05)]
        fraction: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Md,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Axioms,
    Wdvv,
    Remarks,
    Oracle,
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

impl From<MemoError> for Failure {
    fn from(e: MemoError) -> Self {
        fail(EXIT_CACHE, e.to_string())
    }
}

struct Ctx {
    cfg: FileConfig,
    cache: Option<PathBuf>,
    verbose: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // level solving recurses through lower levels on demand
    let worker = std::thread::Builder::new().stack_size(512 << 20).spawn(move || run(cli)).expect("spawn worker");
    match worker.join().expect("worker panicked") {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gwinv: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(|e| fail(EXIT_PARSE, e))?,
        None => FileConfig::default(),
    };
    let env = std::env::var("GW_CACHE").ok();
    let cache = resolve_cache(cli.cache.as_deref(), env.as_deref(), &cfg);
    let ctx = Ctx { verbose: cli.verbose.max(cfg.verbosity.unwrap_or(0)), cfg, cache };
    match cli.command {
        Command::Invariant { space, n, beta, classes, explain } => cmd_invariant(&ctx, space, n, &beta, &classes, explain),
        Command::Table { id, dmax, format, diff_paper } => cmd_table(&ctx, id, dmax, format, diff_paper),
        Command::Check { suite, dmax, n, samples, seed, format } => cmd_check(&ctx, suite, dmax, n, samples, seed, format),
        Command::Cache { action } => cmd_cache(&ctx, action),
    }
}

fn open_bench(ctx: &Ctx) -> Result<Workbench, Failure> {
    match &ctx.cache {
        Some(p) => {
            let store = MemoStore::load_or_default(p)?;
            if ctx.verbose > 0 {
                eprintln!("loaded {} cache entries from {}", store.len(), p.display());
            }
            Ok(Workbench::from_store(&store)?)
        }
        None => Ok(Workbench::new()),
    }
}

fn close_bench(ctx: &Ctx, bench: &Workbench) -> Result<(), Failure> {
    if ctx.verbose > 0 {
        for e in bench.engines() {
            eprintln!("{}: {:?}", e.geometry(), e.stats());
            if ctx.verbose > 1 {
                e.events().iter().for_each(|ev| eprintln!("  {ev}"));
            }
        }
    }
    if let (Some(p), true) = (&ctx.cache, bench.is_dirty()) {
        let mut all = bench.combined_store()?;
        all.save(p)?;
        if ctx.verbose > 0 {
            eprintln!("saved {} cache entries to {}", all.len(), p.display());
        }
    }
    Ok(())
}

fn parse_beta(geom: Geometry, s: &str) -> Result<CurveClass, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<i64>().map_err(|_| format!("bad curve class `{s}`"));
    let beta = match parts.as_slice() {
        [d] => CurveClass::new(num(d)?, 0),
        [d, e] => CurveClass::new(num(d)?, num(e)?),
        _ => return Err(format!("bad curve class `{s}` (expected d,e)")),
    };
    geom.check_curve(beta).map_err(|e| e.to_string())
}

fn parse_classes(geom: Geometry, s: &str) -> Result<Vec<BasisIndex>, String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| geom.parse_class(t).map_err(|e| e.to_string())).collect()
}

fn show(v: &Rational) -> String {
    Scalar::to_integer(v).map_or_else(|| v.to_ratio_string(), |i| i.to_string())
}

fn cmd_invariant(ctx: &Ctx, space: Option<Space>, n: Option<u32>, beta: &str, classes: &str, explain: bool) -> Result<(), Failure> {
    let space = space.or(ctx.cfg.space).unwrap_or(Space::Blowup);
    let n = n.or(ctx.cfg.n).ok_or_else(|| fail(EXIT_PARSE, "missing --n"))?;
    let geom = Geometry::new(space, n).map_err(|e| fail(EXIT_PARSE, e.to_string()))?;
    let beta = parse_beta(geom, beta).map_err(|e| fail(EXIT_PARSE, e))?;
    let classes = parse_classes(geom, classes).map_err(|e| fail(EXIT_PARSE, e))?;
    let codim: i64 = classes.iter().map(|c| i64::from(c.codim())).sum();
    let vdim = geom.vdim(beta, classes.len());
    if codim != vdim {
        eprintln!("warning: insertion codimensions sum to {codim}, virtual dimension is {vdim}; the invariant vanishes");
    }
    let mut bench = open_bench(ctx)?;
    let engine = bench.engine(geom);
    let events_before = engine.events().len();
    let value = engine.evaluate(beta, &classes).map_err(|e| fail(EXIT_ENGINE, e.to_string()))?;
    println!("{}", show(&value));
    if explain {
        let mut trace = Vec::new();
        let reduced: EvalResult<Rational> = canonicalize_traced(geom, beta, &classes, &mut trace);
        for t in &trace {
            println!("  {t}");
        }
        if let EvalResult::Canonical { key, multiplier } = reduced {
            println!("  value = {} x {}", show(&multiplier), key);
        }
        for ev in &engine.events()[events_before..] {
            println!("  {ev}");
        }
    }
    close_bench(ctx, &bench)
}

fn cmd_table(ctx: &Ctx, id: TableId, dmax: Option<i64>, format: Option<Format>, diff: bool) -> Result<(), Failure> {
    let format = match (format, ctx.cfg.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some(s)) => Format::from_str(s, true).map_err(|_| fail(EXIT_PARSE, format!("bad format `{s}` in config")))?,
        (None, None) => Format::Md,
    };
    let dmax = dmax.unwrap_or(id.published_dmax());
    if dmax < 1 {
        return Err(fail(EXIT_PARSE, "--dmax must be at least 1"));
    }
    let mut bench = open_bench(ctx)?;
    let table = emit_table(bench.engine(id.geometry()), TableSpec::new(id, dmax)).map_err(|e| fail(EXIT_ENGINE, e.to_string()))?;
    match format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Md => print!("{}", table.to_markdown()),
        Format::Json => println!("{}", table.to_json()),
    }
    close_bench(ctx, &bench)?;
    if diff {
        let mismatches = table.diff_published();
        eprintln!("compared {} cells with the published table", table.published_cells_covered());
        if !mismatches.is_empty() {
            for m in &mismatches {
                eprintln!("mismatch at d={}, e={}: computed {}, published {}", m.d, m.e, m.computed, m.published);
            }
            return Err(fail(EXIT_TABLE, format!("{} cells differ from the published table", mismatches.len())));
        }
    }
    Ok(())
}

fn cmd_check(ctx: &Ctx, suite: Suite, dmax: i64, n: u32, samples: usize, seed: u64, format: ReportFormat) -> Result<(), Failure> {
    let mut bench = open_bench(ctx)?;
    let report: CheckReport = match suite {
        Suite::Axioms => {
            let cfg = AxiomConfig { seed, ..AxiomConfig::default() };
            checks::axiom_suite(&mut bench, &cfg)
        }
        Suite::Wdvv => {
            if n < 2 {
                return Err(fail(EXIT_PARSE, "--n must be at least 2"));
            }
            checks::wdvv_suite(&mut bench, n, dmax, samples, seed)
        }
        Suite::Remarks => {
            if dmax < 2 {
                return Err(fail(EXIT_PARSE, "--dmax must be at least 2 for the remarks suite"));
            }
            enumerative::consistency_suite(&mut bench, dmax, dmax)
        }
        Suite::Oracle => checks::oracle_suite(&mut bench, dmax),
    };
    match format {
        ReportFormat::Text => print!("{}", report.to_text()),
        ReportFormat::Json => println!("{}", report.to_json()),
    }
    close_bench(ctx, &bench)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(fail(EXIT_SUITE, format!("{} of {} checks failed", report.failed, report.items.len())))
    }
}

fn require_cache(ctx: &Ctx) -> Result<&Path, Failure> {
    ctx.cache.as_deref().ok_or_else(|| fail(EXIT_PARSE, "no cache file (use --cache, GW_CACHE or cache_path in the config)"))
}

fn cmd_cache(ctx: &Ctx, action: CacheAction) -> Result<(), Failure> {
    match action {
        CacheAction::Dump => {
            let store = MemoStore::load(require_cache(ctx)?)?;
            print!("{}", store.dump());
        }
        CacheAction::Merge { inputs, out } => {
            let mut all = MemoStore::new();
            for p in &inputs {
                all.merge(&MemoStore::load(p)?)?;
            }
            match out {
                Some(p) => all.save(&p)?,
                None => print!("{}", all.dump()),
            }
            eprintln!("merged {} files into {} entries", inputs.len(), all.len());
        }
        CacheAction::Verify { fraction, seed } => {
            let path = require_cache(ctx)?;
            let store = MemoStore::load(path)?;
            let outcomes = verify_sample(&store, fraction, seed);
            let bad: Vec<_> = outcomes.iter().filter(|o| !o.passed()).collect();
            for o in &bad {
                let got = o.recomputed.as_ref().map_or_else(|e| format!("error: {e}"), Clone::clone);
                eprintln!("mismatch {}: stored {}, recomputed {}", o.key, o.stored, got);
            }
            println!("verified {} of {} entries: {} mismatches", outcomes.len(), store.len(), bad.len());
            if !bad.is_empty() {
                return Err(fail(EXIT_CACHE, "cache verification failed"));
            }
        }
    }
    Ok(())
}
