//! `psl`: command-line front end for the product-set laboratory.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use psl_core::analytic::{run_suite, BoundReport, CheckConfig, Suite};
use psl_core::fmt::{format_sig, opt_real, real};
use psl_core::model::{
    brute_force_expected_product_size, exact_expected_deficiency, exact_expected_product_size,
    main_term_product_size, BRUTE_FORCE_MAX_N,
};
use psl_core::report::{write_bounds_csv, write_json_lines, write_summary_csv};
use psl_core::tau::multiplication_table_count_with_budget;
use psl_core::threshold::{run_trials, AlphaSchedule, ExperimentConfig, TableCache, DEFAULT_SEED};
use psl_core::{LabError, MemoryBudget, SieveTables, TauNTable};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_BOUND_FAILED: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "psl", version, about = "Product sets of random subsets of {1, ..., N}")]
struct Cli {
    /// Output format for tabular results.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    format: Format,

    /// Progress and timing on stderr; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo trials of B(N, alpha) at a single point; writes one summary row.
    Simulate(SimulateArgs),
    /// Runs a JSON-configured sweep over N; one summary row per N.
    Sweep(SweepArgs),
    /// Prints an expectation of |AA| (or of the deficiency) under B(N, alpha).
    Expectation(ExpectationArgs),
    /// Evaluates the auxiliary inequalities; exit 4 when a judged check fails.
    Bounds(BoundsArgs),
    /// Counts distinct entries of the multiplication table up to x.
    MultTable(MultTableArgs),
    /// Builds an arithmetic table and writes it in binary form.
    Tables(TablesArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Skip the exact expectation (avoids building the N² table).
    #[arg(long)]
    no_exact: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectationMode {
    /// Exact E|AA| from the tau_N table.
    Exact,
    /// Enumeration of all 2^N subsets (N <= 20).
    Brute,
    /// Sum of 1 - (1 - alpha²)^{tau_N(n)/2}, without the square correction.
    MainTerm,
    /// Exact E[X_A].
    Deficiency,
}

#[derive(Debug, Args)]
struct ExpectationArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = ExpectationMode::Exact)]
    mode: ExpectationMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Taylor,
    Norton,
    Landau,
    Ek,
    Tk,
    Dyadic,
    Tailtau,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Taylor => vec![Suite::Taylor],
            SuiteArg::Norton => vec![Suite::Norton],
            SuiteArg::Landau => vec![Suite::Landau],
            SuiteArg::Ek => vec![Suite::ErdosKac],
            SuiteArg::Tk => vec![Suite::TuranKubilius],
            SuiteArg::Dyadic => vec![Suite::Dyadic],
            SuiteArg::Tailtau => vec![Suite::TailTau],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Sieve limit for suites that need arithmetic tables.
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MultTableArgs {
    #[arg(long)]
    x: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    /// Smallest prime factor, ω, Ω, Ω₂ and τ up to the given limit.
    Sieve,
    /// τ_N(n) for n <= N².
    Tau,
}

#[derive(Debug, Args)]
struct TablesArgs {
    #[arg(long, value_enum)]
    kind: TableKind,
    /// Sieve limit, or N for the τ_N table.
    #[arg(long)]
    size: u64,
    #[arg(long)]
    out: PathBuf,
}

fn open_output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

struct Session {
    format: Format,
    verbose: u8,
    budget: MemoryBudget,
}

impl Session {
    fn note(&self, msg: impl FnOnce() -> String) {
        if self.verbose > 0 {
            eprintln!("psl: {}", msg());
        }
    }
}

fn run_config(ctx: &Session, config: &ExperimentConfig, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let started = Instant::now();
    let mut cache = TableCache::new(ctx.budget);
    let rows = run_trials(config, &mut cache)?;
    ctx.note(|| format!("{} rows in {:.2?}", rows.len(), started.elapsed()));
    let w = open_output(out)?;
    match ctx.format {
        Format::Csv => write_summary_csv(w, &rows)?,
        Format::Json => write_json_lines(w, &rows)?,
    }
    Ok(())
}

fn simulate(ctx: &Session, args: &SimulateArgs) -> anyhow::Result<()> {
    if !(0.0..1.0).contains(&args.alpha) {
        return Err(LabError::Config(format!("--alpha must lie in [0, 1), got {}", args.alpha)).into());
    }
    let config = ExperimentConfig {
        n_values: vec![args.n],
        schedule: AlphaSchedule::Fixed { value: args.alpha },
        trials: args.trials,
        delta: args.delta,
        master_seed: args.seed,
        compute_exact: !args.no_exact,
    };
    config.validate()?;
    run_config(ctx, &config, args.out.as_ref())
}

fn sweep(ctx: &Session, args: &SweepArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    let config = ExperimentConfig::from_json(&text)?;
    run_config(ctx, &config, args.out.as_ref())
}

fn expectation(ctx: &Session, args: &ExpectationArgs) -> anyhow::Result<()> {
    if !(0.0..=1.0).contains(&args.alpha) {
        return Err(LabError::Config(format!("--alpha must lie in [0, 1], got {}", args.alpha)).into());
    }
    let value = if args.mode == ExpectationMode::Brute {
        if args.n > BRUTE_FORCE_MAX_N {
            return Err(LabError::Config(format!(
                "--mode brute needs --n <= {BRUTE_FORCE_MAX_N}, got {}",
                args.n
            ))
            .into());
        }
        brute_force_expected_product_size(args.n, args.alpha)?
    } else {
        let table = TauNTable::build_with_budget(args.n, &ctx.budget)?;
        match args.mode {
            ExpectationMode::Exact => exact_expected_product_size(args.alpha, &table)?,
            ExpectationMode::MainTerm => main_term_product_size(args.alpha, &table)?,
            ExpectationMode::Deficiency => exact_expected_deficiency(args.alpha, &table)?,
            ExpectationMode::Brute => unreachable!(),
        }
    };
    println!("{}", real(value));
    Ok(())
}

/// Returns whether every judged check passed.
fn bounds(ctx: &Session, args: &BoundsArgs) -> anyhow::Result<bool> {
    let suites = args.suite.suites();
    let sieve = if suites.iter().any(|s| s.needs_sieve()) {
        let started = Instant::now();
        let s = SieveTables::build_with_budget(args.limit, &ctx.budget)?;
        ctx.note(|| format!("sieve to {} in {:.2?}", args.limit, started.elapsed()));
        Some(s)
    } else {
        None
    };
    let config = CheckConfig::default();
    let mut rows: Vec<BoundReport> = Vec::new();
    for suite in suites {
        let started = Instant::now();
        let part = run_suite(suite, sieve.as_ref(), &config)?;
        ctx.note(|| format!("suite {suite}: {} checks in {:.2?}", part.len(), started.elapsed()));
        rows.extend(part);
    }
    let w = open_output(args.out.as_ref())?;
    match ctx.format {
        Format::Csv => write_bounds_csv(w, &rows)?,
        Format::Json => write_json_lines(w, &rows)?,
    }
    let failed: Vec<&BoundReport> = rows.iter().filter(|r| r.passed == Some(false)).collect();
    for r in &failed {
        eprintln!("psl: check failed: {} {:?}", r.name, r.parameters);
    }
    Ok(failed.is_empty())
}

fn mult_table(ctx: &Session, args: &MultTableArgs) -> anyhow::Result<()> {
    if args.x == 0 {
        bail!(LabError::Config("--x must be positive".into()));
    }
    let m = multiplication_table_count_with_budget(args.x, &ctx.budget)?;
    let x = args.x as f64;
    let delta = 1.0 - (1.0 + 2f64.ln().ln()) / 2f64.ln();
    // Defined once log log x > 0.
    let reference = (x > std::f64::consts::E).then(|| x / (x.ln().powf(delta) * x.ln().ln().powf(1.5)));
    let mut out = io::stdout().lock();
    match ctx.format {
        Format::Csv => {
            writeln!(out, "x,m,density,reference,delta")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                args.x,
                m,
                real(m as f64 / x),
                opt_real(reference),
                format_sig(delta, 5)
            )?;
        }
        Format::Json => {
            let value = serde_json::json!({
                "x": args.x,
                "m": m,
                "density": m as f64 / x,
                "reference": reference,
                "delta": delta,
            });
            writeln!(out, "{value}")?;
        }
    }
    Ok(())
}

fn tables(ctx: &Session, args: &TablesArgs) -> anyhow::Result<()> {
    let mut w = open_output(Some(&args.out))?;
    match args.kind {
        TableKind::Sieve => SieveTables::build_with_budget(args.size, &ctx.budget)?.write_to(&mut w)?,
        TableKind::Tau => TauNTable::build_with_budget(args.size, &ctx.budget)?.write_to(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<LabError>() {
        Some(LabError::Capacity { .. }) => EXIT_CAPACITY,
        Some(LabError::Config(_) | LabError::Domain(_) | LabError::Range { .. }) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let budget = match MemoryBudget::from_env() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("psl: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let ctx = Session {
        format: cli.format,
        verbose: cli.verbose,
        budget,
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate(&ctx, a).map(|()| true),
        Command::Sweep(a) => sweep(&ctx, a).map(|()| true),
        Command::Expectation(a) => expectation(&ctx, a).map(|()| true),
        Command::Bounds(a) => bounds(&ctx, a),
        Command::MultTable(a) => mult_table(&ctx, a).map(|()| true),
        Command::Tables(a) => tables(&ctx, a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_BOUND_FAILED),
        Err(e) => {
            eprintln!("psl: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
