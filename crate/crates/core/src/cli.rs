//! Command-line front end.
//!
//! Human-readable output goes to the supplied writer (stdout in the binary),
//! diagnostics to stderr, and machine artifacts only to paths given by flags.
//! JSON artifacts carry `schema_version` and, unless `--no-timestamp` is
//! set, a `generated_at_unix` field; nothing else in them varies between runs.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dutchbook::{
    evaluate_offer, is_dutch_book, outcome_multipliers, search_dutch_book, verify_no_dutch_book, SearchConfig,
};
use crate::error::{Error, Result};
use crate::growth::{
    experiment_multiplier, infer_probability, kelly_fraction_even_odds, optimize_expected_value,
    optimize_expected_value_grid, optimize_growth, surface_grid, GrowthMethod, SurfaceBounds,
};
use crate::montecarlo::{
    simulate_fixed_stake_ruin, simulate_hitchcock_book, simulate_with_trajectory, write_trajectory_csv, RuinConfig,
    SimulationConfig, TRAJECTORY_ROW_CAP,
};
use crate::reproduce::{self, Expectations, SCHEMA_VERSION};
use crate::types::{BetOffer, CredenceProfile, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_WITNESS: i32 = 3;

/// What a command did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    /// 0 success, 1 failed claim, 2 validation error, 3 no witness found
    /// where one was required.
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
}

impl CommandOutcome {
    fn ok(summary: impl Into<String>, artifacts: Vec<PathBuf>) -> Self {
        Self {
            exit_code: EXIT_OK,
            artifacts,
            summary: summary.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sleeping-kelly", version, about = "Growth-optimal betting and Dutch books for Sleeping Beauty")]
pub struct Cli {
    /// Omit the timestamp from JSON artifacts.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the optimal (a, b) strategy.
    Optimize(OptimizeArgs),
    /// Simulate repeated experiments with a fixed strategy.
    Simulate(SimulateArgs),
    /// Search for or check Dutch books.
    DutchBook(DutchBookArgs),
    /// Write the wealth-multiplier surface as CSV.
    Surface(SurfaceArgs),
    /// Fixed-stake gambler's ruin on a fair coin.
    Ruin(RuinArgs),
    /// The additive Dutch book against an expected-value maximizer.
    Hitchcock(HitchcockArgs),
    /// Kelly fraction at 1:1 odds, or the probability a fraction implies.
    Kelly(KellyArgs),
    /// Run every headline check and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    Growth,
    Ev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    ClosedForm,
    Grid,
    Gradient,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, default_value = "growth")]
    pub objective: Objective,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub method: MethodArg,
    /// Lattice spacing for the grid method.
    #[arg(long, default_value_t = 0.01)]
    pub resolution: f64,
    /// Gradient-norm stopping tolerance for the gradient method.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long)]
    pub experiments: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-experiment CSV, capped at 10,000 rows.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DutchBookArgs {
    #[command(subcommand)]
    pub action: DutchBookAction,
}

#[derive(Debug, Subcommand)]
pub enum DutchBookAction {
    /// Scan the offer lattice for a Dutch book.
    Search(SearchArgs),
    /// Evaluate one offer.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// thirder, halfer or custom:P1,P2 (probabilities of tails).
    #[arg(long)]
    pub credence: CredenceProfile,
    #[arg(long, default_value_t = 0.05)]
    pub resolution: f64,
    /// Stop after this many offers.
    #[arg(long)]
    pub limit: Option<u64>,
    /// Include -1 (total loss) on every axis.
    #[arg(long)]
    pub include_total_loss: bool,
    /// Exit with status 3 when no book is found.
    #[arg(long)]
    pub require_witness: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub credence: CredenceProfile,
    /// aOH,aOT,aWH,aWT; defaults to the halfer counterexample at --epsilon.
    #[arg(long, allow_hyphen_values = true)]
    pub offer: Option<BetOffer>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Samples per axis.
    #[arg(long, default_value_t = 201)]
    pub resolution: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub a_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub a_max: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub b_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b_max: f64,
}

#[derive(Debug, Args)]
pub struct RuinArgs {
    #[arg(long, default_value_t = 10)]
    pub bankroll: u64,
    #[arg(long, default_value_t = 1)]
    pub stake: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HitchcockArgs {
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100.0)]
    pub initial_wealth: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct KellyArgs {
    /// Probability of tails; prints the Kelly fraction.
    #[arg(long)]
    pub p: Option<f64>,
    /// Wager fraction; prints the implied probability of tails.
    #[arg(long, allow_hyphen_values = true)]
    pub fraction: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command, writing human
/// output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let exit_code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", err.render());
                    EXIT_OK
                }
                _ => {
                    eprint!("{}", err.render());
                    EXIT_INVALID
                }
            };
            return CommandOutcome {
                exit_code,
                artifacts: vec![],
                summary: err.kind().to_string(),
            };
        }
    };
    execute(&cli, &Expectations::default(), out)
}

/// Runs a parsed command. `expected` only affects `reproduce`.
pub fn execute(cli: &Cli, expected: &Expectations, out: &mut dyn Write) -> CommandOutcome {
    let ctx = Context {
        timestamp: !cli.no_timestamp,
    };
    let mut buffer = Vec::new();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &ctx, expected, &mut buffer)),
            Err(e) => Err(Error::InvalidConfig(format!("--threads {n}: {e}"))),
        },
        None => dispatch(&cli.command, &ctx, expected, &mut buffer),
    };
    let result = result.and_then(|outcome| {
        out.write_all(&buffer)?;
        out.flush()?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => outcome,
        Err(err) => {
            eprintln!("error: {err}");
            CommandOutcome {
                exit_code: EXIT_INVALID,
                artifacts: vec![],
                summary: err.to_string(),
            }
        }
    }
}

struct Context {
    timestamp: bool,
}

impl Context {
    /// Writes `body` with `schema_version` and the optional timestamp merged
    /// in at the top level.
    fn write_json<T: Serialize>(&self, path: &Path, body: &T) -> Result<PathBuf> {
        let mut value = serde_json::to_value(body)?;
        let obj = match value {
            Value::Object(ref mut map) => map,
            _ => unreachable!("artifact bodies are JSON objects"),
        };
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        if self.timestamp {
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            obj.insert("generated_at_unix".into(), json!(now));
        }
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, &value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(path.to_path_buf())
    }

    fn maybe_json<T: Serialize>(&self, path: Option<&PathBuf>, body: &T, artifacts: &mut Vec<PathBuf>) -> Result<()> {
        if let Some(p) = path {
            artifacts.push(self.write_json(p, body)?);
        }
        Ok(())
    }
}

fn dispatch(cmd: &Command, ctx: &Context, expected: &Expectations, out: &mut dyn Write) -> Result<CommandOutcome> {
    match cmd {
        Command::Optimize(args) => cmd_optimize(args, ctx, out),
        Command::Simulate(args) => cmd_simulate(args, ctx, out),
        Command::DutchBook(args) => match &args.action {
            DutchBookAction::Search(s) => cmd_search(s, ctx, out),
            DutchBookAction::Verify(v) => cmd_verify(v, ctx, out),
        },
        Command::Surface(args) => cmd_surface(args, out),
        Command::Ruin(args) => cmd_ruin(args, ctx, out),
        Command::Hitchcock(args) => cmd_hitchcock(args, ctx, out),
        Command::Kelly(args) => cmd_kelly(args, out),
        Command::Reproduce(args) => cmd_reproduce(args, ctx, expected, out),
    }
}

fn cmd_optimize(args: &OptimizeArgs, ctx: &Context, out: &mut dyn Write) -> Result<CommandOutcome> {
    let (result, label) = match (args.objective, args.method) {
        (Objective::Growth, m) => {
            let method = match m {
                MethodArg::ClosedForm => GrowthMethod::ClosedForm,
                MethodArg::Grid => GrowthMethod::Grid {
                    resolution: args.resolution,
                },
                MethodArg::Gradient => GrowthMethod::Gradient {
                    tolerance: args.tolerance,
                },
            };
            (optimize_growth(method)?, "multiplier")
        }
        (Objective::Ev, MethodArg::ClosedForm) => (optimize_expected_value(), "expected value"),
        (Objective::Ev, MethodArg::Grid) => (optimize_expected_value_grid(args.resolution)?, "expected value"),
        (Objective::Ev, MethodArg::Gradient) => {
            return Err(Error::InvalidConfig(
                "the expected-value optimum lies on the boundary; use closed-form or grid".into(),
            ))
        }
    };
    let summary = format!(
        "a={}, b={}, {label}={}",
        fmt6(result.strategy.a()),
        fmt6(result.strategy.b()),
        fmt6(result.objective_value)
    );
    writeln!(out, "{summary}")?;
    let objective = match args.objective {
        Objective::Growth => "growth",
        Objective::Ev => "expected_value",
    };
    let mut artifacts = vec![];
    ctx.maybe_json(
        args.json.as_ref(),
        &json!({"objective": objective, "result": result}),
        &mut artifacts,
    )?;
    Ok(CommandOutcome::ok(summary, artifacts))
}

fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn cmd_simulate(args: &SimulateArgs, ctx: &Context, out: &mut dyn Write) -> Result<CommandOutcome> {
    let strategy = Strategy::new(args.a, args.b)?;
    let cfg = SimulationConfig::new(strategy, args.experiments, args.seed)?;
    let rows = if args.trajectory.is_some() { TRAJECTORY_ROW_CAP } else { 0 };
    let (report, trajectory) = simulate_with_trajectory(&cfg, rows);
    let analytic = experiment_multiplier(strategy);
    let rel = if analytic > 0.0 {
        (report.empirical_multiplier - analytic).abs() / analytic
    } else {
        report.empirical_multiplier
    };
    let summary = format!(
        "{} experiments (seed {}): empirical multiplier {}, analytic {}, relative error {:.3e}, final ratio {}",
        report.num_experiments,
        report.seed,
        fmt6(report.empirical_multiplier),
        fmt6(analytic),
        rel,
        report.final_wealth_ratio
    );
    writeln!(out, "{summary}")?;
    let mut artifacts = vec![];
    if let Some(path) = &args.trajectory {
        write_trajectory_csv(&trajectory, BufWriter::new(File::create(path)?))?;
        artifacts.push(path.clone());
    }
    ctx.maybe_json(
        args.json.as_ref(),
        &json!({"strategy": strategy, "analytic_multiplier": analytic, "report": report}),
        &mut artifacts,
    )?;
    Ok(CommandOutcome::ok(summary, artifacts))
}

fn cmd_search(args: &SearchArgs, ctx: &Context, out: &mut dyn Write) -> Result<CommandOutcome> {
    let cfg = SearchConfig {
        resolution: args.resolution,
        limit: args.limit.unwrap_or(u64::MAX),
        include_total_loss: args.include_total_loss,
    };
    let cert = search_dutch_book(&args.credence, cfg)?;
    let mut artifacts = vec![];
    ctx.maybe_json(args.json.as_ref(), &cert, &mut artifacts)?;
    let mut summary = match &cert.book_found {
        Some(book) => format!(
            "Dutch book found after {} offers: {} (heads x{}, tails x{})",
            cert.offers_examined,
            book,
            fmt6(cert.heads_multiplier.unwrap_or(f64::NAN)),
            fmt6(cert.tails_multiplier.unwrap_or(f64::NAN))
        ),
        None => format!("no Dutch book among {} offers", cert.offers_examined),
    };
    if let Some(p) = artifacts.first() {
        summary.push_str(&format!(" [{}]", p.display()));
    }
    writeln!(out, "{summary}")?;
    let exit_code = if cert.book_found.is_none() && args.require_witness {
        EXIT_NO_WITNESS
    } else {
        EXIT_OK
    };
    Ok(CommandOutcome {
        exit_code,
        artifacts,
        summary,
    })
}

fn cmd_verify(args: &VerifyArgs, ctx: &Context, out: &mut dyn Write) -> Result<CommandOutcome> {
    let offer = match args.offer {
        Some(o) => o,
        None => BetOffer::halfer_counterexample(args.epsilon)?,
    };
    let acceptance = evaluate_offer(&offer, &args.credence);
    let outcomes = outcome_multipliers(&offer);
    let book = is_dutch_book(&offer, &args.credence);
    let identity = verify_no_dutch_book(&args.credence, &offer).ok();
    let verdict = if book { "Dutch book" } else { "not a Dutch book" };
    let mut summary = format!(
        "verdict: {verdict} (presleep {} {}, awake {} {}, heads x{}, tails x{})",
        fmt6(acceptance.presleep_product),
        if acceptance.accepted_presleep { "accepted" } else { "rejected" },
        fmt6(acceptance.awake_product),
        if acceptance.accepted_awake { "accepted" } else { "rejected" },
        fmt6(outcomes.heads),
        fmt6(outcomes.tails),
    );
    let mut artifacts = vec![];
    ctx.maybe_json(
        args.json.as_ref(),
        &json!({
            "credences": args.credence,
            "offer": offer,
            "acceptance": acceptance,
            "outcomes": outcomes,
            "dutch_book": book,
            "factorization": identity,
        }),
        &mut artifacts,
    )?;
    if let Some(p) = artifacts.first() {
        summary.push_str(&format!(" [{}]", p.display()));
    }
    writeln!(out, "{summary}")?;
    Ok(CommandOutcome::ok(summary, artifacts))
}

fn cmd_surface(args: &SurfaceArgs, out: &mut dyn Write) -> Result<CommandOutcome> {
    let bounds = SurfaceBounds {
        a_min: args.a_min,
        a_max: args.a_max,
        b_min: args.b_min,
        b_max: args.b_max,
    };
    let grid = surface_grid(bounds, args.resolution)?;
    grid.write_csv(BufWriter::new(File::create(&args.out)?))?;
    let best = grid.argmax();
    let summary = format!(
        "wrote {} cells to {}; argmax a={}, b={}, multiplier={}",
        grid.cells.len(),
        args.out.display(),
        fmt6(best.a),
        fmt6(best.b),
        fmt6(best.multiplier)
    );
    writeln!(out, "{summary}")?;
    Ok(CommandOutcome::ok(summary, vec![args.out.clone()]))
}

fn cmd_ruin(args: &RuinArgs, ctx: &Context, out: &mut dyn Write) -> Result<CommandOutcome> {
    let cfg = RuinConfig {
        bankroll: args.bankroll,
        stake: args.stake,
        max_steps: args.max_steps,
        trials: args.trials,
        seed: args.seed,
    };
    let report = simulate_fixed_stake_ruin(&cfg)?;
    let summary = format!(
        "{} of {} bankrolls ruined within {} bets (fraction {})",
        report.ruined,
        report.trials,
        cfg.max_steps,
        fmt6(report.ruin_fraction)
    );
    writeln!(out, "{summary}")?;
    let mut artifacts = vec![];
    ctx.maybe_json(args.json.as_ref(), &json!({"config": cfg, "report": report}), &mut artifacts)?;
    Ok(CommandOutcome::ok(summary, artifacts))
}

fn cmd_hitchcock(args: &HitchcockArgs, ctx: &Context, out: &mut dyn Write) -> Result<CommandOutcome> {
    let o = simulate_hitchcock_book(args.epsilon, args.initial_wealth)?;
    let summary = format!(
        "heads {:+}, tails {:+}: {}",
        o.heads_pnl,
        o.tails_pnl,
        if o.is_dutch_book() { "loses either way" } else { "not a Dutch book" }
    );
    writeln!(out, "{summary}")?;
    let mut artifacts = vec![];
    ctx.maybe_json(
        args.json.as_ref(),
        &json!({"epsilon": args.epsilon, "initial_wealth": args.initial_wealth, "outcome": o}),
        &mut artifacts,
    )?;
    Ok(CommandOutcome::ok(summary, artifacts))
}

fn cmd_kelly(args: &KellyArgs, out: &mut dyn Write) -> Result<CommandOutcome> {
    let summary = match (args.p, args.fraction) {
        (Some(p), _) => {
            crate::types::check_range("p", p, 0.0, 1.0)?;
            format!("bet fraction {} on tails", fmt6(kelly_fraction_even_odds(p)))
        }
        (None, Some(f)) => {
            crate::types::check_range("fraction", f, -1.0, 1.0)?;
            format!("implied probability of tails {}", fmt6(infer_probability(f)))
        }
        (None, None) => unreachable!("clap requires one of --p/--fraction"),
    };
    writeln!(out, "{summary}")?;
    Ok(CommandOutcome::ok(summary, vec![]))
}

fn cmd_reproduce(
    args: &ReproduceArgs,
    ctx: &Context,
    expected: &Expectations,
    out: &mut dyn Write,
) -> Result<CommandOutcome> {
    let report = reproduce::run_with(expected);
    writeln!(out, "{:<26} {:<6} {:>9}  description", "claim", "result", "seconds")?;
    for c in &report.claims {
        writeln!(
            out,
            "{:<26} {:<6} {:>9.3}  {}",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.elapsed.as_secs_f64(),
            c.description
        )?;
    }
    let mut artifacts = vec![];
    ctx.maybe_json(args.json.as_ref(), &report, &mut artifacts)?;
    let failing: Vec<&str> = report.failing().map(|c| c.id.as_str()).collect();
    let (exit_code, summary) = if failing.is_empty() {
        (EXIT_OK, format!("all {} claims pass", report.claims.len()))
    } else {
        (EXIT_CLAIM_FAILED, format!("failing: {}", failing.join(", ")))
    };
    writeln!(out, "{summary}")?;
    Ok(CommandOutcome {
        exit_code,
        artifacts,
        summary,
    })
}
