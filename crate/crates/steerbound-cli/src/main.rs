//! Command-line surface over the steering-bound library.
//!
//! Every number printed here comes from a library call and every artifact is
//! rendered by the io module's stable writers; this binary only parses flags,
//! routes data, and chooses exit codes. Exit status: 0 on success, 1 when
//! oracle verification finds a mismatch, 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use steerbound::bounds::{
    default_grid, deterministic_table, post_selected_curve, BoundCurve, Criterion,
};
use steerbound::geometry::conditioned_bob_state;
use steerbound::{build_measurement_set, io, oracle, simulator, strategies};
use steerbound::{Error, Result, WernerParams};

#[derive(Parser)]
#[command(
    name = "steerbound",
    version,
    about = "Loss-tolerant steering bounds for Platonic-solid measurement sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the perfect-efficiency bounds k_n and g_n.
    Bounds(BoundsArgs),
    /// Write bound curves, their deterministic points, and the
    /// linear-versus-variance comparison over an efficiency grid.
    Sweep(SweepArgs),
    /// Write critical-purity curves for every loss regime and criterion.
    NaiveSweep(NaiveSweepArgs),
    /// Write the catalog of optimal cheating ensembles for one cell.
    Strategies(StrategiesArgs),
    /// Run a Monte Carlo scenario and write its report.
    Simulate(SimulateArgs),
    /// Cross-check the analytic tables against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Linear,
    Variance,
}

impl From<CriterionArg> for Criterion {
    fn from(arg: CriterionArg) -> Criterion {
        match arg {
            CriterionArg::Linear => Criterion::Linear,
            CriterionArg::Variance => Criterion::Variance,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct BoundsArgs {
    /// Measurement set sizes.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [2usize, 3, 4, 6, 10])]
    n: Vec<usize>,
    /// Restrict to one criterion (default: both).
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct SweepArgs {
    /// Measurement set sizes.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [2usize, 3, 4, 6, 10])]
    n: Vec<usize>,
    /// Restrict to one criterion; the comparison artifacts need both.
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    /// Efficiency grid as start:stop:step (default 0.01:1:0.01).
    #[arg(long)]
    grid: Option<String>,
    /// Directory the artifact files are written into.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct NaiveSweepArgs {
    /// Measurement set sizes.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [2usize, 3, 4, 6, 10])]
    n: Vec<usize>,
    /// Efficiency grid as start:stop:step (default 0.01:1:0.01).
    #[arg(long)]
    grid: Option<String>,
    /// Directory the artifact files are written into.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct StrategiesArgs {
    /// Measurement set size.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = CriterionArg::Linear)]
    criterion: CriterionArg,
    /// Number of answered settings (default: n, the full set).
    #[arg(long)]
    m: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Catalogs are structured; only json is accepted.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario description (JSON file).
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario's trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write a per-trial transcript CSV here.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Output file for the report (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reports are structured; only json is accepted.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Measurement set sizes.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [2usize, 3, 4, 6, 10])]
    n: Vec<usize>,
    /// Sphere-grid resolution of the independent maximization.
    #[arg(long, default_value_t = 200_000)]
    grid_points: usize,
    /// Also write the full reports as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Cap rayon's worker count when STEERBOUND_THREADS is set.
fn configure_threads() -> Result<()> {
    let raw = match std::env::var("STEERBOUND_THREADS") {
        Ok(raw) => raw,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(Error::Io(e.to_string())),
    };
    let threads: usize = match raw.trim().parse() {
        Ok(t) if t >= 1 => t,
        _ => {
            return Err(Error::Parse {
                what: "STEERBOUND_THREADS",
                detail: format!("expected a positive thread count, got {raw:?}"),
            })
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Io(e.to_string()))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::NaiveSweep(args) => cmd_naive_sweep(args),
        Command::Strategies(args) => cmd_strategies(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

// ---------------------------------------------------------------------------
// Shared flag handling.
// ---------------------------------------------------------------------------

/// Validate and dedupe the requested set sizes, preserving order.
fn checked_ns(ns: &[usize]) -> Result<Vec<usize>> {
    if ns.is_empty() {
        return Err(Error::Parse {
            what: "n list",
            detail: "at least one measurement set size is required".into(),
        });
    }
    let mut seen = Vec::new();
    for &n in ns {
        build_measurement_set(n)?;
        if !seen.contains(&n) {
            seen.push(n);
        }
    }
    Ok(seen)
}

fn selected_criteria(arg: Option<CriterionArg>) -> Vec<Criterion> {
    match arg {
        Some(c) => vec![c.into()],
        None => Criterion::ALL.to_vec(),
    }
}

fn parse_grid(spec: Option<&str>) -> Result<Vec<f64>> {
    match spec {
        Some(text) => Ok(io::GridSpec::parse(text)?.points()),
        None => Ok(default_grid()),
    }
}

fn require_json(format: FormatArg, what: &'static str) -> Result<()> {
    if format == FormatArg::Csv {
        return Err(Error::Parse {
            what,
            detail: "this artifact is json-only; drop --format or pass json".into(),
        });
    }
    Ok(())
}

/// Write to the file when given, stdout otherwise.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_artifact(path: &Path, text: &str) -> Result<()> {
    io::write_text(path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn extension(format: FormatArg) -> &'static str {
    match format {
        FormatArg::Csv => "csv",
        FormatArg::Json => "json",
    }
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode> {
    let ns = checked_ns(&args.n)?;
    let criteria = selected_criteria(args.criterion);
    let rows = io::perfect_bound_rows(&ns, &criteria)?;
    let text = match args.format {
        FormatArg::Csv => io::write_bounds_csv(&rows),
        FormatArg::Json => io::to_json_pretty(&rows)?,
    };
    emit(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let ns = checked_ns(&args.n)?;
    let criteria = selected_criteria(args.criterion);
    let grid = parse_grid(args.grid.as_deref())?;
    let ext = extension(args.format);
    let mut comparison = Vec::new();
    let mut comparison_points = Vec::new();
    for &n in &ns {
        let set = build_measurement_set(n)?;
        let mut curves: Vec<BoundCurve> = Vec::new();
        for &criterion in &criteria {
            let curve = post_selected_curve(&set, criterion, &grid)?;
            let sweep_text = match args.format {
                FormatArg::Csv => io::write_curve_csv(curve.n, criterion, &curve.grid),
                FormatArg::Json => io::curve_to_json(&curve)?,
            };
            write_artifact(
                &args.out.join(format!("sweep_{criterion}_n{n}.{ext}")),
                &sweep_text,
            )?;
            let points = io::PointsTable::from_curve(&curve)?;
            let points_text = match args.format {
                FormatArg::Csv => io::write_points_csv(&points),
                FormatArg::Json => io::to_json_pretty(&points)?,
            };
            write_artifact(
                &args.out.join(format!("points_{criterion}_n{n}.{ext}")),
                &points_text,
            )?;
            curves.push(curve);
        }
        if let [linear, variance] = curves.as_slice() {
            comparison.extend(io::comparison_rows(linear, variance)?);
            comparison_points.extend(io::comparison_point_rows(linear, variance)?);
        }
    }
    if !comparison.is_empty() {
        let text = match args.format {
            FormatArg::Csv => io::write_comparison_csv(&comparison),
            FormatArg::Json => io::to_json_pretty(&comparison)?,
        };
        write_artifact(&args.out.join(format!("comparison.{ext}")), &text)?;
        let text = match args.format {
            FormatArg::Csv => io::write_comparison_points_csv(&comparison_points),
            FormatArg::Json => io::to_json_pretty(&comparison_points)?,
        };
        write_artifact(&args.out.join(format!("comparison_points.{ext}")), &text)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_naive_sweep(args: NaiveSweepArgs) -> Result<ExitCode> {
    let ns = checked_ns(&args.n)?;
    let grid = parse_grid(args.grid.as_deref())?;
    let ext = extension(args.format);
    for &n in &ns {
        let set = build_measurement_set(n)?;
        let sweep = io::NaiveSweep::from_grid(&set, &grid)?;
        let text = match args.format {
            FormatArg::Csv => io::write_naive_sweep_csv(&sweep),
            FormatArg::Json => io::to_json_pretty(&sweep)?,
        };
        write_artifact(&args.out.join(format!("naive_n{n}.{ext}")), &text)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_strategies(args: StrategiesArgs) -> Result<ExitCode> {
    require_json(args.format, "strategies format")?;
    let set = build_measurement_set(args.n)?;
    let m = args.m.unwrap_or(args.n);
    let catalog = match args.criterion.into() {
        Criterion::Linear => strategies::optimal_linear_ensembles(&set, m)?,
        Criterion::Variance => strategies::optimal_variance_ensembles(&set, m)?,
    };
    emit(args.out.as_deref(), &io::catalog_to_json(&catalog)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode> {
    require_json(args.format, "simulate format")?;
    let mut scenario = io::scenario_from_json(&io::read_text(&args.scenario)?)?;
    if let Some(trials) = args.trials {
        scenario.trials = trials;
    }
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    scenario.validate()?;
    let report = match &args.transcript {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let file = std::fs::File::create(path)?;
            let mut sink = std::io::BufWriter::new(file);
            let report = simulator::run_with_transcript(&scenario, &mut sink)?;
            std::io::Write::flush(&mut sink)?;
            report
        }
        None => simulator::run(&scenario)?,
    };
    emit(args.out.as_deref(), &io::report_to_json(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let ns = checked_ns(&args.n)?;
    let sphere = oracle::SphereGrid::fibonacci(args.grid_points)?;
    let mut reports = Vec::new();
    for &n in &ns {
        let set = build_measurement_set(n)?;
        let claimed_linear: Vec<f64> = deterministic_table(&set, Criterion::Linear)
            .iter()
            .map(|p| p.value)
            .collect();
        let claimed_variance: Vec<f64> = deterministic_table(&set, Criterion::Variance)
            .iter()
            .map(|p| p.value)
            .collect();
        reports.push(oracle::verify_bound_tables(
            &set,
            &claimed_linear,
            &claimed_variance,
            &sphere,
        )?);
        for mu in [0.3, 0.9] {
            let params = WernerParams::new(mu, 1.0)?;
            reports.push(oracle::verify_conditioned_states(
                &set,
                mu,
                |axis, outcome| conditioned_bob_state(&params, axis, outcome),
            )?);
        }
    }
    let mut all_passed = true;
    let mut failures = 0usize;
    let mut total = 0usize;
    for report in &reports {
        for check in &report.checks {
            total += 1;
            if !check.passed {
                all_passed = false;
                failures += 1;
            }
            println!(
                "[{}] n={} {}: claimed {}, observed {} (tolerance {})",
                if check.passed { "pass" } else { "FAIL" },
                report.n,
                check.name,
                io::fmt_sig(check.claimed, 12),
                io::fmt_sig(check.observed, 12),
                io::fmt_sig(check.tolerance, 3),
            );
        }
    }
    println!(
        "{}: {total} checks, {failures} failures ({} sphere-grid points)",
        if all_passed { "verified" } else { "MISMATCH" },
        sphere.len(),
    );
    if let Some(out) = &args.out {
        io::write_text(out, &io::to_json_pretty(&reports)?)?;
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
