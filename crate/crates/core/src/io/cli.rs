use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use clap::{Args, Parser, Subcommand};

use super::config::{RunConfig, BOUND_G_GRID};
use super::report::{write_bounds_csv, write_records_csv, RunManifest, SummaryReport};
use super::{read_counts, IoError, EXIT_CHECK_FAILED, EXIT_DEGENERATE, EXIT_OK, EXIT_USAGE};
use crate::asymptotics::{confidence_interval, plugin_sigma2};
use crate::bounds::{bound_table, EmpiricalBudget};
use crate::estimator::plug_in_estimate;
use crate::montecarlo::{evaluate_checks, run_experiment, Check, CheckOutcome};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "jeffreys", version, about = "Symmetric KL divergence estimation and Monte Carlo checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plug-in estimate, plug-in variance and confidence interval from a counts CSV.
    Estimate {
        counts: PathBuf,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Run replications and write records, summary and manifest.
    Simulate(RunArgs),
    /// Normality and coverage at the largest sample size.
    CltCheck(RunArgs),
    /// Median |eta| must shrink as n grows.
    LlnCheck(RunArgs),
    /// Concentration bounds against empirical tail frequencies.
    BoundsCheck(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration; the built-in default for the command otherwise.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "jeffreys-out")]
    out_dir: PathBuf,
    /// Overrides `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `ci_level`.
    #[arg(long)]
    level: Option<f64>,
    /// Validate the configuration and exit without writing anything.
    #[arg(long)]
    dry_run: bool,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let command_line = std::iter::once("jeffreys".into())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy()))
        .collect::<Vec<_>>()
        .join(" ");
    let result = match cli.command {
        Command::Estimate { counts, level } => estimate(&counts, level, out),
        Command::Simulate(a) => experiment(Kind::Simulate, a, &command_line, out),
        Command::CltCheck(a) => experiment(Kind::Clt, a, &command_line, out),
        Command::LlnCheck(a) => experiment(Kind::Lln, a, &command_line, out),
        Command::BoundsCheck(a) => experiment(Kind::Bounds, a, &command_line, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                IoError::Model(Error::Degenerate(_) | Error::AllDegenerate) => EXIT_DEGENERATE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn estimate(path: &Path, level: f64, out: &mut dyn Write) -> Result<i32, IoError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level).into());
    }
    let counts = read_counts(path).map_err(|e| match e {
        IoError::Parse { line, message } => IoError::Format(format!("{}:{line}: {message}", path.display())),
        other => other,
    })?;
    let est = plug_in_estimate(&counts);
    writeln!(out, "n          {}", est.n)?;
    let value = match est.outcome {
        Ok(v) => v,
        Err(reason) => {
            writeln!(out, "estimate   undefined ({reason})")?;
            return Ok(EXIT_DEGENERATE);
        }
    };
    let var = plugin_sigma2(&counts)?;
    let ci = confidence_interval(&est, &var, level)?;
    writeln!(out, "estimate   {value:.10}")?;
    writeln!(out, "sigma2_hat {:.10}", var.sigma2)?;
    writeln!(out, "ci_{level}   [{:.10}, {:.10}]", ci.lower, ci.upper)?;
    if ci.degenerate_variance {
        writeln!(out, "warning: plug-in variance is zero; the interval is a single point")?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Simulate,
    Clt,
    Lln,
    Bounds,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Simulate => "simulate",
            Kind::Clt => "clt-check",
            Kind::Lln => "lln-check",
            Kind::Bounds => "bounds-check",
        }
    }

    fn default_config(self) -> RunConfig {
        match self {
            Kind::Simulate => RunConfig::default_simulate(),
            Kind::Clt => RunConfig::default_clt(),
            Kind::Lln => RunConfig::default_lln(),
            Kind::Bounds => RunConfig::default_bounds(),
        }
    }

    fn forced_checks(self) -> Option<Vec<Check>> {
        match self {
            Kind::Simulate => None,
            Kind::Clt => Some(vec![Check::Clt, Check::Coverage]),
            Kind::Lln => Some(vec![Check::Lln]),
            Kind::Bounds => Some(vec![Check::Bounds]),
        }
    }
}

fn experiment(kind: Kind, args: RunArgs, command_line: &str, out: &mut dyn Write) -> Result<i32, IoError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => kind.default_config(),
    };
    if let Some(checks) = kind.forced_checks() {
        config.checks = checks;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(level) = args.level {
        config.ci_level = level;
    }
    let experiment = config.to_experiment()?;
    if args.dry_run {
        writeln!(out, "{}: configuration is valid", kind.name())?;
        return Ok(EXIT_OK);
    }

    let started_at = timestamp();
    let wants_bounds = experiment.checks.contains(&Check::Bounds);
    let wants_records = !matches!(kind, Kind::Bounds);

    let mut checks: Vec<CheckOutcome> = Vec::new();
    let mut per_n = Vec::new();
    let mut records = None;
    let mut bounds = None;
    if wants_records {
        let output = run_experiment(&experiment)?;
        checks.extend(evaluate_checks(&experiment, &output));
        per_n = output.summaries;
        records = Some(output.records);
    }
    if wants_bounds {
        let budget = EmpiricalBudget { replications: config.replications, master_seed: config.master_seed };
        let rows = bound_table(&experiment.model, &config.n_values, &BOUND_G_GRID, Some(budget))?;
        let violations: Vec<String> = rows
            .iter()
            .filter(|r| r.is_valid() == Some(false))
            .map(|r| format!("{} n={} g={}", r.kind.name(), r.n, r.g))
            .collect();
        let detail = if violations.is_empty() {
            format!("{} bound evaluations, none violated", rows.len())
        } else {
            format!("violated: {}", violations.join("; "))
        };
        checks.push(CheckOutcome { check: Check::Bounds, passed: violations.is_empty(), detail });
        bounds = Some(rows);
    }
    checks.sort_by_key(|c| c.check);
    let all_passed = checks.iter().all(|c| c.passed);

    fs::create_dir_all(&args.out_dir)?;
    if let Some(records) = &records {
        let file = BufWriter::new(File::create(args.out_dir.join("records.csv"))?);
        write_records_csv(records, file)?;
    }
    if let Some(rows) = &bounds {
        let file = BufWriter::new(File::create(args.out_dir.join("bounds.csv"))?);
        write_bounds_csv(rows, file)?;
    }
    let summary = SummaryReport {
        true_divergence: experiment.model.true_divergence(),
        sigma2: crate::asymptotics::exact_sigma2(&experiment.model),
        per_n,
        bounds,
        checks: checks.clone(),
    };
    write_json(&args.out_dir.join("summary.json"), &summary)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: command_line.to_string(),
        master_seed: config.master_seed,
        config,
        started_at,
        finished_at: timestamp(),
        checks: checks.clone(),
        all_passed,
    };
    write_json(&args.out_dir.join("manifest.json"), &manifest)?;

    for c in &checks {
        writeln!(out, "{:<8} {}  {}", c.check.name(), if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
    }
    writeln!(out, "wrote {}", args.out_dir.display())?;
    Ok(if all_passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut file, value)?;
    writeln!(file)?;
    file.flush()?;
    Ok(())
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}
