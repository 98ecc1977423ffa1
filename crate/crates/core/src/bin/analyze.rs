//! Command-line driver: runs the full factor matrix over a mobility CSV and
//! restriction calendar, writing tables, charts, and the result bundle.
//!
//! Exit codes: 0 on full success, 2 when some factor combinations failed,
//! 1 on fatal errors.

use std::process::ExitCode;

use clap::Parser;

use mobility_mcdm::report::{
    resolve_config, run_pipeline, write_outputs, CliOverrides, FileConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "analyze",
    about = "Multi-criteria ranking of community mobility data",
    long_about = "Calibrates per-locality mobility series, reduces weekday seasonality, \
aggregates the analysis window, and ranks localities by Pareto-compliant dominance depth \
over a configurable factor matrix."
)]
struct Cli {
    /// Mobility CSV (global community-mobility layout)
    #[arg(long)]
    data: Option<String>,
    /// Restriction-dates calendar CSV
    #[arg(long)]
    calendar: Option<String>,
    /// Comma-separated locality keys, e.g. "IT:Lombardy,FR:Île-de-France" or "ES,NZ"
    #[arg(long)]
    localities: Option<String>,
    /// Locality level of the run
    #[arg(long, value_parser = ["region", "country"])]
    level: Option<String>,
    /// Seasonality treatment(s)
    #[arg(long, value_parser = ["ma", "trend", "both"])]
    seasonality: Option<String>,
    /// Aggregation measure(s)
    #[arg(long, value_parser = ["mean", "auc", "rs", "all"])]
    aggregation: Option<String>,
    /// Temporal granularity: one 50-day period or 10-day sub-periods
    #[arg(long, value_parser = ["50", "10", "both"])]
    granularity: Option<String>,
    /// Comparison approach(es)
    #[arg(long, value_parser = ["pareto", "epsilon", "mean", "all"])]
    comparison: Option<String>,
    /// Comma-separated tolerance levels for epsilon-dominance
    #[arg(long)]
    epsilon: Option<String>,
    /// Epsilon-dominance form
    #[arg(long, value_parser = ["multiplicative", "additive"])]
    epsilon_form: Option<String>,
    /// Analysis window length in days
    #[arg(long)]
    window_length: Option<usize>,
    /// Sub-period length in days
    #[arg(long)]
    period_length: Option<usize>,
    /// Moving-average window (odd)
    #[arg(long)]
    ma_window: Option<usize>,
    /// Moving-average alignment
    #[arg(long, value_parser = ["centered", "trailing"])]
    ma_mode: Option<String>,
    /// Seasonal period in days for the trend decomposition
    #[arg(long)]
    stl_period: Option<usize>,
    /// Longest interior gap repaired by interpolation
    #[arg(long)]
    max_gap: Option<u64>,
    /// Pin the AUC non-negativity shift instead of recomputing it
    #[arg(long)]
    pin_shift: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
    /// Comma-separated output formats (csv,json,svg)
    #[arg(long)]
    formats: Option<String>,
    /// TOML config file mirroring every flag; flags override file values
    #[arg(long)]
    config: Option<String>,
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    let file = match &cli.config {
        Some(path) => Some(FileConfig::from_toml(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let overrides = CliOverrides {
        data: cli.data,
        calendar: cli.calendar,
        localities: cli.localities,
        level: cli.level,
        seasonality: cli.seasonality,
        aggregation: cli.aggregation,
        granularity: cli.granularity,
        comparison: cli.comparison,
        epsilon: cli.epsilon,
        epsilon_form: cli.epsilon_form,
        window_length: cli.window_length,
        period_length: cli.period_length,
        ma_window: cli.ma_window,
        ma_mode: cli.ma_mode,
        stl_period: cli.stl_period,
        max_gap: cli.max_gap,
        pin_shift: cli.pin_shift,
        out: cli.out,
        formats: cli.formats,
    };
    let config = resolve_config(overrides, file)?;
    let result = run_pipeline(&config)?;
    write_outputs(&result, &config)?;

    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    for failure in &result.failures {
        eprintln!("failed combination {}: {}", failure.combo, failure.error);
    }
    println!(
        "{} combination(s) written to {} (config {})",
        result.combos.len(),
        config.out.display(),
        result.config_hash
    );
    Ok(result.fully_succeeded())
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for partial runs, so argument errors map to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::FAILURE;
        }
        Err(help_or_version) => {
            let _ = help_or_version.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
