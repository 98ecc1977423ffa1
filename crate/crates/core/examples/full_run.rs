//! Drive the whole pipeline the way the `analyze` binary does: resolve a
//! configuration, execute every factor combination, and write the output
//! bundle.
//!
//! Run with: cargo run --example full_run
//! Output lands in target/example_full_run/.

use mobility_mcdm::report::{resolve_config, run_pipeline, write_outputs, CliOverrides};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = concat!(env!("CARGO_MANIFEST_DIR"), "/../../target/example_full_run");
    let config = resolve_config(
        CliOverrides {
            data: Some(data_path("cmr_sample.csv")),
            calendar: Some(data_path("restriction_calendar.csv")),
            localities: Some(
                "FR:Île-de-France,IT:Lombardy,BR:São Paulo,BR:Amazonas,US:New York".into(),
            ),
            level: Some("region".into()),
            seasonality: Some("both".into()),
            aggregation: Some("all".into()),
            granularity: Some("both".into()),
            comparison: Some("all".into()),
            epsilon: Some("0.01,0.05,0.1".into()),
            out: Some(out.into()),
            formats: Some("csv,json,svg".into()),
            ..Default::default()
        },
        None,
    )?;

    let result = run_pipeline(&config)?;
    write_outputs(&result, &config)?;

    println!("config hash: {}", result.config_hash);
    println!("combinations: {}", result.combos.len());
    for warning in &result.warnings {
        println!("warning: {warning}");
    }
    for failure in &result.failures {
        println!("failed: {} ({})", failure.combo, failure.error);
    }

    // Echo the single-period Pareto table the way the CLI writes it.
    if let Some(table) = mobility_mcdm::report::ranking_table(
        &result,
        "pareto",
        mobility_mcdm::aggregate::Granularity::SinglePeriod,
        0,
    ) {
        println!("\n{}", table.to_csv());
    }
    println!("outputs in {out}");
    Ok(())
}
