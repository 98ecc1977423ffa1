//! Dominance-depth ranking of the sample regions under several comparators,
//! over single and multi-period granularities.
//!
//! Run with: cargo run --example rank_localities

use std::fs::File;
use std::io::BufReader;

use mobility_mcdm::aggregate::{
    build_objective_vectors, Aggregation, Granularity, PipelineSettings, Seasonality,
};
use mobility_mcdm::ingest::{parse_calendar, parse_cmr_csv, select_localities, LocalityKey};
use mobility_mcdm::mcdm::{rank_run, Comparator};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = parse_cmr_csv(BufReader::new(File::open(data_path("cmr_sample.csv"))?))?;
    let calendar = parse_calendar(BufReader::new(File::open(data_path(
        "restriction_calendar.csv",
    ))?))?;
    let keys: Vec<LocalityKey> = [
        "FR:Île-de-France",
        "IT:Lombardy",
        "BR:São Paulo",
        "BR:Amazonas",
        "US:New York",
    ]
    .iter()
    .map(|s| LocalityKey::parse_spec(s).unwrap())
    .collect();
    let set = select_localities(&dataset, &calendar, &keys)?;

    let comparators = [
        Comparator::Pareto,
        Comparator::epsilon(0.01)?,
        Comparator::epsilon(0.1)?,
        Comparator::MeanScalarized,
    ];

    // Single 50-day period, AUC over the trend variant.
    let cfg = PipelineSettings::new(
        Seasonality::Trend,
        Granularity::SinglePeriod,
        Aggregation::Auc,
    );
    let run = build_objective_vectors(&set, &cfg)?;
    println!("AUC / trend, one 50-day period:\n");
    print!("{:<18}", "locality");
    for c in &comparators {
        print!("{:>16}", c.describe());
    }
    println!();
    let rankings: Vec<_> = comparators
        .iter()
        .map(|c| rank_run(&run.periods, c).unwrap())
        .collect();
    for key in set.keys() {
        print!("{:<18}", key.display_name());
        for ranking in &rankings {
            print!("{:>16}", ranking.depth(0, key).unwrap());
        }
        println!();
    }

    // Five 10-day periods show how rankings move over time.
    let cfg = PipelineSettings::new(
        Seasonality::Trend,
        Granularity::SubPeriods,
        Aggregation::Auc,
    );
    let run = build_objective_vectors(&set, &cfg)?;
    let ranking = rank_run(&run.periods, &Comparator::Pareto)?;
    println!("\nPareto depth per 10-day period (AUC / trend):\n");
    print!("{:<18}", "locality");
    for p in 0..ranking.periods.len() {
        print!("{:>9}", format!("day {}", p * 10));
    }
    println!();
    for key in set.keys() {
        print!("{:<18}", key.display_name());
        for p in 0..ranking.periods.len() {
            print!("{:>9}", ranking.depth(p, key).unwrap());
        }
        println!();
    }
    Ok(())
}
