//! Load the bundled sample dataset and calendar, select a locality set, and
//! print a coverage summary.
//!
//! Run with: cargo run --example parse_dataset

use std::fs::File;
use std::io::BufReader;

use mobility_mcdm::ingest::{
    coverage_report, parse_calendar, parse_cmr_csv, select_localities, LocalityKey,
};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = parse_cmr_csv(BufReader::new(File::open(data_path("cmr_sample.csv"))?))?;
    let calendar = parse_calendar(BufReader::new(File::open(data_path(
        "restriction_calendar.csv",
    ))?))?;

    println!(
        "dataset: {} localities, {} rows, {} observations",
        dataset.len(),
        dataset.rows_read(),
        dataset.observation_count()
    );
    println!("calendar: {} entries\n", calendar.len());

    let keys = vec![
        LocalityKey::parse_spec("IT:Lombardy")?,
        LocalityKey::parse_spec("FR:Île-de-France")?,
        LocalityKey::parse_spec("ES")?,
    ];
    let set = select_localities(&dataset, &calendar, &keys)?;

    for bundle in &set.localities {
        println!(
            "{} ({}), restriction {}, relaxation {}",
            bundle.key.display_name(),
            bundle.key,
            bundle.calendar.first_restriction,
            bundle
                .calendar
                .first_relaxation
                .map(|d| d.to_string())
                .unwrap_or_else(|| "-".into())
        );
        for (category, coverage) in coverage_report(bundle, 50, 3) {
            let series = bundle.series(category);
            println!(
                "  {:<20} {:>4} obs  [{} .. {}]  50-day window: {}",
                category.label(),
                series.len(),
                series.first_date().unwrap(),
                series.last_date().unwrap(),
                coverage
            );
        }
    }
    Ok(())
}
