//! Calibrate a series so its pre-restriction mean is zero.
//!
//! The Lombardy Parks series in the sample data runs well above its baseline
//! before the restriction date, so calibration shifts the whole curve down.
//!
//! Run with: cargo run --example calibrate_series

use std::fs::File;
use std::io::BufReader;

use mobility_mcdm::ingest::{parse_calendar, parse_cmr_csv, LocalityKey, PlaceCategory};
use mobility_mcdm::preprocess::{calibrate, repair_gaps, ProcessedSeries};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = parse_cmr_csv(BufReader::new(File::open(data_path("cmr_sample.csv"))?))?;
    let calendar = parse_calendar(BufReader::new(File::open(data_path(
        "restriction_calendar.csv",
    ))?))?;

    let lombardy = LocalityKey::parse_spec("IT:Lombardy")?;
    let restriction = calendar.get(&lombardy).unwrap().first_restriction;

    for category in [PlaceCategory::Parks, PlaceCategory::Workplaces] {
        let raw = ProcessedSeries::from_raw(dataset.series(&lombardy, category).unwrap());
        let repaired = repair_gaps(&raw, 3)?;
        let calibrated = calibrate(&repaired, restriction)?;

        let pre: Vec<f64> = calibrated
            .observations
            .iter()
            .filter(|(d, _)| *d < restriction)
            .map(|(_, v)| *v)
            .collect();
        let pre_mean = pre.iter().sum::<f64>() / pre.len() as f64;

        println!("{} / {}", lombardy.display_name(), category.label());
        println!(
            "  subtracted offset:        {:+.2}",
            calibrated.calibration_offset
        );
        println!("  pre-restriction mean now: {:+.2e}", pre_mean);
        print!("  first week after restriction:");
        for (date, value) in calibrated
            .observations
            .iter()
            .filter(|(d, _)| *d >= restriction)
            .take(7)
        {
            let _ = date;
            print!(" {value:+.0}");
        }
        println!("\n");
    }
    Ok(())
}
