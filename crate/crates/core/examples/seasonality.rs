//! Compare the two seasonality treatments on one series: a centered 7-day
//! moving average versus the trend component of the seasonal-trend
//! decomposition by loess.
//!
//! Run with: cargo run --example seasonality

use std::fs::File;
use std::io::BufReader;

use mobility_mcdm::ingest::{parse_calendar, parse_cmr_csv, LocalityKey, PlaceCategory};
use mobility_mcdm::preprocess::{
    calibrate, moving_average, repair_gaps, stl_decompose, stl_trend, ProcessedSeries, StlParams,
};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn std_dev(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = parse_cmr_csv(BufReader::new(File::open(data_path("cmr_sample.csv"))?))?;
    let calendar = parse_calendar(BufReader::new(File::open(data_path(
        "restriction_calendar.csv",
    ))?))?;

    let key = LocalityKey::parse_spec("IT:Lombardy")?;
    let restriction = calendar.get(&key).unwrap().first_restriction;
    let raw = ProcessedSeries::from_raw(dataset.series(&key, PlaceCategory::Parks).unwrap());
    let calibrated = calibrate(&repair_gaps(&raw, 3)?, restriction)?;

    let ma = moving_average(&calibrated, 7)?;
    let params = StlParams::default();
    let trend = stl_trend(&calibrated, 7, &params)?;

    println!("{} / Parks, calibrated\n", key.display_name());
    println!(
        "{:<12} {:>10} {:>10} {:>10}",
        "date", "raw", "7-day MA", "trend"
    );
    for i in (0..calibrated.len()).step_by(7).take(10) {
        let (date, raw_v) = calibrated.observations[i];
        println!(
            "{:<12} {:>10.1} {:>10.1} {:>10.1}",
            date.to_string(),
            raw_v,
            ma.observations[i].1,
            trend.observations[i].1
        );
    }

    // Day-to-day roughness: the trend is smoother than the moving average,
    // which in turn is smoother than the raw data.
    let roughness = |s: &ProcessedSeries| {
        let v = s.values();
        let diffs: Vec<f64> = v.windows(2).map(|p| p[1] - p[0]).collect();
        std_dev(&diffs)
    };
    println!("\nday-to-day roughness (std of first differences):");
    println!("  raw    {:>7.2}", roughness(&calibrated));
    println!("  MA     {:>7.2}", roughness(&ma));
    println!("  trend  {:>7.2}", roughness(&trend));

    // The decomposition is additive: trend + seasonal + remainder = input.
    let parts = stl_decompose(&calibrated.values(), 7, &params)?;
    let max_err = calibrated
        .values()
        .iter()
        .enumerate()
        .map(|(i, y)| (y - parts.trend[i] - parts.seasonal[i] - parts.remainder[i]).abs())
        .fold(0.0f64, f64::max);
    println!("\nmax |input - (trend + seasonal + remainder)| = {max_err:.2e}");
    Ok(())
}
