//! Window extraction, unit-variance scaling, and the three aggregation
//! measures (mean, AUC, rank sums) over the analysis window.
//!
//! Run with: cargo run --example aggregate_windows

use std::fs::File;
use std::io::BufReader;

use mobility_mcdm::aggregate::{
    agg_auc, agg_mean, agg_rank_sums, global_shift, prepare_windows, split_periods, Aggregation,
    Granularity, PipelineSettings, Seasonality,
};
use mobility_mcdm::ingest::{
    parse_calendar, parse_cmr_csv, select_localities, LocalityKey, PlaceCategory,
};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = parse_cmr_csv(BufReader::new(File::open(data_path("cmr_sample.csv"))?))?;
    let calendar = parse_calendar(BufReader::new(File::open(data_path(
        "restriction_calendar.csv",
    ))?))?;
    let keys: Vec<LocalityKey> = ["FR:Île-de-France", "IT:Lombardy", "US:New York"]
        .iter()
        .map(|s| LocalityKey::parse_spec(s).unwrap())
        .collect();
    let set = select_localities(&dataset, &calendar, &keys)?;

    let mut cfg = PipelineSettings::new(
        Seasonality::Trend,
        Granularity::SinglePeriod,
        Aggregation::Mean,
    );
    cfg.scale = true;

    // Scaled 50-day windows per (locality, category), day 0 = restriction.
    let windows = prepare_windows(&set, &cfg)?;
    let cat_index = PlaceCategory::Workplaces.index(); // within the analysis set

    println!("Workplaces, scaled trend windows (50 days from each restriction):\n");
    println!(
        "{:<16} {:>10} {:>10} {:>12}",
        "locality", "mean", "divisor", "window start"
    );
    for per_locality in &windows {
        let w = &per_locality[cat_index];
        println!(
            "{:<16} {:>10.3} {:>10.2} {:>12}",
            w.key.display_name(),
            agg_mean(w)?,
            w.scale_divisor,
            w.start.to_string()
        );
    }

    // AUC needs non-negative data: one shared shift across the whole run.
    let flat: Vec<_> = windows.iter().flatten().cloned().collect();
    let (shifted, shift) = global_shift(&flat);
    println!("\nglobal shift for AUC: {shift:.3}");
    for w in shifted.iter().skip(cat_index).step_by(5) {
        println!("  {:<16} AUC {:>9.2}", w.key.display_name(), agg_auc(w)?);
    }

    // Rank sums compare localities day by day.
    let per_cat: Vec<_> = windows.iter().map(|ws| &ws[cat_index]).collect();
    let sums = agg_rank_sums(&per_cat)?;
    println!("\nrank sums (lower = more consistent reduction):");
    for (w, sum) in per_cat.iter().zip(&sums) {
        println!("  {:<16} {:>6.1}", w.key.display_name(), sum);
    }

    // Five 10-day sub-periods of the first locality's window.
    let parts = split_periods(&windows[0][cat_index], 10)?;
    println!(
        "\n{} sub-period means:",
        windows[0][cat_index].key.display_name()
    );
    for (i, p) in parts.iter().enumerate() {
        println!(
            "  days {:>2}-{:>2}: {:>7.3}",
            i * 10,
            i * 10 + 9,
            agg_mean(p)?
        );
    }
    Ok(())
}
