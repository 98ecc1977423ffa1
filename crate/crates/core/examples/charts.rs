//! Render the three chart types to SVG files: a radar chart of one period's
//! objective vectors, a parallel-coordinates plot of depth trajectories, and
//! a calibrated series plot with restriction markers.
//!
//! Run with: cargo run --example charts
//! Output lands in target/example_charts/.

use std::fs::{self, File};
use std::io::BufReader;

use mobility_mcdm::aggregate::{
    build_objective_vectors, Aggregation, Granularity, PipelineSettings, Seasonality,
};
use mobility_mcdm::ingest::{
    parse_calendar, parse_cmr_csv, select_localities, LocalityKey, PlaceCategory,
};
use mobility_mcdm::mcdm::{rank_run, Comparator};
use mobility_mcdm::preprocess::{
    calibrate, moving_average, repair_gaps, stl_trend, ProcessedSeries, StlParams,
};
use mobility_mcdm::report::{
    parallel_coordinates, radar_chart, series_plot, ChartMeta, WindowMarkers,
};

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::path::PathBuf::from(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../target/example_charts"
    ));
    fs::create_dir_all(&out)?;

    let dataset = parse_cmr_csv(BufReader::new(File::open(data_path("cmr_sample.csv"))?))?;
    let calendar = parse_calendar(BufReader::new(File::open(data_path(
        "restriction_calendar.csv",
    ))?))?;
    let keys: Vec<LocalityKey> = ["ES", "NZ", "AR", "CA", "DE", "JP", "KR"]
        .iter()
        .map(|s| LocalityKey::parse_spec(s).unwrap())
        .collect();
    let set = select_localities(&dataset, &calendar, &keys)?;

    let meta = |title: &str| ChartMeta {
        title: title.to_string(),
        config_hash: "example".to_string(),
        ..Default::default()
    };

    // Radar chart: AUC-aggregated scaled trend data, one 50-day period.
    let cfg = PipelineSettings::new(
        Seasonality::Trend,
        Granularity::SinglePeriod,
        Aggregation::Auc,
    );
    let run = build_objective_vectors(&set, &cfg)?;
    let radar = radar_chart(&run.periods[0], &meta("AUC / trend, scaled"));
    fs::write(out.join("radar_countries.svg"), radar)?;

    // Parallel coordinates: Pareto depth across five 10-day periods.
    let cfg = PipelineSettings::new(
        Seasonality::Trend,
        Granularity::SubPeriods,
        Aggregation::Auc,
    );
    let run = build_objective_vectors(&set, &cfg)?;
    let ranking = rank_run(&run.periods, &Comparator::Pareto)?;
    let labels: Vec<String> = (0..5).map(|p| format!("{}", p * 10)).collect();
    let order: Vec<LocalityKey> = set.keys().cloned().collect();
    let parcoords =
        parallel_coordinates(&ranking, &order, &labels, &meta("Pareto depth by period"));
    fs::write(out.join("parcoords_countries.svg"), parcoords)?;

    // Series plot: calibrated Parks data for Lombardy with both variants.
    let lombardy = LocalityKey::parse_spec("IT:Lombardy")?;
    let entry = *calendar.get(&lombardy).unwrap();
    let raw = ProcessedSeries::from_raw(dataset.series(&lombardy, PlaceCategory::Parks).unwrap());
    let calibrated = calibrate(&repair_gaps(&raw, 3)?, entry.first_restriction)?;
    let ma = moving_average(&calibrated, 7)?;
    let trend = stl_trend(&calibrated, 7, &StlParams::default())?;
    let markers = WindowMarkers {
        restriction: entry.first_restriction,
        relaxation: entry.first_relaxation,
        window_length: 50,
    };
    let plot = series_plot(
        &[&calibrated, &ma, &trend],
        &["calibrated".into(), "7-day MA".into(), "STL trend".into()],
        &markers,
        &meta("Lombardy Parks, calibrated"),
    );
    fs::write(out.join("series_lombardy_parks.svg"), plot)?;

    println!("wrote 3 charts to {}", out.display());
    Ok(())
}
