//! Pipeline orchestration over the experimental factor matrix, and emission
//! of ranking tables, charts, and the machine-readable result bundle.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use thiserror::Error;

use crate::aggregate::{
    aggregate_windows, prepare_windows, Aggregation, AnalysisWindow, Granularity, ObjectiveVector,
    PipelineSettings, Seasonality,
};
use crate::ingest::{
    parse_calendar, parse_cmr_csv, select_localities, validate_coverage, AnalysisSet, Coverage,
    IngestError, LocalityKey, PlaceCategory,
};
use crate::mcdm::{rank_run, Comparator, DepthRanking};
use crate::preprocess::{
    calibrate, moving_average_with_mode, repair_gaps, stl_trend, ProcessedSeries,
};

pub mod config;
mod svg;
mod tables;

pub use config::{
    resolve_config, CliOverrides, ComparisonKind, FileConfig, OutputFormat, RunConfig, RunLevel,
};
pub use svg::{
    color_for, parallel_coordinates, parcoords_layout, radar_chart, radar_radii, series_plot,
    ChartMeta, ParcoordsVertex, WindowMarkers, PALETTE,
};
pub use tables::{competition_ranks, RankTable};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// One ranking computed for a combo: the comparator label plus the depths.
#[derive(Debug, Clone)]
pub struct RankedComparison {
    pub label: String,
    pub kind: ComparisonKind,
    pub ranking: DepthRanking,
}

/// Unscaled per-category aggregates: `values[period][locality]`.
#[derive(Debug, Clone)]
pub struct CategoryValues {
    pub category: PlaceCategory,
    pub values: Vec<Vec<f64>>,
}

/// Everything computed for one (seasonality, granularity, aggregation)
/// combination.
#[derive(Debug, Clone)]
pub struct ComboResult {
    pub seasonality: Seasonality,
    pub granularity: Granularity,
    pub aggregation: Aggregation,
    pub n_periods: usize,
    /// Shared non-negativity shift of the scaled comparison run (AUC only).
    pub shift: Option<f64>,
    /// Shift of the unscaled per-category run (AUC only).
    pub category_shift: Option<f64>,
    pub scale_divisors: Vec<(LocalityKey, PlaceCategory, f64)>,
    /// Scaled objective vectors per period, localities in run order.
    pub vectors: Vec<Vec<ObjectiveVector>>,
    pub category_values: Vec<CategoryValues>,
    pub rankings: Vec<RankedComparison>,
}

impl ComboResult {
    pub fn slug(&self) -> String {
        format!(
            "{}_{}_{}",
            self.aggregation.slug(),
            self.seasonality.slug(),
            self.granularity.slug()
        )
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.aggregation.label(), self.seasonality.label())
    }
}

#[derive(Debug, Clone)]
pub struct ComboFailure {
    pub combo: String,
    pub error: String,
}

/// The full outcome of a run: per-combination results plus diagnostics for
/// the combinations that failed.
#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub localities: Vec<LocalityKey>,
    pub level: RunLevel,
    pub combos: Vec<ComboResult>,
    pub failures: Vec<ComboFailure>,
    pub warnings: Vec<String>,
    pub config_hash: String,
    /// The selected locality bundles, kept for series plots.
    pub set: AnalysisSet,
}

impl AnalysisResult {
    pub fn fully_succeeded(&self) -> bool {
        self.failures.is_empty()
    }
}

fn settings_for(
    config: &RunConfig,
    seasonality: Seasonality,
    granularity: Granularity,
    aggregation: Aggregation,
    scale: bool,
) -> PipelineSettings {
    PipelineSettings {
        seasonality,
        granularity,
        aggregation,
        window_length: config.window_length,
        period_length: config.period_length,
        ma_window: config.ma_window,
        ma_mode: config.ma_mode,
        stl_period: config.stl_period,
        stl: config.stl.clone(),
        max_gap: config.max_gap,
        scale,
        pinned_shift: config.pin_shift,
    }
}

fn days_in_period(config: &RunConfig, granularity: Granularity) -> usize {
    match granularity {
        Granularity::SinglePeriod => config.window_length,
        Granularity::SubPeriods => config.period_length,
    }
}

fn run_combo(
    config: &RunConfig,
    scaled: &[Vec<AnalysisWindow>],
    unscaled: &[Vec<AnalysisWindow>],
    seasonality: Seasonality,
    granularity: Granularity,
    aggregation: Aggregation,
) -> Result<ComboResult, String> {
    let cfg = settings_for(config, seasonality, granularity, aggregation, true);
    let comparison_run = aggregate_windows(scaled.to_vec(), &cfg).map_err(|e| e.to_string())?;

    let mut cat_cfg = cfg.clone();
    cat_cfg.scale = false;
    let category_run = aggregate_windows(unscaled.to_vec(), &cat_cfg).map_err(|e| e.to_string())?;

    let n_periods = comparison_run.periods.len();
    let n_localities = config.localities.len();
    let category_values = PlaceCategory::ANALYSIS_SET
        .iter()
        .enumerate()
        .map(|(cat_idx, &category)| CategoryValues {
            category,
            values: (0..n_periods)
                .map(|p| {
                    (0..n_localities)
                        .map(|loc| category_run.periods[p][loc].components[cat_idx])
                        .collect()
                })
                .collect(),
        })
        .collect();

    let mut rankings = Vec::new();
    for kind in &config.comparison {
        match kind {
            ComparisonKind::Pareto => {
                let ranking = rank_run(&comparison_run.periods, &Comparator::Pareto)
                    .map_err(|e| e.to_string())?;
                rankings.push(RankedComparison {
                    label: "pareto".to_string(),
                    kind: *kind,
                    ranking,
                });
            }
            ComparisonKind::MeanScalarized => {
                let ranking = rank_run(&comparison_run.periods, &Comparator::MeanScalarized)
                    .map_err(|e| e.to_string())?;
                rankings.push(RankedComparison {
                    label: "mean".to_string(),
                    kind: *kind,
                    ranking,
                });
            }
            ComparisonKind::Epsilon => {
                for &epsilon in &config.epsilon {
                    let comparator = Comparator::epsilon_with_form(epsilon, config.epsilon_form)
                        .map_err(|e| e.to_string())?;
                    // Rank-sum magnitudes scale with the number of days, so
                    // divide by the period length (mean rank) to keep the
                    // multiplicative tolerance comparable across
                    // granularities.
                    let mut periods = comparison_run.periods.clone();
                    let mut normalized = false;
                    if aggregation == Aggregation::RankSums {
                        let days = days_in_period(config, granularity) as f64;
                        for vectors in &mut periods {
                            for v in vectors {
                                for c in &mut v.components {
                                    *c /= days;
                                }
                            }
                        }
                        normalized = true;
                    }
                    let mut ranking = rank_run(&periods, &comparator).map_err(|e| e.to_string())?;
                    ranking.provenance.rs_mean_rank_normalized = normalized;
                    rankings.push(RankedComparison {
                        label: format!("epsilon-{epsilon}"),
                        kind: *kind,
                        ranking,
                    });
                }
            }
        }
    }

    Ok(ComboResult {
        seasonality,
        granularity,
        aggregation,
        n_periods,
        shift: comparison_run.shift,
        category_shift: category_run.shift,
        scale_divisors: comparison_run.scale_divisors,
        vectors: comparison_run.periods,
        category_values,
        rankings,
    })
}

/// Executes every requested factor combination. A failure in one combination
/// is recorded as a diagnostic and the others proceed; the run is
/// deterministic for identical inputs and configuration.
pub fn run_pipeline(config: &RunConfig) -> Result<AnalysisResult, ReportError> {
    config.validate()?;
    let dataset = parse_cmr_csv(BufReader::new(fs::File::open(&config.data)?))?;
    let calendar = parse_calendar(BufReader::new(fs::File::open(&config.calendar)?))?;
    let set = select_localities(&dataset, &calendar, &config.localities)?;

    let mut warnings = Vec::new();
    for bundle in &set.localities {
        for &category in &PlaceCategory::ANALYSIS_SET {
            let coverage = validate_coverage(
                bundle.series(category),
                &bundle.calendar,
                config.window_length as u32,
                config.max_gap as u32,
            );
            match coverage {
                Coverage::Complete => {}
                Coverage::Repairable => warnings.push(format!(
                    "{} / {}: window coverage has repairable gaps",
                    bundle.key,
                    category.slug()
                )),
                Coverage::Irreparable => warnings.push(format!(
                    "{} / {}: window coverage is irreparable",
                    bundle.key,
                    category.slug()
                )),
            }
        }
    }

    let mut combos = Vec::new();
    let mut failures = Vec::new();
    for &seasonality in &config.seasonality {
        // The heavy preprocessing depends only on the seasonality variant;
        // prepare once and share across aggregations and granularities.
        let base = settings_for(
            config,
            seasonality,
            Granularity::SinglePeriod,
            Aggregation::Mean,
            true,
        );
        let mut unscaled_cfg = base.clone();
        unscaled_cfg.scale = false;
        let prepared = prepare_windows(&set, &base)
            .and_then(|s| prepare_windows(&set, &unscaled_cfg).map(|u| (s, u)));
        let (scaled, unscaled) = match prepared {
            Ok(pair) => pair,
            Err(e) => {
                for &granularity in &config.granularity {
                    for &aggregation in &config.aggregation {
                        failures.push(ComboFailure {
                            combo: format!(
                                "{}_{}_{}",
                                aggregation.slug(),
                                seasonality.slug(),
                                granularity.slug()
                            ),
                            error: e.to_string(),
                        });
                    }
                }
                continue;
            }
        };
        for &granularity in &config.granularity {
            for &aggregation in &config.aggregation {
                match run_combo(
                    config,
                    &scaled,
                    &unscaled,
                    seasonality,
                    granularity,
                    aggregation,
                ) {
                    Ok(combo) => {
                        for ranked in &combo.rankings {
                            for &p in &ranked.ranking.cycle_warnings {
                                warnings.push(format!(
                                    "{}/{}: dominance cycle in period {p}; remaining localities share one depth",
                                    combo.slug(),
                                    ranked.label
                                ));
                            }
                        }
                        combos.push(combo);
                    }
                    Err(error) => failures.push(ComboFailure {
                        combo: format!(
                            "{}_{}_{}",
                            aggregation.slug(),
                            seasonality.slug(),
                            granularity.slug()
                        ),
                        error,
                    }),
                }
            }
        }
    }

    Ok(AnalysisResult {
        localities: set.keys().cloned().collect(),
        level: config.level,
        combos,
        failures,
        warnings,
        config_hash: config.hash(),
        set,
    })
}

fn key_slug(key: &LocalityKey) -> String {
    let mut out = String::new();
    let mut last_underscore = false;
    for ch in key.spec_string().chars() {
        if ch.is_alphanumeric() {
            out.extend(ch.to_lowercase());
            last_underscore = false;
        } else if !last_underscore {
            out.push('_');
            last_underscore = true;
        }
    }
    out.trim_matches('_').to_string()
}

fn provenance_pairs(result: &AnalysisResult, combo: Option<&ComboResult>) -> Vec<(String, String)> {
    let mut pairs = vec![("config".to_string(), result.config_hash.clone())];
    if let Some(c) = combo {
        pairs.push((
            "shift".to_string(),
            c.shift.map_or("none".to_string(), |s| s.to_string()),
        ));
        if !c.scale_divisors.is_empty() {
            let parts: Vec<String> = c
                .scale_divisors
                .iter()
                .map(|(k, cat, v)| format!("{k}:{}:{v}", cat.slug()))
                .collect();
            pairs.push(("scale_divisors".to_string(), parts.join(",")));
        }
    }
    pairs
}

/// Ranking table for one comparator label, granularity, and period: columns
/// are the matching combos in aggregation-major, seasonality-minor order.
pub fn ranking_table(
    result: &AnalysisResult,
    label: &str,
    granularity: Granularity,
    period: usize,
) -> Option<RankTable> {
    let mut combos: Vec<&ComboResult> = result
        .combos
        .iter()
        .filter(|c| c.granularity == granularity && c.rankings.iter().any(|r| r.label == label))
        .collect();
    if combos.is_empty() {
        return None;
    }
    combos.sort_by_key(|c| (c.aggregation, c.seasonality));

    let columns: Vec<String> = combos.iter().map(|c| c.label()).collect();
    let rows: Vec<(LocalityKey, Vec<usize>)> = result
        .localities
        .iter()
        .map(|key| {
            let ranks = combos
                .iter()
                .map(|c| {
                    c.rankings
                        .iter()
                        .find(|r| r.label == label)
                        .and_then(|r| r.ranking.depth(period, key))
                        .unwrap_or(0)
                })
                .collect();
            (key.clone(), ranks)
        })
        .collect();

    let mut provenance = provenance_pairs(result, None);
    provenance.push(("comparison".to_string(), label.to_string()));
    provenance.push(("granularity".to_string(), granularity.slug().to_string()));
    provenance.push(("period".to_string(), period.to_string()));
    for combo in &combos {
        if let Some(shift) = combo.shift {
            provenance.push((format!("shift[{}]", combo.slug()), shift.to_string()));
        }
    }
    // Scale divisors depend only on the seasonality variant, so one line per
    // variant covers every column.
    let mut seen = Vec::new();
    for combo in &combos {
        if combo.scale_divisors.is_empty() || seen.contains(&combo.seasonality) {
            continue;
        }
        seen.push(combo.seasonality);
        let parts: Vec<String> = combo
            .scale_divisors
            .iter()
            .map(|(k, cat, v)| format!("{k}:{}:{v}", cat.slug()))
            .collect();
        provenance.push((
            format!("scale_divisors[{}]", combo.seasonality.slug()),
            parts.join(","),
        ));
    }
    Some(RankTable::new(
        format!("dominance depth, {label}, period {period}"),
        columns,
        rows,
        provenance,
    ))
}

/// Single-category rank table (competition ranks of the unscaled aggregate),
/// mirroring the per-category report layout.
pub fn category_table(
    result: &AnalysisResult,
    category: PlaceCategory,
    granularity: Granularity,
    period: usize,
) -> Option<RankTable> {
    let mut combos: Vec<&ComboResult> = result
        .combos
        .iter()
        .filter(|c| c.granularity == granularity)
        .collect();
    if combos.is_empty() {
        return None;
    }
    combos.sort_by_key(|c| (c.aggregation, c.seasonality));

    let columns: Vec<String> = combos.iter().map(|c| c.label()).collect();
    let per_combo_ranks: Vec<Vec<usize>> = combos
        .iter()
        .map(|c| {
            let values = &c
                .category_values
                .iter()
                .find(|cv| cv.category == category)
                .expect("analysis category present")
                .values[period];
            competition_ranks(values)
        })
        .collect();
    let rows: Vec<(LocalityKey, Vec<usize>)> = result
        .localities
        .iter()
        .enumerate()
        .map(|(loc, key)| {
            (
                key.clone(),
                per_combo_ranks.iter().map(|ranks| ranks[loc]).collect(),
            )
        })
        .collect();

    let mut provenance = provenance_pairs(result, None);
    provenance.push(("category".to_string(), category.slug().to_string()));
    provenance.push(("granularity".to_string(), granularity.slug().to_string()));
    provenance.push(("period".to_string(), period.to_string()));
    provenance.push(("scale_divisors".to_string(), "1 (unscaled)".to_string()));
    for combo in &combos {
        if let Some(shift) = combo.category_shift {
            provenance.push((format!("shift[{}]", combo.slug()), shift.to_string()));
        }
    }
    Some(RankTable::new(
        format!("{} ranks, period {period}", category.label()),
        columns,
        rows,
        provenance,
    ))
}

/// The machine-readable result bundle.
pub fn result_bundle(result: &AnalysisResult) -> serde_json::Value {
    let combos: Vec<serde_json::Value> = result
        .combos
        .iter()
        .map(|c| {
            let divisors: Vec<serde_json::Value> = c
                .scale_divisors
                .iter()
                .map(|(k, cat, v)| {
                    serde_json::json!({
                        "locality": k.spec_string(),
                        "category": cat.slug(),
                        "divisor": v,
                    })
                })
                .collect();
            let vectors: Vec<serde_json::Value> = c
                .vectors
                .iter()
                .map(|period| {
                    period
                        .iter()
                        .map(|v| {
                            serde_json::json!({
                                "locality": v.key.spec_string(),
                                "period": v.period_index,
                                "components": v.components,
                            })
                        })
                        .collect::<Vec<_>>()
                        .into()
                })
                .collect();
            let categories: Vec<serde_json::Value> = c
                .category_values
                .iter()
                .map(|cv| {
                    serde_json::json!({
                        "category": cv.category.slug(),
                        "values": cv.values,
                    })
                })
                .collect();
            let rankings: Vec<serde_json::Value> = c
                .rankings
                .iter()
                .map(|r| {
                    let periods: Vec<BTreeMap<String, usize>> = r
                        .ranking
                        .periods
                        .iter()
                        .map(|m| m.iter().map(|(k, d)| (k.spec_string(), *d)).collect())
                        .collect();
                    serde_json::json!({
                        "comparison": r.label,
                        "lift": r.ranking.provenance.lift,
                        "rs_mean_rank_normalized": r.ranking.provenance.rs_mean_rank_normalized,
                        "cycle_periods": r.ranking.cycle_warnings,
                        "depths": periods,
                    })
                })
                .collect();
            serde_json::json!({
                "seasonality": c.seasonality.slug(),
                "granularity": c.granularity.slug(),
                "aggregation": c.aggregation.slug(),
                "shift": c.shift,
                "category_shift": c.category_shift,
                "scale_divisors": divisors,
                "objective_vectors": vectors,
                "category_values": categories,
                "rankings": rankings,
            })
        })
        .collect();

    serde_json::json!({
        "provenance": {
            "config_hash": result.config_hash,
            "level": match result.level { RunLevel::Region => "region", RunLevel::Country => "country" },
            "localities": result.localities.iter().map(|k| k.spec_string()).collect::<Vec<_>>(),
        },
        "warnings": result.warnings,
        "failures": result.failures.iter().map(|f| {
            serde_json::json!({ "combo": f.combo, "error": f.error })
        }).collect::<Vec<_>>(),
        "combos": combos,
    })
}

fn chart_meta(result: &AnalysisResult, combo: Option<&ComboResult>, title: String) -> ChartMeta {
    ChartMeta {
        title,
        config_hash: result.config_hash.clone(),
        shift: combo.and_then(|c| c.shift),
        scale_divisors: combo
            .map(|c| {
                c.scale_divisors
                    .iter()
                    .map(|(k, cat, v)| (k.spec_string(), *cat, *v))
                    .collect()
            })
            .unwrap_or_default(),
        extra: Vec::new(),
    }
}

fn write_ranking_and_category_tables(
    result: &AnalysisResult,
    config: &RunConfig,
    tables_dir: &Path,
) -> Result<(), ReportError> {
    let csv = config.formats.contains(&OutputFormat::Csv);
    let json = config.formats.contains(&OutputFormat::Json);
    if !csv && !json {
        return Ok(());
    }
    let mut labels: Vec<String> = Vec::new();
    for combo in &result.combos {
        for r in &combo.rankings {
            if !labels.contains(&r.label) {
                labels.push(r.label.clone());
            }
        }
    }
    for &granularity in &config.granularity {
        let n_periods = match granularity {
            Granularity::SinglePeriod => 1,
            Granularity::SubPeriods => config.window_length / config.period_length,
        };
        for period in 0..n_periods {
            let suffix = match granularity {
                Granularity::SinglePeriod => String::new(),
                Granularity::SubPeriods => format!("_p{period}"),
            };
            for label in &labels {
                if let Some(table) = ranking_table(result, label, granularity, period) {
                    let base = format!("ranking_{label}_{}{suffix}", granularity.slug());
                    if csv {
                        fs::write(tables_dir.join(format!("{base}.csv")), table.to_csv())?;
                    }
                    if json {
                        let text = serde_json::to_string_pretty(&table.to_json())?;
                        fs::write(tables_dir.join(format!("{base}.json")), text)?;
                    }
                }
            }
            for &category in &PlaceCategory::ANALYSIS_SET {
                if let Some(table) = category_table(result, category, granularity, period) {
                    let base = format!(
                        "category_{}_{}{suffix}",
                        category.slug(),
                        granularity.slug()
                    );
                    if csv {
                        fs::write(tables_dir.join(format!("{base}.csv")), table.to_csv())?;
                    }
                    if json {
                        let text = serde_json::to_string_pretty(&table.to_json())?;
                        fs::write(tables_dir.join(format!("{base}.json")), text)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn write_charts(
    result: &AnalysisResult,
    config: &RunConfig,
    charts_dir: &Path,
) -> Result<(), ReportError> {
    // Radar charts: one per combo and period, on scaled vectors.
    for combo in &result.combos {
        for (period, vectors) in combo.vectors.iter().enumerate() {
            let suffix = match combo.granularity {
                Granularity::SinglePeriod => String::new(),
                Granularity::SubPeriods => format!("_p{period}"),
            };
            let title = format!("{} ({})", combo.label(), combo.granularity.slug());
            let svg = radar_chart(vectors, &chart_meta(result, Some(combo), title));
            fs::write(
                charts_dir.join(format!("radar_{}{suffix}.svg", combo.slug())),
                svg,
            )?;
        }
        // Parallel coordinates for multi-period rankings.
        if combo.n_periods >= 2 {
            let period_labels: Vec<String> = (0..combo.n_periods)
                .map(|p| format!("{}", p * config.period_length))
                .collect();
            for ranked in &combo.rankings {
                let title = format!("{} depth by period ({})", combo.label(), ranked.label);
                let svg = parallel_coordinates(
                    &ranked.ranking,
                    &result.localities,
                    &period_labels,
                    &chart_meta(result, Some(combo), title),
                );
                fs::write(
                    charts_dir.join(format!("parcoords_{}_{}.svg", ranked.label, combo.slug())),
                    svg,
                )?;
            }
        }
    }

    // Series plots per locality: raw all-category view plus per-category
    // seasonality overlays.
    for bundle in &result.set.localities {
        let markers = WindowMarkers {
            restriction: bundle.calendar.first_restriction,
            relaxation: bundle.calendar.first_relaxation,
            window_length: config.window_length,
        };
        let raw: Vec<ProcessedSeries> = PlaceCategory::ALL
            .iter()
            .map(|&c| ProcessedSeries::from_raw(bundle.series(c)))
            .collect();
        let refs: Vec<&ProcessedSeries> = raw.iter().collect();
        let labels: Vec<String> = PlaceCategory::ALL
            .iter()
            .map(|c| c.label().to_string())
            .collect();
        let title = format!("{} raw mobility", bundle.key.display_name());
        let svg = series_plot(&refs, &labels, &markers, &chart_meta(result, None, title));
        fs::write(
            charts_dir.join(format!("series_{}_raw.svg", key_slug(&bundle.key))),
            svg,
        )?;

        for &category in &PlaceCategory::ANALYSIS_SET {
            let raw = ProcessedSeries::from_raw(bundle.series(category));
            let repaired = match repair_gaps(&raw, config.max_gap) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let calibrated = match calibrate(&repaired, bundle.calendar.first_restriction) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let ma = moving_average_with_mode(&calibrated, config.ma_window, config.ma_mode);
            let trend = stl_trend(&calibrated, config.stl_period, &config.stl);
            let (ma, trend) = match (ma, trend) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            let series = [&calibrated, &ma, &trend];
            let labels = vec![
                "calibrated".to_string(),
                "7-day MA".to_string(),
                "STL trend".to_string(),
            ];
            let title = format!(
                "{} {} (calibrated)",
                bundle.key.display_name(),
                category.label()
            );
            let svg = series_plot(&series, &labels, &markers, &chart_meta(result, None, title));
            fs::write(
                charts_dir.join(format!(
                    "series_{}_{}_variants.svg",
                    key_slug(&bundle.key),
                    category.slug()
                )),
                svg,
            )?;
        }
    }
    Ok(())
}

/// Writes every requested output under `config.out`: ranking and category
/// tables (csv/json), the result bundle (json), and charts (svg). Output is
/// byte-identical across runs with identical inputs and configuration.
pub fn write_outputs(result: &AnalysisResult, config: &RunConfig) -> Result<(), ReportError> {
    fs::create_dir_all(&config.out)?;
    let tables_dir = config.out.join("tables");
    fs::create_dir_all(&tables_dir)?;
    write_ranking_and_category_tables(result, config, &tables_dir)?;

    if config.formats.contains(&OutputFormat::Json) {
        let bundle = serde_json::to_string_pretty(&result_bundle(result))?;
        fs::write(config.out.join("results.json"), bundle)?;
    }
    if config.formats.contains(&OutputFormat::Svg) {
        let charts_dir = config.out.join("charts");
        fs::create_dir_all(&charts_dir)?;
        write_charts(result, config, &charts_dir)?;
    }
    Ok(())
}
