//! Windowing, scaling, and temporal aggregation.
//!
//! Pipeline order for a comparison run: calibrate, apply the seasonality
//! variant, extract the analysis window, scale to unit variance (multi-
//! criteria stage only), shift globally (AUC only), split into sub-periods,
//! aggregate.

use chrono::NaiveDate;
use thiserror::Error;

use crate::ingest::{AnalysisSet, LocalityKey, PlaceCategory};
use crate::preprocess::{
    calibrate, moving_average_with_mode, repair_gaps, stl_trend, MaMode, PreprocessError,
    ProcessedSeries, SeriesVariant, StlParams,
};

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error("series does not cover [{start}, {start} + {length} days): {reason}")]
    InsufficientCoverage {
        start: NaiveDate,
        length: usize,
        reason: String,
    },
    #[error("window length {length} is not divisible by period length {period_length}")]
    NotDivisible { length: usize, period_length: usize },
    #[error("window is already scaled")]
    AlreadyScaled,
    #[error("degenerate window: zero variance, cannot scale")]
    ZeroVariance,
    #[error("window contains a negative value ({0}); apply the global shift before AUC")]
    NegativeValue(f64),
    #[error("empty window")]
    EmptyWindow,
    #[error("rank sums need at least two localities, got {0}")]
    TooFewLocalities(usize),
    #[error("rank sums need equal window lengths, got {0} and {1}")]
    MismatchedLengths(usize, usize),
}

/// A fixed-length run of daily values beginning at a locality's first
/// restriction date (day 0).
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisWindow {
    pub key: LocalityKey,
    pub category: PlaceCategory,
    pub variant: SeriesVariant,
    pub start: NaiveDate,
    pub values: Vec<f64>,
    pub scaled: bool,
    /// Sample standard deviation divided out, or 1 when unscaled.
    pub scale_divisor: f64,
}

impl AnalysisWindow {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Cuts the `length` consecutive daily values beginning at `start` out of a
/// gap-free series.
pub fn extract_window(
    series: &ProcessedSeries,
    start: NaiveDate,
    length: usize,
) -> Result<AnalysisWindow, AggregateError> {
    if length == 0 {
        return Err(AggregateError::EmptyWindow);
    }
    let fail = |reason: &str| AggregateError::InsufficientCoverage {
        start,
        length,
        reason: reason.to_string(),
    };
    let pos = series
        .observations
        .iter()
        .position(|(d, _)| *d == start)
        .ok_or_else(|| fail("window start not in series"))?;
    if pos + length > series.len() {
        return Err(fail("series ends before the window does"));
    }
    let slice = &series.observations[pos..pos + length];
    for (offset, (d, _)) in slice.iter().enumerate() {
        let expected = start + chrono::Days::new(offset as u64);
        if *d != expected {
            return Err(fail(&format!("missing {expected}")));
        }
    }
    Ok(AnalysisWindow {
        key: series.key.clone(),
        category: series.category,
        variant: series.variant,
        start,
        values: slice.iter().map(|(_, v)| *v).collect(),
        scaled: false,
        scale_divisor: 1.0,
    })
}

/// Splits a window into consecutive non-overlapping sub-windows of
/// `period_length` days; the window length must divide evenly.
pub fn split_periods(
    window: &AnalysisWindow,
    period_length: usize,
) -> Result<Vec<AnalysisWindow>, AggregateError> {
    if period_length == 0 || !window.len().is_multiple_of(period_length) {
        return Err(AggregateError::NotDivisible {
            length: window.len(),
            period_length,
        });
    }
    Ok(window
        .values
        .chunks_exact(period_length)
        .enumerate()
        .map(|(i, chunk)| AnalysisWindow {
            key: window.key.clone(),
            category: window.category,
            variant: window.variant,
            start: window.start + chrono::Days::new((i * period_length) as u64),
            values: chunk.to_vec(),
            scaled: window.scaled,
            scale_divisor: window.scale_divisor,
        })
        .collect())
}

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    var.sqrt()
}

/// Divides every value by the window's own sample standard deviation (N-1
/// denominator), without re-centering. Applied per (locality, category) over
/// the full window, before any shifting, splitting, or aggregation.
pub fn scale_unit_variance(window: &AnalysisWindow) -> Result<AnalysisWindow, AggregateError> {
    if window.scaled {
        return Err(AggregateError::AlreadyScaled);
    }
    if window.len() < 2 {
        return Err(AggregateError::ZeroVariance);
    }
    let std = sample_std(&window.values);
    if std.is_nan() || std <= 0.0 {
        return Err(AggregateError::ZeroVariance);
    }
    Ok(AnalysisWindow {
        key: window.key.clone(),
        category: window.category,
        variant: window.variant,
        start: window.start,
        values: window.values.iter().map(|v| v / std).collect(),
        scaled: true,
        scale_divisor: std,
    })
}

/// Shifts every window in a comparison run by one shared scalar so all
/// values become non-negative: `shift = max(0, -global minimum)`. Returns
/// the shifted windows and the shift applied.
pub fn global_shift(windows: &[AnalysisWindow]) -> (Vec<AnalysisWindow>, f64) {
    let min = windows
        .iter()
        .flat_map(|w| w.values.iter())
        .fold(f64::INFINITY, |acc, v| acc.min(*v));
    let shift = if min.is_finite() {
        (-min).max(0.0)
    } else {
        0.0
    };
    (apply_shift(windows, shift), shift)
}

/// Adds a fixed shift to every value of every window. Exposed so a run can
/// pin the shift used by an earlier run instead of recomputing it.
pub fn apply_shift(windows: &[AnalysisWindow], shift: f64) -> Vec<AnalysisWindow> {
    windows
        .iter()
        .map(|w| {
            let mut out = w.clone();
            for v in &mut out.values {
                *v += shift;
            }
            out
        })
        .collect()
}

/// Arithmetic mean of the window.
pub fn agg_mean(window: &AnalysisWindow) -> Result<f64, AggregateError> {
    if window.is_empty() {
        return Err(AggregateError::EmptyWindow);
    }
    Ok(window.values.iter().sum::<f64>() / window.len() as f64)
}

/// Trapezoidal area under the window at unit (one day) spacing. Values must
/// be non-negative so the origin is a common reference point.
pub fn agg_auc(window: &AnalysisWindow) -> Result<f64, AggregateError> {
    if window.is_empty() {
        return Err(AggregateError::EmptyWindow);
    }
    if let Some(v) = window.values.iter().find(|v| **v < 0.0) {
        return Err(AggregateError::NegativeValue(*v));
    }
    Ok(window
        .values
        .windows(2)
        .map(|pair| (pair[0] + pair[1]) / 2.0)
        .sum())
}

/// Daily cross-locality rank sums: for each day, localities are ranked
/// ascending by value (rank 1 = lowest mobility), ties get midranks, and each
/// locality's ranks are summed over the window. Lower is better.
pub fn agg_rank_sums(windows: &[&AnalysisWindow]) -> Result<Vec<f64>, AggregateError> {
    if windows.len() < 2 {
        return Err(AggregateError::TooFewLocalities(windows.len()));
    }
    let days = windows[0].len();
    for w in windows {
        if w.len() != days {
            return Err(AggregateError::MismatchedLengths(days, w.len()));
        }
    }
    if days == 0 {
        return Err(AggregateError::EmptyWindow);
    }
    let mut sums = vec![0.0; windows.len()];
    for day in 0..days {
        let mut order: Vec<usize> = (0..windows.len()).collect();
        order.sort_by(|&a, &b| windows[a].values[day].total_cmp(&windows[b].values[day]));
        // Midranks over runs of equal values.
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j + 1 < order.len()
                && windows[order[j + 1]].values[day] == windows[order[i]].values[day]
            {
                j += 1;
            }
            let midrank = (i + j) as f64 / 2.0 + 1.0;
            for &idx in &order[i..=j] {
                sums[idx] += midrank;
            }
            i = j + 1;
        }
    }
    Ok(sums)
}

/// Per-locality vector of aggregated values over the five non-residential
/// categories for one time period. Minimization orientation: lower value
/// means greater mobility reduction.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ObjectiveVector {
    pub key: LocalityKey,
    pub period_index: usize,
    pub components: Vec<f64>,
}

impl ObjectiveVector {
    pub fn new(key: LocalityKey, period_index: usize, components: Vec<f64>) -> Self {
        debug_assert!(components.iter().all(|c| c.is_finite()));
        ObjectiveVector {
            key,
            period_index,
            components,
        }
    }
}

/// Seasonality variant entering the aggregation stage.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Seasonality {
    MovingAverage,
    Trend,
}

impl Seasonality {
    pub fn slug(self) -> &'static str {
        match self {
            Seasonality::MovingAverage => "ma",
            Seasonality::Trend => "trend",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Seasonality::MovingAverage => "MA",
            Seasonality::Trend => "Trend",
        }
    }
}

/// Temporal discretization: one full window or consecutive sub-periods.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Granularity {
    SinglePeriod,
    SubPeriods,
}

impl Granularity {
    pub fn slug(self) -> &'static str {
        match self {
            Granularity::SinglePeriod => "single",
            Granularity::SubPeriods => "subperiods",
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Aggregation {
    Mean,
    Auc,
    RankSums,
}

impl Aggregation {
    pub fn slug(self) -> &'static str {
        match self {
            Aggregation::Mean => "mean",
            Aggregation::Auc => "auc",
            Aggregation::RankSums => "rs",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Aggregation::Mean => "Mean",
            Aggregation::Auc => "AUC",
            Aggregation::RankSums => "RS",
        }
    }
}

/// Knobs for one pass of the windowing/aggregation pipeline.
#[derive(Debug, Clone)]
pub struct PipelineSettings {
    pub seasonality: Seasonality,
    pub granularity: Granularity,
    pub aggregation: Aggregation,
    pub window_length: usize,
    pub period_length: usize,
    pub ma_window: usize,
    pub ma_mode: MaMode,
    pub stl_period: usize,
    pub stl: StlParams,
    pub max_gap: u64,
    /// Scale each window to unit variance (the multi-criteria stage does;
    /// single-category reports do not).
    pub scale: bool,
    /// Fixed shift to apply before AUC instead of the run's own minimum.
    pub pinned_shift: Option<f64>,
}

impl PipelineSettings {
    pub fn new(
        seasonality: Seasonality,
        granularity: Granularity,
        aggregation: Aggregation,
    ) -> Self {
        PipelineSettings {
            seasonality,
            granularity,
            aggregation,
            window_length: 50,
            period_length: 10,
            ma_window: 7,
            ma_mode: MaMode::Centered,
            stl_period: 7,
            stl: StlParams::default(),
            max_gap: 3,
            scale: true,
            pinned_shift: None,
        }
    }
}

/// Output of one pipeline pass: per-period objective vectors plus the shift
/// and scale provenance needed to reproduce them.
#[derive(Debug, Clone)]
pub struct PeriodVectors {
    /// Outer index: period; inner: localities in analysis-set order.
    pub periods: Vec<Vec<ObjectiveVector>>,
    /// Shared non-negativity shift (AUC runs only).
    pub shift: Option<f64>,
    /// Sample standard deviation divided out, per (locality, category).
    pub scale_divisors: Vec<(LocalityKey, PlaceCategory, f64)>,
}

/// Processed full-length windows for every (locality, category) pair in the
/// set: the common front half of the pipeline (repair, calibrate, smooth,
/// window, optionally scale). Outer index: locality in set order; inner:
/// the five analysis categories.
pub fn prepare_windows(
    set: &AnalysisSet,
    cfg: &PipelineSettings,
) -> Result<Vec<Vec<AnalysisWindow>>, AggregateError> {
    let mut per_locality = Vec::with_capacity(set.len());
    for bundle in &set.localities {
        let mut windows = Vec::with_capacity(PlaceCategory::ANALYSIS_SET.len());
        for &category in &PlaceCategory::ANALYSIS_SET {
            let raw = ProcessedSeries::from_raw(bundle.series(category));
            let repaired = repair_gaps(&raw, cfg.max_gap)?;
            let calibrated = calibrate(&repaired, bundle.calendar.first_restriction)?;
            let smoothed = match cfg.seasonality {
                Seasonality::MovingAverage => {
                    moving_average_with_mode(&calibrated, cfg.ma_window, cfg.ma_mode)?
                }
                Seasonality::Trend => stl_trend(&calibrated, cfg.stl_period, &cfg.stl)?,
            };
            let window = extract_window(
                &smoothed,
                bundle.calendar.first_restriction,
                cfg.window_length,
            )?;
            windows.push(if cfg.scale {
                scale_unit_variance(&window)?
            } else {
                window
            });
        }
        per_locality.push(windows);
    }
    Ok(per_locality)
}

/// Runs the full aggregation pipeline for one factor combination, producing
/// one objective vector per locality and period.
pub fn build_objective_vectors(
    set: &AnalysisSet,
    cfg: &PipelineSettings,
) -> Result<PeriodVectors, AggregateError> {
    let per_locality = prepare_windows(set, cfg)?;
    aggregate_windows(per_locality, cfg)
}

/// The aggregation tail of the pipeline, operating on windows already
/// prepared by [`prepare_windows`] with the same settings.
pub fn aggregate_windows(
    per_locality: Vec<Vec<AnalysisWindow>>,
    cfg: &PipelineSettings,
) -> Result<PeriodVectors, AggregateError> {
    if per_locality.is_empty() || per_locality.iter().any(|ws| ws.is_empty()) {
        return Err(AggregateError::EmptyWindow);
    }
    let set_len = per_locality.len();
    let keys: Vec<LocalityKey> = per_locality.iter().map(|ws| ws[0].key.clone()).collect();

    let mut scale_divisors = Vec::new();
    if cfg.scale {
        for windows in &per_locality {
            for w in windows {
                scale_divisors.push((w.key.clone(), w.category, w.scale_divisor));
            }
        }
    }

    // One shared shift across every window of the run (AUC only).
    let mut shift = None;
    let per_locality = if cfg.aggregation == Aggregation::Auc {
        let flat: Vec<AnalysisWindow> = per_locality.into_iter().flatten().collect();
        let (shifted, applied) = match cfg.pinned_shift {
            Some(v) => (apply_shift(&flat, v), v),
            None => global_shift(&flat),
        };
        shift = Some(applied);
        shifted
            .chunks(PlaceCategory::ANALYSIS_SET.len())
            .map(|c| c.to_vec())
            .collect()
    } else {
        per_locality
    };

    let n_periods = match cfg.granularity {
        Granularity::SinglePeriod => 1,
        Granularity::SubPeriods => {
            if cfg.period_length == 0 || !cfg.window_length.is_multiple_of(cfg.period_length) {
                return Err(AggregateError::NotDivisible {
                    length: cfg.window_length,
                    period_length: cfg.period_length,
                });
            }
            cfg.window_length / cfg.period_length
        }
    };

    // Split every window into its periods: [locality][category][period].
    let mut split: Vec<Vec<Vec<AnalysisWindow>>> = Vec::with_capacity(per_locality.len());
    for windows in &per_locality {
        let mut per_cat = Vec::with_capacity(windows.len());
        for w in windows {
            per_cat.push(match cfg.granularity {
                Granularity::SinglePeriod => vec![w.clone()],
                Granularity::SubPeriods => split_periods(w, cfg.period_length)?,
            });
        }
        split.push(per_cat);
    }

    let mut periods = Vec::with_capacity(n_periods);
    #[allow(clippy::needless_range_loop)]
    for period in 0..n_periods {
        let mut vectors: Vec<ObjectiveVector> = keys
            .iter()
            .map(|key| ObjectiveVector::new(key.clone(), period, Vec::new()))
            .collect();
        for (cat_idx, _) in PlaceCategory::ANALYSIS_SET.iter().enumerate() {
            match cfg.aggregation {
                Aggregation::Mean => {
                    for (loc, vector) in vectors.iter_mut().enumerate() {
                        vector
                            .components
                            .push(agg_mean(&split[loc][cat_idx][period])?);
                    }
                }
                Aggregation::Auc => {
                    for (loc, vector) in vectors.iter_mut().enumerate() {
                        vector
                            .components
                            .push(agg_auc(&split[loc][cat_idx][period])?);
                    }
                }
                Aggregation::RankSums => {
                    let windows: Vec<&AnalysisWindow> = (0..set_len)
                        .map(|loc| &split[loc][cat_idx][period])
                        .collect();
                    for (vector, sum) in vectors.iter_mut().zip(agg_rank_sums(&windows)?) {
                        vector.components.push(sum);
                    }
                }
            }
        }
        periods.push(vectors);
    }

    Ok(PeriodVectors {
        periods,
        shift,
        scale_divisors,
    })
}

/// Prepared unscaled windows for single-category reporting (one window per
/// locality for the given category), sharing the comparison pipeline.
pub fn category_windows(
    set: &AnalysisSet,
    cfg: &PipelineSettings,
    category: PlaceCategory,
) -> Result<Vec<AnalysisWindow>, AggregateError> {
    let mut unscaled = cfg.clone();
    unscaled.scale = false;
    let mut out = Vec::with_capacity(set.len());
    for bundle in &set.localities {
        let raw = ProcessedSeries::from_raw(bundle.series(category));
        let repaired = repair_gaps(&raw, unscaled.max_gap)?;
        let calibrated = calibrate(&repaired, bundle.calendar.first_restriction)?;
        let smoothed = match unscaled.seasonality {
            Seasonality::MovingAverage => {
                moving_average_with_mode(&calibrated, unscaled.ma_window, unscaled.ma_mode)?
            }
            Seasonality::Trend => stl_trend(&calibrated, unscaled.stl_period, &unscaled.stl)?,
        };
        out.push(extract_window(
            &smoothed,
            bundle.calendar.first_restriction,
            unscaled.window_length,
        )?);
    }
    Ok(out)
}
