//! Series calibration and seasonality reduction.
//!
//! Every operation here is a pure function of immutable inputs, so series
//! from different (locality, category) pairs can be processed in parallel
//! without shared state.

use chrono::NaiveDate;
use thiserror::Error;

use crate::ingest::{LocalityCategorySeries, LocalityKey, PlaceCategory};

mod loess;
mod stl;

pub use loess::loess_smooth;
pub use stl::{stl_decompose, StlDecomposition, StlParams};

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("no observations before the restriction date {0}; cannot calibrate")]
    NoPreRestrictionData(NaiveDate),
    #[error("moving-average window must be odd and >= 1, got {0}")]
    InvalidWindow(usize),
    #[error(
        "series has an interior gap of {gap} days starting {start}, max repairable is {max_gap}"
    )]
    IrreparableGap {
        start: NaiveDate,
        gap: u64,
        max_gap: u64,
    },
    #[error("series must be gap-free for this operation; missing {0}")]
    GapInSeries(NaiveDate),
    #[error("series of length {len} is too short for period {period}; need at least 2x period")]
    SeriesTooShort { len: usize, period: usize },
    #[error("seasonal period must be >= 2, got {0}")]
    InvalidPeriod(usize),
    #[error("loess span must be in (0, 1], got {0}")]
    InvalidSpan(f64),
    #[error("loess degree must be 0, 1 or 2, got {0}")]
    InvalidDegree(usize),
    #[error("robustness weights length {got} does not match point count {expected}")]
    WeightLengthMismatch { got: usize, expected: usize },
    #[error("degenerate local design: all weights zero around x = {0}")]
    DegenerateDesign(f64),
    #[error("empty input")]
    Empty,
}

/// Which seasonality treatment produced a series.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum SeriesVariant {
    Raw,
    MovingAverage,
    Trend,
}

impl SeriesVariant {
    pub fn slug(self) -> &'static str {
        match self {
            SeriesVariant::Raw => "raw",
            SeriesVariant::MovingAverage => "ma",
            SeriesVariant::Trend => "trend",
        }
    }
}

/// Moving-average edge alignment. Centered is the default; trailing exists
/// for sensitivity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MaMode {
    Centered,
    Trailing,
}

/// A calibrated and/or smoothed series. The date span always equals the span
/// of the series it was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessedSeries {
    pub key: LocalityKey,
    pub category: PlaceCategory,
    pub variant: SeriesVariant,
    pub observations: Vec<(NaiveDate, f64)>,
    /// Mean subtracted during calibration (0 when uncalibrated).
    pub calibration_offset: f64,
}

impl ProcessedSeries {
    pub fn from_raw(series: &LocalityCategorySeries) -> Self {
        ProcessedSeries {
            key: series.key.clone(),
            category: series.category,
            variant: SeriesVariant::Raw,
            observations: series.observations.clone(),
            calibration_offset: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.observations.iter().map(|(_, v)| *v).collect()
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.observations.iter().map(|(d, _)| *d).collect()
    }

    /// First missing date inside the span, if any.
    pub fn first_gap(&self) -> Option<NaiveDate> {
        self.observations.windows(2).find_map(|pair| {
            let expected = pair[0].0.succ_opt().expect("date overflow");
            (pair[1].0 != expected).then_some(expected)
        })
    }

    fn with(&self, variant: SeriesVariant, observations: Vec<(NaiveDate, f64)>) -> Self {
        ProcessedSeries {
            key: self.key.clone(),
            category: self.category,
            variant,
            observations,
            calibration_offset: self.calibration_offset,
        }
    }
}

/// Shifts the whole series so that the mean of the values strictly before
/// `first_restriction` becomes zero. The subtracted mean accumulates into
/// `calibration_offset`, which makes the operation idempotent.
pub fn calibrate(
    series: &ProcessedSeries,
    first_restriction: NaiveDate,
) -> Result<ProcessedSeries, PreprocessError> {
    let pre: Vec<f64> = series
        .observations
        .iter()
        .filter(|(d, _)| *d < first_restriction)
        .map(|(_, v)| *v)
        .collect();
    if pre.is_empty() {
        return Err(PreprocessError::NoPreRestrictionData(first_restriction));
    }
    let mean = pre.iter().sum::<f64>() / pre.len() as f64;
    let observations = series
        .observations
        .iter()
        .map(|(d, v)| (*d, v - mean))
        .collect();
    let mut out = series.with(series.variant, observations);
    out.calibration_offset = series.calibration_offset + mean;
    Ok(out)
}

/// Fills interior runs of at most `max_gap` missing days by linear
/// interpolation between the neighboring observations. Leading and trailing
/// gaps are never filled; the output span starts and ends with the input's.
pub fn repair_gaps(
    series: &ProcessedSeries,
    max_gap: u64,
) -> Result<ProcessedSeries, PreprocessError> {
    let mut observations: Vec<(NaiveDate, f64)> = Vec::with_capacity(series.len());
    for pair in series.observations.windows(2) {
        let (d0, v0) = pair[0];
        let (d1, v1) = pair[1];
        observations.push((d0, v0));
        let gap = (d1 - d0).num_days() - 1;
        if gap > 0 {
            if gap > max_gap as i64 {
                return Err(PreprocessError::IrreparableGap {
                    start: d0.succ_opt().expect("date overflow"),
                    gap: gap as u64,
                    max_gap,
                });
            }
            let span = (gap + 1) as f64;
            for step in 1..=gap {
                let date = d0 + chrono::Days::new(step as u64);
                let value = v0 + (v1 - v0) * step as f64 / span;
                observations.push((date, value));
            }
        }
    }
    if let Some(last) = series.observations.last() {
        observations.push(*last);
    }
    Ok(series.with(series.variant, observations))
}

/// Centered moving mean with truncated windows at the edges; output length
/// equals input length. `window` must be odd.
pub fn moving_average(
    series: &ProcessedSeries,
    window: usize,
) -> Result<ProcessedSeries, PreprocessError> {
    moving_average_with_mode(series, window, MaMode::Centered)
}

pub fn moving_average_with_mode(
    series: &ProcessedSeries,
    window: usize,
    mode: MaMode,
) -> Result<ProcessedSeries, PreprocessError> {
    if window < 1 || window.is_multiple_of(2) {
        return Err(PreprocessError::InvalidWindow(window));
    }
    if let Some(gap) = series.first_gap() {
        return Err(PreprocessError::GapInSeries(gap));
    }
    let values = series.values();
    let n = values.len();
    let half = window / 2;
    let smoothed: Vec<f64> = (0..n)
        .map(|i| {
            let (lo, hi) = match mode {
                MaMode::Centered => (i.saturating_sub(half), (i + half + 1).min(n)),
                MaMode::Trailing => (i.saturating_sub(window - 1), i + 1),
            };
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let observations = series
        .observations
        .iter()
        .zip(smoothed)
        .map(|((d, _), v)| (*d, v))
        .collect();
    Ok(series.with(SeriesVariant::MovingAverage, observations))
}

/// Extracts the trend component of the seasonal-trend decomposition of a
/// gap-free series.
pub fn stl_trend(
    series: &ProcessedSeries,
    period: usize,
    params: &StlParams,
) -> Result<ProcessedSeries, PreprocessError> {
    if let Some(gap) = series.first_gap() {
        return Err(PreprocessError::GapInSeries(gap));
    }
    let decomposition = stl_decompose(&series.values(), period, params)?;
    let observations = series
        .observations
        .iter()
        .zip(decomposition.trend)
        .map(|((d, _), v)| (*d, v))
        .collect();
    Ok(series.with(SeriesVariant::Trend, observations))
}
