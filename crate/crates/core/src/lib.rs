//! Multi-criteria, time-series ranking of community mobility data.
//!
//! The crate turns per-locality daily mobility series (percent change from a
//! baseline, six place categories per locality) into Pareto-compliant
//! rankings of localities:
//!
//! 1. [`ingest`] parses the mobility CSV and a restriction-date calendar and
//!    selects the locality set under analysis.
//! 2. [`preprocess`] calibrates each series to a zero pre-restriction mean
//!    and reduces weekday seasonality with a centered moving average or the
//!    trend component of a seasonal-trend decomposition by loess.
//! 3. [`aggregate`] windows each series to the analysis period, optionally
//!    splits it into sub-periods, rescales to unit variance, and aggregates
//!    by mean, area under the curve, or cross-locality rank sums.
//! 4. [`mcdm`] compares the resulting objective vectors by Pareto dominance,
//!    multiplicative epsilon-dominance, or mean scalarization, and ranks
//!    localities by dominance depth via nondominated sorting.
//! 5. [`report`] orchestrates the factor matrix and writes ranking tables,
//!    radar charts, parallel-coordinates plots, and series plots.
//!
//! The `examples/` directory holds one runnable example per capability; the
//! `analyze` binary drives the full pipeline from the command line.

pub mod aggregate;
pub mod ingest;
pub mod mcdm;
pub mod preprocess;
pub mod report;

pub use aggregate::{
    agg_auc, agg_mean, agg_rank_sums, aggregate_windows, apply_shift, build_objective_vectors,
    category_windows, extract_window, global_shift, prepare_windows, scale_unit_variance,
    split_periods, AggregateError, Aggregation, AnalysisWindow, Granularity, ObjectiveVector,
    PeriodVectors, PipelineSettings, Seasonality,
};
pub use ingest::{
    AnalysisSet, CalendarEntry, CmrDataset, Coverage, IngestError, LocalityBundle,
    LocalityCategorySeries, LocalityKey, LocalityLevel, PlaceCategory, RestrictionCalendar,
};
pub use mcdm::{
    eps_dominates, eps_dominates_additive, mean_scalarize, nondominated_sort, nonneg_lift,
    pareto_compare, rank_run, sort_dominates, Comparator, DepthRanking, DominanceRelation,
    EpsilonForm, McdmError, RankingProvenance, SortedDepths,
};
pub use preprocess::{
    calibrate, loess_smooth, moving_average, moving_average_with_mode, repair_gaps, stl_decompose,
    stl_trend, MaMode, PreprocessError, ProcessedSeries, SeriesVariant, StlDecomposition,
    StlParams,
};
