//! Run configuration: the experimental factor matrix plus I/O settings.
//!
//! Every command-line flag has a mirror field in the structured config file;
//! flags override file values.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::aggregate::{Aggregation, Granularity, Seasonality};
use crate::ingest::{LocalityKey, LocalityLevel};
use crate::mcdm::EpsilonForm;
use crate::preprocess::{MaMode, StlParams};

use super::ReportError;

/// Which comparator kinds a run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComparisonKind {
    Pareto,
    Epsilon,
    MeanScalarized,
}

impl ComparisonKind {
    pub fn slug(self) -> &'static str {
        match self {
            ComparisonKind::Pareto => "pareto",
            ComparisonKind::Epsilon => "epsilon",
            ComparisonKind::MeanScalarized => "mean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// Locality level of a run (affects key validation and output labels).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunLevel {
    Region,
    Country,
}

/// Fully resolved configuration for one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub data: PathBuf,
    pub calendar: PathBuf,
    pub localities: Vec<LocalityKey>,
    pub level: RunLevel,
    pub seasonality: Vec<Seasonality>,
    pub granularity: Vec<Granularity>,
    pub aggregation: Vec<Aggregation>,
    pub comparison: Vec<ComparisonKind>,
    pub epsilon: Vec<f64>,
    pub epsilon_form: EpsilonForm,
    pub window_length: usize,
    pub period_length: usize,
    pub ma_window: usize,
    pub ma_mode: MaMode,
    pub stl_period: usize,
    pub stl: StlParams,
    pub max_gap: u64,
    pub pin_shift: Option<f64>,
    /// Output destination; not part of the analysis identity, so excluded
    /// from the config hash.
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub formats: Vec<OutputFormat>,
}

impl RunConfig {
    /// Validates the cross-field invariants.
    pub fn validate(&self) -> Result<(), ReportError> {
        if self.localities.is_empty() {
            return Err(ReportError::Config("locality list is empty".into()));
        }
        for key in &self.localities {
            let ok = match self.level {
                RunLevel::Region => key.level() != LocalityLevel::Country,
                RunLevel::Country => key.level() == LocalityLevel::Country,
            };
            if !ok {
                return Err(ReportError::Config(format!(
                    "key {key} does not match level {:?}",
                    self.level
                )));
            }
        }
        if self.seasonality.is_empty()
            || self.granularity.is_empty()
            || self.aggregation.is_empty()
            || self.comparison.is_empty()
        {
            return Err(ReportError::Config("empty factor list".into()));
        }
        if self.comparison.contains(&ComparisonKind::Epsilon) {
            if self.epsilon.is_empty() {
                return Err(ReportError::Config(
                    "epsilon comparison requested with an empty epsilon list".into(),
                ));
            }
            if let Some(bad) = self.epsilon.iter().find(|e| e.is_nan() || **e <= 0.0) {
                return Err(ReportError::Config(format!(
                    "epsilon must be > 0, got {bad}"
                )));
            }
        }
        if self.granularity.contains(&Granularity::SubPeriods)
            && (self.period_length == 0 || !self.window_length.is_multiple_of(self.period_length))
        {
            return Err(ReportError::Config(format!(
                "window length {} not divisible by period length {}",
                self.window_length, self.period_length
            )));
        }
        if self.formats.is_empty() {
            return Err(ReportError::Config("no output formats selected".into()));
        }
        Ok(())
    }

    /// Hex digest identifying this configuration; embedded in every output.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

/// The structured config file: one optional field per flag, using the same
/// string syntax as the command line.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub data: Option<String>,
    pub calendar: Option<String>,
    pub localities: Option<String>,
    pub level: Option<String>,
    pub seasonality: Option<String>,
    pub aggregation: Option<String>,
    pub granularity: Option<String>,
    pub comparison: Option<String>,
    pub epsilon: Option<String>,
    pub epsilon_form: Option<String>,
    pub window_length: Option<usize>,
    pub period_length: Option<usize>,
    pub ma_window: Option<usize>,
    pub ma_mode: Option<String>,
    pub stl_period: Option<usize>,
    pub stl: Option<StlParams>,
    pub max_gap: Option<u64>,
    pub pin_shift: Option<f64>,
    pub out: Option<String>,
    pub formats: Option<String>,
}

impl FileConfig {
    pub fn from_toml(text: &str) -> Result<Self, ReportError> {
        toml::from_str(text).map_err(|e| ReportError::Config(format!("config file: {e}")))
    }
}

fn bad(flag: &str, value: &str, allowed: &str) -> ReportError {
    ReportError::Config(format!("invalid {flag} `{value}` (expected {allowed})"))
}

pub fn parse_level(value: &str) -> Result<RunLevel, ReportError> {
    match value {
        "region" => Ok(RunLevel::Region),
        "country" => Ok(RunLevel::Country),
        other => Err(bad("--level", other, "region|country")),
    }
}

pub fn parse_seasonality(value: &str) -> Result<Vec<Seasonality>, ReportError> {
    match value {
        "ma" => Ok(vec![Seasonality::MovingAverage]),
        "trend" => Ok(vec![Seasonality::Trend]),
        "both" => Ok(vec![Seasonality::MovingAverage, Seasonality::Trend]),
        other => Err(bad("--seasonality", other, "ma|trend|both")),
    }
}

pub fn parse_aggregation(value: &str) -> Result<Vec<Aggregation>, ReportError> {
    match value {
        "mean" => Ok(vec![Aggregation::Mean]),
        "auc" => Ok(vec![Aggregation::Auc]),
        "rs" => Ok(vec![Aggregation::RankSums]),
        "all" => Ok(vec![
            Aggregation::Mean,
            Aggregation::Auc,
            Aggregation::RankSums,
        ]),
        other => Err(bad("--aggregation", other, "mean|auc|rs|all")),
    }
}

pub fn parse_granularity(value: &str) -> Result<Vec<Granularity>, ReportError> {
    match value {
        "50" => Ok(vec![Granularity::SinglePeriod]),
        "10" => Ok(vec![Granularity::SubPeriods]),
        "both" => Ok(vec![Granularity::SinglePeriod, Granularity::SubPeriods]),
        other => Err(bad("--granularity", other, "50|10|both")),
    }
}

pub fn parse_comparison(value: &str) -> Result<Vec<ComparisonKind>, ReportError> {
    match value {
        "pareto" => Ok(vec![ComparisonKind::Pareto]),
        "epsilon" => Ok(vec![ComparisonKind::Epsilon]),
        "mean" => Ok(vec![ComparisonKind::MeanScalarized]),
        "all" => Ok(vec![
            ComparisonKind::Pareto,
            ComparisonKind::Epsilon,
            ComparisonKind::MeanScalarized,
        ]),
        other => Err(bad("--comparison", other, "pareto|epsilon|mean|all")),
    }
}

pub fn parse_epsilon_list(value: &str) -> Result<Vec<f64>, ReportError> {
    value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| bad("--epsilon", s, "a comma-separated list of numbers"))
        })
        .collect()
}

pub fn parse_epsilon_form(value: &str) -> Result<EpsilonForm, ReportError> {
    match value {
        "multiplicative" => Ok(EpsilonForm::Multiplicative),
        "additive" => Ok(EpsilonForm::Additive),
        other => Err(bad("--epsilon-form", other, "multiplicative|additive")),
    }
}

pub fn parse_ma_mode(value: &str) -> Result<MaMode, ReportError> {
    match value {
        "centered" => Ok(MaMode::Centered),
        "trailing" => Ok(MaMode::Trailing),
        other => Err(bad("--ma-mode", other, "centered|trailing")),
    }
}

pub fn parse_formats(value: &str) -> Result<Vec<OutputFormat>, ReportError> {
    let mut formats: Vec<OutputFormat> = value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(bad("--formats", other, "csv,json,svg")),
        })
        .collect::<Result<_, _>>()?;
    formats.sort();
    formats.dedup();
    Ok(formats)
}

pub fn parse_localities(value: &str) -> Result<Vec<LocalityKey>, ReportError> {
    value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            LocalityKey::parse_spec(s)
                .map_err(|e| ReportError::Config(format!("--localities: {e}")))
        })
        .collect()
}

/// Raw option values as they arrive from the command line; `None` falls back
/// to the config file, then to the built-in default.
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub data: Option<String>,
    pub calendar: Option<String>,
    pub localities: Option<String>,
    pub level: Option<String>,
    pub seasonality: Option<String>,
    pub aggregation: Option<String>,
    pub granularity: Option<String>,
    pub comparison: Option<String>,
    pub epsilon: Option<String>,
    pub epsilon_form: Option<String>,
    pub window_length: Option<usize>,
    pub period_length: Option<usize>,
    pub ma_window: Option<usize>,
    pub ma_mode: Option<String>,
    pub stl_period: Option<usize>,
    pub max_gap: Option<u64>,
    pub pin_shift: Option<f64>,
    pub out: Option<String>,
    pub formats: Option<String>,
}

/// Merges CLI overrides over file values over defaults into a validated
/// [`RunConfig`].
pub fn resolve_config(
    cli: CliOverrides,
    file: Option<FileConfig>,
) -> Result<RunConfig, ReportError> {
    let file = file.unwrap_or_default();
    let pick = |c: Option<String>, f: Option<String>| c.or(f);

    let data =
        pick(cli.data, file.data).ok_or_else(|| ReportError::Config("missing --data".into()))?;
    let calendar = pick(cli.calendar, file.calendar)
        .ok_or_else(|| ReportError::Config("missing --calendar".into()))?;
    let localities = pick(cli.localities, file.localities)
        .ok_or_else(|| ReportError::Config("missing --localities".into()))?;
    let level =
        pick(cli.level, file.level).ok_or_else(|| ReportError::Config("missing --level".into()))?;
    let out = pick(cli.out, file.out).ok_or_else(|| ReportError::Config("missing --out".into()))?;

    let config = RunConfig {
        data: PathBuf::from(data),
        calendar: PathBuf::from(calendar),
        localities: parse_localities(&localities)?,
        level: parse_level(&level)?,
        seasonality: parse_seasonality(
            &pick(cli.seasonality, file.seasonality).unwrap_or_else(|| "both".into()),
        )?,
        aggregation: parse_aggregation(
            &pick(cli.aggregation, file.aggregation).unwrap_or_else(|| "all".into()),
        )?,
        granularity: parse_granularity(
            &pick(cli.granularity, file.granularity).unwrap_or_else(|| "50".into()),
        )?,
        comparison: parse_comparison(
            &pick(cli.comparison, file.comparison).unwrap_or_else(|| "all".into()),
        )?,
        epsilon: parse_epsilon_list(
            &pick(cli.epsilon, file.epsilon).unwrap_or_else(|| "0.01,0.05,0.1".into()),
        )?,
        epsilon_form: parse_epsilon_form(
            &pick(cli.epsilon_form, file.epsilon_form).unwrap_or_else(|| "multiplicative".into()),
        )?,
        window_length: cli.window_length.or(file.window_length).unwrap_or(50),
        period_length: cli.period_length.or(file.period_length).unwrap_or(10),
        ma_window: cli.ma_window.or(file.ma_window).unwrap_or(7),
        ma_mode: parse_ma_mode(
            &pick(cli.ma_mode, file.ma_mode).unwrap_or_else(|| "centered".into()),
        )?,
        stl_period: cli.stl_period.or(file.stl_period).unwrap_or(7),
        stl: file.stl.unwrap_or_default(),
        max_gap: cli.max_gap.or(file.max_gap).unwrap_or(3),
        pin_shift: cli.pin_shift.or(file.pin_shift),
        out: PathBuf::from(out),
        formats: parse_formats(
            &pick(cli.formats, file.formats).unwrap_or_else(|| "csv,json,svg".into()),
        )?,
    };
    config.validate()?;
    Ok(config)
}
