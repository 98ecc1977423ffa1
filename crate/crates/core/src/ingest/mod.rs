//! Parsing and validation of community-mobility CSV data and the
//! restriction-date calendar, plus selection of the locality set under
//! analysis.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use thiserror::Error;

mod csv_io;

pub use csv_io::{parse_calendar, parse_cmr_csv, serialize_cmr_csv};

/// First date covered by the mobility report series.
pub const SERIES_START: NaiveDate = match NaiveDate::from_ymd_opt(2020, 2, 15) {
    Some(d) => d,
    None => unreachable!(),
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed header: missing column `{column}`")]
    MissingColumn { column: String },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("line {line}: duplicate record for {key} / {category} on {date}")]
    DuplicateRecord {
        key: String,
        category: PlaceCategory,
        date: NaiveDate,
        line: u64,
    },
    #[error("line {line}: duplicate calendar entry for {key}")]
    DuplicateCalendarEntry { key: String, line: u64 },
    #[error(
        "line {line}: first_relaxation {relaxation} is not after first_restriction {restriction}"
    )]
    RelaxationNotAfterRestriction {
        restriction: NaiveDate,
        relaxation: NaiveDate,
        line: u64,
    },
    #[error("locality {key} missing from {missing_from}")]
    MissingLocality {
        key: String,
        missing_from: &'static str,
    },
    #[error("locality {key} requested more than once")]
    DuplicateRequest { key: String },
    #[error("invalid locality key: {message}")]
    InvalidKey { message: String },
    #[error("invalid series for {key} / {category}: {message}")]
    InvalidSeries {
        key: String,
        category: PlaceCategory,
        message: String,
    },
}

/// The six place categories reported per locality.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum PlaceCategory {
    RetailRecreation,
    GroceryPharmacy,
    Parks,
    TransitStations,
    Workplaces,
    Residential,
}

impl PlaceCategory {
    /// All six categories in CSV column order (residential last).
    pub const ALL: [PlaceCategory; 6] = [
        PlaceCategory::RetailRecreation,
        PlaceCategory::GroceryPharmacy,
        PlaceCategory::Parks,
        PlaceCategory::TransitStations,
        PlaceCategory::Workplaces,
        PlaceCategory::Residential,
    ];

    /// The five non-residential categories, in the fixed order used for
    /// objective vectors.
    pub const ANALYSIS_SET: [PlaceCategory; 5] = [
        PlaceCategory::RetailRecreation,
        PlaceCategory::GroceryPharmacy,
        PlaceCategory::Parks,
        PlaceCategory::TransitStations,
        PlaceCategory::Workplaces,
    ];

    pub fn column_name(self) -> &'static str {
        match self {
            PlaceCategory::RetailRecreation => "retail_and_recreation_percent_change_from_baseline",
            PlaceCategory::GroceryPharmacy => "grocery_and_pharmacy_percent_change_from_baseline",
            PlaceCategory::Parks => "parks_percent_change_from_baseline",
            PlaceCategory::TransitStations => "transit_stations_percent_change_from_baseline",
            PlaceCategory::Workplaces => "workplaces_percent_change_from_baseline",
            PlaceCategory::Residential => "residential_percent_change_from_baseline",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PlaceCategory::RetailRecreation => "Retail & Recreation",
            PlaceCategory::GroceryPharmacy => "Grocery & Pharmacy",
            PlaceCategory::Parks => "Parks",
            PlaceCategory::TransitStations => "Transit Stations",
            PlaceCategory::Workplaces => "Workplaces",
            PlaceCategory::Residential => "Residential",
        }
    }

    /// Short identifier used in file names.
    pub fn slug(self) -> &'static str {
        match self {
            PlaceCategory::RetailRecreation => "retail_recreation",
            PlaceCategory::GroceryPharmacy => "grocery_pharmacy",
            PlaceCategory::Parks => "parks",
            PlaceCategory::TransitStations => "transit_stations",
            PlaceCategory::Workplaces => "workplaces",
            PlaceCategory::Residential => "residential",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|c| *c == self).unwrap()
    }
}

impl fmt::Display for PlaceCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Administrative level of a locality key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalityLevel {
    Country,
    Region,
    SubRegion,
}

/// Identifies one locality in the dataset.
///
/// Calendar entries carry no country name, so matching between the dataset,
/// the calendar, and user requests is on the (country_code, sub_region_1,
/// sub_region_2) triple; the country name is metadata carried from the data
/// file.
#[derive(
    Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct LocalityKey {
    pub country_code: String,
    pub country_name: String,
    pub sub_region_1: Option<String>,
    pub sub_region_2: Option<String>,
}

impl LocalityKey {
    /// Builds a key from raw fields, trimming surrounding whitespace and
    /// mapping empty sub-regions to `None`.
    pub fn new(
        country_code: &str,
        country_name: &str,
        sub_region_1: &str,
        sub_region_2: &str,
    ) -> Result<Self, IngestError> {
        let norm = |s: &str| {
            let t = s.trim();
            if t.is_empty() {
                None
            } else {
                Some(t.to_string())
            }
        };
        let sub_region_1 = norm(sub_region_1);
        let sub_region_2 = norm(sub_region_2);
        if let (Some(r2), None) = (&sub_region_2, &sub_region_1) {
            return Err(IngestError::InvalidKey {
                message: format!("sub_region_2 `{r2}` given without sub_region_1"),
            });
        }
        let country_code = country_code.trim().to_string();
        if country_code.is_empty() {
            return Err(IngestError::InvalidKey {
                message: "empty country_region_code".into(),
            });
        }
        Ok(LocalityKey {
            country_code,
            country_name: country_name.trim().to_string(),
            sub_region_1,
            sub_region_2,
        })
    }

    pub fn country(code: &str, name: &str) -> Self {
        LocalityKey::new(code, name, "", "").expect("valid country key")
    }

    pub fn region(code: &str, name: &str, sub_region_1: &str) -> Self {
        LocalityKey::new(code, name, sub_region_1, "").expect("valid region key")
    }

    pub fn level(&self) -> LocalityLevel {
        match (&self.sub_region_1, &self.sub_region_2) {
            (None, _) => LocalityLevel::Country,
            (Some(_), None) => LocalityLevel::Region,
            (Some(_), Some(_)) => LocalityLevel::SubRegion,
        }
    }

    /// The match triple used for calendar lookup and locality selection.
    pub fn triple(&self) -> (&str, &str, &str) {
        (
            &self.country_code,
            self.sub_region_1.as_deref().unwrap_or(""),
            self.sub_region_2.as_deref().unwrap_or(""),
        )
    }

    fn owned_triple(&self) -> (String, String, String) {
        let (a, b, c) = self.triple();
        (a.to_string(), b.to_string(), c.to_string())
    }

    /// Display name for tables and chart legends: the most specific
    /// non-empty component.
    pub fn display_name(&self) -> &str {
        self.sub_region_2
            .as_deref()
            .or(self.sub_region_1.as_deref())
            .filter(|s| !s.is_empty())
            .unwrap_or(if self.country_name.is_empty() {
                &self.country_code
            } else {
                &self.country_name
            })
    }

    /// Compact `CC[:sub_region_1[:sub_region_2]]` form, as accepted on the
    /// command line.
    pub fn spec_string(&self) -> String {
        let mut s = self.country_code.clone();
        if let Some(r1) = &self.sub_region_1 {
            s.push(':');
            s.push_str(r1);
        }
        if let Some(r2) = &self.sub_region_2 {
            s.push(':');
            s.push_str(r2);
        }
        s
    }

    /// Parses the `CC[:sub_region_1[:sub_region_2]]` form.
    pub fn parse_spec(spec: &str) -> Result<Self, IngestError> {
        let mut parts = spec.splitn(3, ':');
        let code = parts.next().unwrap_or("");
        let r1 = parts.next().unwrap_or("");
        let r2 = parts.next().unwrap_or("");
        LocalityKey::new(code, "", r1, r2)
    }
}

impl fmt::Display for LocalityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// One daily percent-change series for a (locality, category) pair.
///
/// Dates are strictly increasing; cells that were empty in the source file
/// are absent here rather than zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityCategorySeries {
    pub key: LocalityKey,
    pub category: PlaceCategory,
    pub observations: Vec<(NaiveDate, f64)>,
}

impl LocalityCategorySeries {
    pub fn new(
        key: LocalityKey,
        category: PlaceCategory,
        observations: Vec<(NaiveDate, f64)>,
    ) -> Result<Self, IngestError> {
        let err = |message: String| IngestError::InvalidSeries {
            key: key.spec_string(),
            category,
            message,
        };
        if let Some((first, _)) = observations.first() {
            if *first < SERIES_START {
                return Err(err(format!("first date {first} precedes {SERIES_START}")));
            }
        }
        for pair in observations.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(err(format!(
                    "dates not strictly increasing at {}",
                    pair[1].0
                )));
            }
        }
        Ok(LocalityCategorySeries {
            key,
            category,
            observations,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.observations.first().map(|(d, _)| *d)
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.observations.last().map(|(d, _)| *d)
    }
}

/// Per-locality metadata carried from the data file but not used as part of
/// the match key.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalityMeta {
    pub iso_3166_2_code: String,
    pub census_fips_code: String,
}

/// All six series for one locality.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityData {
    pub key: LocalityKey,
    pub meta: LocalityMeta,
    series: Vec<LocalityCategorySeries>,
}

impl LocalityData {
    fn new(key: LocalityKey, meta: LocalityMeta) -> Self {
        let series = PlaceCategory::ALL
            .iter()
            .map(|&category| LocalityCategorySeries {
                key: key.clone(),
                category,
                observations: Vec::new(),
            })
            .collect();
        LocalityData { key, meta, series }
    }

    pub fn series(&self, category: PlaceCategory) -> &LocalityCategorySeries {
        &self.series[category.index()]
    }

    pub fn all_series(&self) -> &[LocalityCategorySeries] {
        &self.series
    }
}

/// A parsed mobility dataset: one entry per locality, each holding six
/// category series. Immutable once parsed.
#[derive(Debug, Clone, Default)]
pub struct CmrDataset {
    localities: BTreeMap<(String, String, String), LocalityData>,
    rows_read: usize,
}

impl PartialEq for CmrDataset {
    /// Datasets compare by content; `rows_read` is parse bookkeeping (two
    /// source rows for the same locality/date merge into one on write).
    fn eq(&self, other: &Self) -> bool {
        self.localities == other.localities
    }
}

impl CmrDataset {
    pub fn len(&self) -> usize {
        self.localities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.localities.is_empty()
    }

    /// Number of data rows consumed while parsing.
    pub fn rows_read(&self) -> usize {
        self.rows_read
    }

    /// Total number of observations across every series.
    pub fn observation_count(&self) -> usize {
        self.localities
            .values()
            .flat_map(|l| l.all_series())
            .map(|s| s.len())
            .sum()
    }

    pub fn localities(&self) -> impl Iterator<Item = &LocalityData> {
        self.localities.values()
    }

    pub fn get(&self, key: &LocalityKey) -> Option<&LocalityData> {
        self.localities.get(&key.owned_triple())
    }

    pub fn series(
        &self,
        key: &LocalityKey,
        category: PlaceCategory,
    ) -> Option<&LocalityCategorySeries> {
        self.get(key).map(|l| l.series(category))
    }

    pub(crate) fn entry(&mut self, key: &LocalityKey, meta: &LocalityMeta) -> &mut LocalityData {
        self.localities
            .entry(key.owned_triple())
            .or_insert_with(|| LocalityData::new(key.clone(), meta.clone()))
    }

    pub(crate) fn bump_rows(&mut self) {
        self.rows_read += 1;
    }
}

/// Restriction and relaxation dates for one locality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CalendarEntry {
    pub first_restriction: NaiveDate,
    pub first_relaxation: Option<NaiveDate>,
}

impl CalendarEntry {
    pub fn new(
        first_restriction: NaiveDate,
        first_relaxation: Option<NaiveDate>,
    ) -> Result<Self, IngestError> {
        if let Some(relax) = first_relaxation {
            if relax <= first_restriction {
                return Err(IngestError::RelaxationNotAfterRestriction {
                    restriction: first_restriction,
                    relaxation: relax,
                    line: 0,
                });
            }
        }
        Ok(CalendarEntry {
            first_restriction,
            first_relaxation,
        })
    }
}

/// Map from locality to its restriction dates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RestrictionCalendar {
    entries: BTreeMap<(String, String, String), CalendarEntry>,
}

impl RestrictionCalendar {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &LocalityKey) -> Option<&CalendarEntry> {
        self.entries.get(&key.owned_triple())
    }

    /// Inserts an entry; returns false if the locality was already present.
    pub fn insert(&mut self, key: &LocalityKey, entry: CalendarEntry) -> bool {
        self.entries.insert(key.owned_triple(), entry).is_none()
    }
}

/// One locality selected for analysis: its six series plus calendar entry.
#[derive(Debug, Clone)]
pub struct LocalityBundle {
    pub key: LocalityKey,
    pub meta: LocalityMeta,
    pub calendar: CalendarEntry,
    series: Vec<LocalityCategorySeries>,
}

impl LocalityBundle {
    pub fn series(&self, category: PlaceCategory) -> &LocalityCategorySeries {
        &self.series[category.index()]
    }

    pub fn all_series(&self) -> &[LocalityCategorySeries] {
        &self.series
    }
}

/// The ordered locality set an analysis run operates on.
#[derive(Debug, Clone)]
pub struct AnalysisSet {
    pub localities: Vec<LocalityBundle>,
}

impl AnalysisSet {
    pub fn len(&self) -> usize {
        self.localities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.localities.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &LocalityKey> {
        self.localities.iter().map(|b| &b.key)
    }
}

/// Picks the requested localities out of the dataset and calendar, preserving
/// request order. Matching is exact (after whitespace trimming) on the
/// (country_code, sub_region_1, sub_region_2) triple.
pub fn select_localities(
    dataset: &CmrDataset,
    calendar: &RestrictionCalendar,
    keys: &[LocalityKey],
) -> Result<AnalysisSet, IngestError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut localities = Vec::with_capacity(keys.len());
    for key in keys {
        if !seen.insert(key.owned_triple()) {
            return Err(IngestError::DuplicateRequest {
                key: key.spec_string(),
            });
        }
        let data = dataset
            .get(key)
            .ok_or_else(|| IngestError::MissingLocality {
                key: key.spec_string(),
                missing_from: "dataset",
            })?;
        let entry = calendar
            .get(key)
            .ok_or_else(|| IngestError::MissingLocality {
                key: key.spec_string(),
                missing_from: "calendar",
            })?;
        localities.push(LocalityBundle {
            key: data.key.clone(),
            meta: data.meta.clone(),
            calendar: *entry,
            series: data.all_series().to_vec(),
        });
    }
    Ok(AnalysisSet { localities })
}

/// Coverage of the analysis interval by one series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// An observation exists for every date in the interval.
    Complete,
    /// Only interior gaps of at most `max_gap` consecutive days.
    Repairable,
    /// Leading/trailing gaps, or an interior gap longer than `max_gap`.
    Irreparable,
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coverage::Complete => "complete",
            Coverage::Repairable => "repairable",
            Coverage::Irreparable => "irreparable",
        })
    }
}

/// Classifies how well `series` covers the `window_length`-day interval
/// starting at the locality's first restriction date.
pub fn validate_coverage(
    series: &LocalityCategorySeries,
    entry: &CalendarEntry,
    window_length: u32,
    max_gap: u32,
) -> Coverage {
    let start = entry.first_restriction;
    let end = start + chrono::Days::new(window_length.saturating_sub(1) as u64);
    let (first, last) = match (series.first_date(), series.last_date()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Coverage::Irreparable,
    };
    // Gaps touching either edge of the series span cannot be interpolated.
    if first > start || last < end {
        return Coverage::Irreparable;
    }
    let dates: std::collections::BTreeSet<NaiveDate> =
        series.observations.iter().map(|(d, _)| *d).collect();
    let mut run = 0u32;
    let mut worst = 0u32;
    let mut day = start;
    while day <= end {
        if dates.contains(&day) {
            run = 0;
        } else {
            run += 1;
            worst = worst.max(run);
        }
        day = day.succ_opt().expect("date overflow");
    }
    if worst == 0 {
        Coverage::Complete
    } else if worst <= max_gap {
        Coverage::Repairable
    } else {
        Coverage::Irreparable
    }
}

/// Per-category coverage for one locality bundle.
pub fn coverage_report(
    bundle: &LocalityBundle,
    window_length: u32,
    max_gap: u32,
) -> Vec<(PlaceCategory, Coverage)> {
    PlaceCategory::ALL
        .iter()
        .map(|&category| {
            (
                category,
                validate_coverage(
                    bundle.series(category),
                    &bundle.calendar,
                    window_length,
                    max_gap,
                ),
            )
        })
        .collect()
}
