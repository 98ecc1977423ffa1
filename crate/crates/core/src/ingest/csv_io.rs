//! CSV readers and writer for the mobility dataset and the restriction
//! calendar.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;

use super::{
    CalendarEntry, CmrDataset, IngestError, LocalityCategorySeries, LocalityKey, LocalityMeta,
    PlaceCategory, RestrictionCalendar,
};

const FIXED_COLUMNS: [&str; 7] = [
    "country_region_code",
    "country_region",
    "sub_region_1",
    "sub_region_2",
    "iso_3166_2_code",
    "census_fips_code",
    "date",
];

struct HeaderMap {
    fixed: [usize; 7],
    categories: [usize; 6],
}

fn map_header(headers: &csv::StringRecord) -> Result<HeaderMap, IngestError> {
    let find = |name: &str| -> Result<usize, IngestError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::MissingColumn {
                column: name.to_string(),
            })
    };
    let mut fixed = [0usize; 7];
    for (slot, name) in fixed.iter_mut().zip(FIXED_COLUMNS) {
        *slot = find(name)?;
    }
    let mut categories = [0usize; 6];
    for (slot, category) in categories.iter_mut().zip(PlaceCategory::ALL) {
        *slot = find(category.column_name())?;
    }
    Ok(HeaderMap { fixed, categories })
}

fn parse_date(field: &str, line: u64, column: &str) -> Result<NaiveDate, IngestError> {
    NaiveDate::parse_from_str(field.trim(), "%Y-%m-%d").map_err(|_| IngestError::Row {
        line,
        message: format!("unparsable date `{}` in column {column}", field.trim()),
    })
}

/// Parses the global mobility CSV. Strict: the first malformed row or
/// duplicate (locality, category, date) aborts the parse with its line
/// number, so no row is ever silently dropped.
pub fn parse_cmr_csv<R: Read>(reader: R) -> Result<CmrDataset, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let header = map_header(rdr.headers()?)?;

    // Accumulate per (locality, category) into date-keyed maps so duplicate
    // dates are caught regardless of input row order.
    let mut acc: BTreeMap<(String, String, String), [BTreeMap<NaiveDate, f64>; 6]> =
        BTreeMap::new();
    let mut dataset = CmrDataset::default();

    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize| record.get(idx).unwrap_or("");

        let key = LocalityKey::new(
            field(header.fixed[0]),
            field(header.fixed[1]),
            field(header.fixed[2]),
            field(header.fixed[3]),
        )
        .map_err(|e| IngestError::Row {
            line,
            message: e.to_string(),
        })?;
        let meta = LocalityMeta {
            iso_3166_2_code: field(header.fixed[4]).trim().to_string(),
            census_fips_code: field(header.fixed[5]).trim().to_string(),
        };
        let date = parse_date(field(header.fixed[6]), line, "date")?;

        dataset.entry(&key, &meta);
        let maps = acc
            .entry((
                key.country_code.clone(),
                key.sub_region_1.clone().unwrap_or_default(),
                key.sub_region_2.clone().unwrap_or_default(),
            ))
            .or_default();

        for (slot, category) in header.categories.iter().zip(PlaceCategory::ALL) {
            let cell = field(*slot).trim();
            if cell.is_empty() {
                continue; // missing observation, not zero
            }
            let value: f64 = cell.parse().map_err(|_| IngestError::Row {
                line,
                message: format!(
                    "unparsable number `{cell}` in column {}",
                    category.column_name()
                ),
            })?;
            if maps[category.index()].insert(date, value).is_some() {
                return Err(IngestError::DuplicateRecord {
                    key: key.spec_string(),
                    category,
                    date,
                    line,
                });
            }
        }
        dataset.bump_rows();
    }

    // Freeze the accumulated maps into validated series.
    let keys: Vec<LocalityKey> = dataset.localities().map(|l| l.key.clone()).collect();
    for key in keys {
        let triple = (
            key.country_code.clone(),
            key.sub_region_1.clone().unwrap_or_default(),
            key.sub_region_2.clone().unwrap_or_default(),
        );
        let maps = acc.remove(&triple).unwrap_or_default();
        let meta = dataset
            .get(&key)
            .map(|l| l.meta.clone())
            .unwrap_or_default();
        let data = dataset.entry(&key, &meta);
        for (map, category) in maps.into_iter().zip(PlaceCategory::ALL) {
            let observations: Vec<(NaiveDate, f64)> = map.into_iter().collect();
            let series = LocalityCategorySeries::new(key.clone(), category, observations)?;
            data.series[category.index()] = series;
        }
    }
    Ok(dataset)
}

fn format_value(v: f64) -> String {
    // Shortest round-trip form; integral values come out without a fraction.
    format!("{v}")
}

/// Writes a dataset back out in the mobility CSV layout. Re-parsing the
/// output reconstructs the dataset exactly (dates, values, missing cells).
pub fn serialize_cmr_csv<W: Write>(dataset: &CmrDataset, writer: W) -> Result<(), IngestError> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = FIXED_COLUMNS.to_vec();
    for category in PlaceCategory::ALL {
        header.push(category.column_name());
    }
    wtr.write_record(&header)?;

    for locality in dataset.localities() {
        let mut dates: std::collections::BTreeSet<NaiveDate> = std::collections::BTreeSet::new();
        for series in locality.all_series() {
            dates.extend(series.observations.iter().map(|(d, _)| *d));
        }
        // Random-access view per category for cell lookup.
        let lookup: Vec<BTreeMap<NaiveDate, f64>> = locality
            .all_series()
            .iter()
            .map(|s| s.observations.iter().copied().collect())
            .collect();
        for date in dates {
            let key = &locality.key;
            let mut row: Vec<String> = vec![
                key.country_code.clone(),
                key.country_name.clone(),
                key.sub_region_1.clone().unwrap_or_default(),
                key.sub_region_2.clone().unwrap_or_default(),
                locality.meta.iso_3166_2_code.clone(),
                locality.meta.census_fips_code.clone(),
                date.format("%Y-%m-%d").to_string(),
            ];
            for cat_map in &lookup {
                row.push(
                    cat_map
                        .get(&date)
                        .map(|v| format_value(*v))
                        .unwrap_or_default(),
                );
            }
            wtr.write_record(&row)?;
        }
    }
    wtr.flush()?;
    Ok(())
}

const CALENDAR_COLUMNS: [&str; 5] = [
    "country_region_code",
    "sub_region_1",
    "sub_region_2",
    "first_restriction",
    "first_relaxation",
];

/// Parses the restriction-date calendar CSV.
pub fn parse_calendar<R: Read>(reader: R) -> Result<RestrictionCalendar, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| -> Result<usize, IngestError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::MissingColumn {
                column: name.to_string(),
            })
    };
    let idx: Vec<usize> = CALENDAR_COLUMNS
        .iter()
        .map(|c| find(c))
        .collect::<Result<_, _>>()?;

    let mut calendar = RestrictionCalendar::default();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| record.get(idx[i]).unwrap_or("");

        let key =
            LocalityKey::new(field(0), "", field(1), field(2)).map_err(|e| IngestError::Row {
                line,
                message: e.to_string(),
            })?;
        let restriction = parse_date(field(3), line, "first_restriction")?;
        let relax_field = field(4).trim();
        let relaxation = if relax_field.is_empty() {
            None
        } else {
            Some(parse_date(relax_field, line, "first_relaxation")?)
        };
        let entry = CalendarEntry::new(restriction, relaxation).map_err(|e| match e {
            IngestError::RelaxationNotAfterRestriction {
                restriction,
                relaxation,
                ..
            } => IngestError::RelaxationNotAfterRestriction {
                restriction,
                relaxation,
                line,
            },
            other => other,
        })?;
        if !calendar.insert(&key, entry) {
            return Err(IngestError::DuplicateCalendarEntry {
                key: key.spec_string(),
                line,
            });
        }
    }
    Ok(calendar)
}
