//! Ranking-table assembly and CSV/JSON rendering.

use std::collections::BTreeMap;

use crate::ingest::LocalityKey;

/// A rectangular table of integer ranks/depths: one row per locality, one
/// column per factor combination.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub title: String,
    pub columns: Vec<String>,
    /// Rows sorted by the "most frequently observed" rank: modal rank, ties
    /// broken by mean rank, then by key order.
    pub rows: Vec<(LocalityKey, Vec<usize>)>,
    /// Provenance key/value pairs embedded in every rendering.
    pub provenance: Vec<(String, String)>,
}

impl RankTable {
    /// Builds a table from unsorted per-locality rank lists and applies the
    /// modal-rank row order.
    pub fn new(
        title: String,
        columns: Vec<String>,
        mut rows: Vec<(LocalityKey, Vec<usize>)>,
        provenance: Vec<(String, String)>,
    ) -> Self {
        rows.sort_by(|(ka, ra), (kb, rb)| {
            let (ma, avg_a) = modal_and_mean(ra);
            let (mb, avg_b) = modal_and_mean(rb);
            ma.cmp(&mb).then(avg_a.total_cmp(&avg_b)).then(ka.cmp(kb))
        });
        RankTable {
            title,
            columns,
            rows,
            provenance,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.provenance {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str("locality");
        for c in &self.columns {
            out.push(',');
            out.push_str(&csv_field(c));
        }
        out.push('\n');
        for (key, ranks) in &self.rows {
            out.push_str(&csv_field(&key.spec_string()));
            for r in ranks {
                out.push(',');
                out.push_str(&r.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let provenance: BTreeMap<&str, &str> = self
            .provenance
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        serde_json::json!({
            "title": self.title,
            "provenance": provenance,
            "columns": self.columns,
            "rows": self.rows.iter().map(|(key, ranks)| {
                serde_json::json!({
                    "locality": key.spec_string(),
                    "ranks": ranks,
                })
            }).collect::<Vec<_>>(),
        })
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// (modal rank, mean rank). Among equally frequent ranks the smallest wins.
fn modal_and_mean(ranks: &[usize]) -> (usize, f64) {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in ranks {
        *counts.entry(r).or_insert(0) += 1;
    }
    let modal = counts
        .iter()
        .max_by(|(ra, ca), (rb, cb)| ca.cmp(cb).then(rb.cmp(ra)))
        .map(|(r, _)| *r)
        .unwrap_or(0);
    let mean = ranks.iter().sum::<usize>() as f64 / ranks.len().max(1) as f64;
    (modal, mean)
}

/// Competition ranking ("1224") of values, ascending: rank 1 is the lowest
/// value; equal values share a rank and the next rank skips.
pub fn competition_ranks(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0usize; values.len()];
    for (pos, &idx) in order.iter().enumerate() {
        if pos > 0 && values[idx] == values[order[pos - 1]] {
            ranks[idx] = ranks[order[pos - 1]];
        } else {
            ranks[idx] = pos + 1;
        }
    }
    ranks
}
