//! Deterministic SVG emitters: radar charts, parallel-coordinates depth
//! trajectories, and time-series plots.
//!
//! No randomness anywhere: colors and collision nudges come from fixed
//! locality-index tables, so byte-identical inputs yield byte-identical
//! files.

use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::aggregate::ObjectiveVector;
use crate::ingest::PlaceCategory;
use crate::mcdm::DepthRanking;
use crate::preprocess::ProcessedSeries;

/// Fixed palette indexed by locality position in the run order.
pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

pub fn color_for(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Provenance block embedded in every chart.
#[derive(Debug, Clone, Default)]
pub struct ChartMeta {
    pub title: String,
    pub config_hash: String,
    pub shift: Option<f64>,
    /// (locality, category, divisor) triples for scaled data.
    pub scale_divisors: Vec<(String, PlaceCategory, f64)>,
    pub extra: Vec<(String, String)>,
}

impl ChartMeta {
    fn metadata_element(&self) -> String {
        let mut lines = vec![format!("config={}", self.config_hash)];
        lines.push(match self.shift {
            Some(s) => format!("shift={s}"),
            None => "shift=none".to_string(),
        });
        if self.scale_divisors.is_empty() {
            lines.push("scale_divisors=none".to_string());
        } else {
            let parts: Vec<String> = self
                .scale_divisors
                .iter()
                .map(|(k, c, v)| format!("{k}:{}:{v}", c.slug()))
                .collect();
            lines.push(format!("scale_divisors={}", parts.join(",")));
        }
        for (k, v) in &self.extra {
            lines.push(format!("{k}={v}"));
        }
        format!("<metadata>{}</metadata>\n", escape(&lines.join("; ")))
    }
}

fn svg_open(width: f64, height: f64, meta: &ChartMeta) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = fmt(width),
        h = fmt(height)
    );
    s.push_str(&meta.metadata_element());
    let _ = writeln!(
        s,
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>",
        fmt(width),
        fmt(height)
    );
    if !meta.title.is_empty() {
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            fmt(width / 2.0),
            escape(&meta.title)
        );
    }
    s
}

fn legend(s: &mut String, labels: &[String], x: f64, y0: f64) {
    for (i, label) in labels.iter().enumerate() {
        let y = y0 + i as f64 * 16.0;
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>",
            fmt(x),
            fmt(y - 9.0),
            color_for(i)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            fmt(x + 14.0),
            fmt(y),
            escape(label)
        );
    }
}

/// Normalized radar radii in [0, 1], one row per vector, in the fixed
/// category order. The mapping is strictly increasing in the aggregated
/// value, so componentwise radius containment is equivalent to weak Pareto
/// dominance of the contained polygon.
pub fn radar_radii(vectors: &[ObjectiveVector]) -> Vec<Vec<f64>> {
    let values: Vec<f64> = vectors
        .iter()
        .flat_map(|v| v.components.iter().copied())
        .collect();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    vectors
        .iter()
        .map(|v| {
            v.components
                .iter()
                .map(|c| if span > 0.0 { (c - min) / span } else { 0.5 })
                .collect()
        })
        .collect()
}

/// Radar chart of one period's objective vectors: categories as angles, the
/// aggregated value as radius (inner = lower value = greater reduction), one
/// closed polygon per locality.
pub fn radar_chart(vectors: &[ObjectiveVector], meta: &ChartMeta) -> String {
    let width = 560.0;
    let height = 430.0;
    let cx = 220.0;
    let cy = 225.0;
    let r_inner = 28.0;
    let r_outer = 160.0;
    let axes = PlaceCategory::ANALYSIS_SET;
    let n_axes = axes.len();

    let mut meta = meta.clone();
    meta.extra.push((
        "radial_orientation".to_string(),
        "radius increases with aggregated value; inner = greater mobility reduction".to_string(),
    ));

    let mut s = svg_open(width, height, &meta);

    let angle = |i: usize| -> (f64, f64) {
        let theta =
            -std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * i as f64 / n_axes as f64;
        (theta.cos(), theta.sin())
    };

    // grid rings
    for ring in 1..=4 {
        let r = r_inner + (r_outer - r_inner) * ring as f64 / 4.0;
        let pts: Vec<String> = (0..n_axes)
            .map(|i| {
                let (dx, dy) = angle(i);
                format!("{},{}", fmt(cx + r * dx), fmt(cy + r * dy))
            })
            .collect();
        let _ = writeln!(
            s,
            "<polygon points=\"{}\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"1\"/>",
            pts.join(" ")
        );
    }
    // axes and labels
    for (i, category) in axes.iter().enumerate() {
        let (dx, dy) = angle(i);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>",
            fmt(cx),
            fmt(cy),
            fmt(cx + r_outer * dx),
            fmt(cy + r_outer * dy)
        );
        let lx = cx + (r_outer + 16.0) * dx;
        let ly = cy + (r_outer + 16.0) * dy + 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            fmt(lx),
            fmt(ly),
            escape(category.label())
        );
    }

    let radii = radar_radii(vectors);
    for (idx, rs) in radii.iter().enumerate() {
        let pts: Vec<String> = rs
            .iter()
            .enumerate()
            .map(|(i, r01)| {
                let r = r_inner + r01 * (r_outer - r_inner);
                let (dx, dy) = angle(i);
                format!("{},{}", fmt(cx + r * dx), fmt(cy + r * dy))
            })
            .collect();
        let color = color_for(idx);
        let _ = writeln!(
            s,
            "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.07\" stroke=\"{color}\" stroke-width=\"2\"/>",
            pts.join(" ")
        );
    }

    let labels: Vec<String> = vectors
        .iter()
        .map(|v| v.key.display_name().to_string())
        .collect();
    legend(&mut s, &labels, 420.0, 60.0);
    s.push_str("</svg>\n");
    s
}

/// One vertex of a parallel-coordinates polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParcoordsVertex {
    pub x: f64,
    pub y: f64,
    pub depth: usize,
}

/// Geometry for the parallel-coordinates plot: one polyline per locality,
/// vertex height given by dominance depth, colliding vertices shifted along
/// the x axis by a fixed offset per collision-group position.
pub fn parcoords_layout(
    ranking: &DepthRanking,
    order: &[crate::ingest::LocalityKey],
    plot: (f64, f64, f64, f64),
) -> Vec<Vec<ParcoordsVertex>> {
    let (left, top, width, height) = plot;
    let n_periods = ranking.periods.len();
    let max_depth = ranking
        .periods
        .iter()
        .flat_map(|m| m.values())
        .copied()
        .max()
        .unwrap_or(1);
    let x_for = |p: usize| {
        if n_periods > 1 {
            left + width * p as f64 / (n_periods - 1) as f64
        } else {
            left + width / 2.0
        }
    };
    let y_for = |d: usize| {
        if max_depth > 1 {
            top + height * (d - 1) as f64 / (max_depth - 1) as f64
        } else {
            top + height / 2.0
        }
    };

    let mut vertices: Vec<Vec<ParcoordsVertex>> = order
        .iter()
        .map(|key| {
            (0..n_periods)
                .map(|p| {
                    let depth = ranking.depth(p, key).unwrap_or(0);
                    ParcoordsVertex {
                        x: x_for(p),
                        y: y_for(depth),
                        depth,
                    }
                })
                .collect()
        })
        .collect();

    // Deterministic collision nudge: group by (period, depth), order by
    // locality index, spread around the axis at 6px steps.
    const NUDGE: f64 = 6.0;
    #[allow(clippy::needless_range_loop)]
    for p in 0..n_periods {
        for d in 1..=max_depth {
            let members: Vec<usize> = (0..order.len())
                .filter(|&i| vertices[i][p].depth == d)
                .collect();
            if members.len() > 1 {
                let mid = (members.len() - 1) as f64 / 2.0;
                for (slot, &i) in members.iter().enumerate() {
                    vertices[i][p].x += (slot as f64 - mid) * NUDGE;
                }
            }
        }
    }
    vertices
}

/// Parallel-coordinates plot of dominance depths across periods.
pub fn parallel_coordinates(
    ranking: &DepthRanking,
    order: &[crate::ingest::LocalityKey],
    period_labels: &[String],
    meta: &ChartMeta,
) -> String {
    let width = 640.0;
    let height = 360.0;
    let plot = (70.0, 50.0, 380.0, 250.0);
    let mut s = svg_open(width, height, meta);

    let max_depth = ranking
        .periods
        .iter()
        .flat_map(|m| m.values())
        .copied()
        .max()
        .unwrap_or(1);
    let layout = parcoords_layout(ranking, order, plot);
    let (left, top, w, h) = plot;

    // vertical axes with depth ticks
    let n_periods = ranking.periods.len();
    for p in 0..n_periods {
        let x = if n_periods > 1 {
            left + w * p as f64 / (n_periods - 1) as f64
        } else {
            left + w / 2.0
        };
        let _ = writeln!(
            s,
            "<line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"#888888\" stroke-width=\"1\"/>",
            x = fmt(x),
            y1 = fmt(top),
            y2 = fmt(top + h)
        );
        let label = period_labels
            .get(p)
            .cloned()
            .unwrap_or_else(|| format!("P{p}"));
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            fmt(x),
            fmt(top + h + 20.0),
            escape(&label)
        );
    }
    for d in 1..=max_depth {
        let y = if max_depth > 1 {
            top + h * (d - 1) as f64 / (max_depth - 1) as f64
        } else {
            top + h / 2.0
        };
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{d}</text>",
            fmt(left - 10.0),
            fmt(y + 3.0)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 {} {})\" text-anchor=\"middle\">dominance depth</text>",
        fmt(left - 40.0),
        fmt(top + h / 2.0),
        fmt(left - 40.0),
        fmt(top + h / 2.0)
    );

    for (idx, pts) in layout.iter().enumerate() {
        let color = color_for(idx);
        let path: Vec<String> = pts
            .iter()
            .map(|v| format!("{},{}", fmt(v.x), fmt(v.y)))
            .collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            path.join(" ")
        );
        for v in pts {
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>",
                fmt(v.x),
                fmt(v.y)
            );
        }
    }

    let labels: Vec<String> = order.iter().map(|k| k.display_name().to_string()).collect();
    legend(&mut s, &labels, 480.0, 60.0);
    s.push_str("</svg>\n");
    s
}

/// Restriction/relaxation markers and the shaded analysis window.
#[derive(Debug, Clone, Copy)]
pub struct WindowMarkers {
    pub restriction: NaiveDate,
    pub relaxation: Option<NaiveDate>,
    pub window_length: usize,
}

/// Line chart of one or more series (categories or variants of one locality)
/// with dashed restriction/relaxation markers and the shaded analysis
/// window.
pub fn series_plot(
    series: &[&ProcessedSeries],
    labels: &[String],
    markers: &WindowMarkers,
    meta: &ChartMeta,
) -> String {
    let width = 760.0;
    let height = 420.0;
    let plot = (60.0, 40.0, 520.0, 320.0);
    let (left, top, w, h) = plot;
    let mut s = svg_open(width, height, meta);

    let mut first = NaiveDate::MAX;
    let mut last = NaiveDate::MIN;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for sr in series {
        for (d, v) in &sr.observations {
            first = first.min(*d);
            last = last.max(*d);
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    if lo >= hi {
        lo -= 1.0;
        hi += 1.0;
    }
    let pad = (hi - lo) * 0.06;
    lo -= pad;
    hi += pad;
    let days = (last - first).num_days().max(1) as f64;
    let x_for = |d: NaiveDate| left + w * (d - first).num_days() as f64 / days;
    let y_for = |v: f64| top + h * (1.0 - (v - lo) / (hi - lo));

    // shaded analysis window
    let win_start = markers.restriction;
    let win_end_excl = markers.restriction + chrono::Days::new(markers.window_length as u64);
    let shade_x0 = x_for(win_start.clamp(first, last));
    let shade_x1 = x_for(win_end_excl.clamp(first, last));
    let _ = writeln!(
        s,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#f2f2f2\"/>",
        fmt(shade_x0),
        fmt(top),
        fmt(shade_x1 - shade_x0),
        fmt(h)
    );

    // frame and zero line
    let _ = writeln!(
        s,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888888\"/>",
        fmt(left),
        fmt(top),
        fmt(w),
        fmt(h)
    );
    if lo < 0.0 && hi > 0.0 {
        let y = y_for(0.0);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#cccccc\" stroke-width=\"1\"/>",
            fmt(left),
            fmt(left + w),
            y = fmt(y)
        );
    }

    // y ticks
    for tick in 0..=4 {
        let v = lo + (hi - lo) * tick as f64 / 4.0;
        let y = y_for(v);
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{}</text>",
            fmt(left - 6.0),
            fmt(y + 3.0),
            fmt(v)
        );
    }
    // x ticks: month starts
    let mut tick = first;
    while tick <= last {
        if chrono::Datelike::day(&tick) == 1 || tick == first {
            let x = x_for(tick);
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
                fmt(x),
                fmt(top + h + 16.0),
                tick.format("%Y-%m-%d")
            );
        }
        tick = tick.succ_opt().expect("date overflow");
    }

    // series polylines
    for (idx, sr) in series.iter().enumerate() {
        let pts: Vec<String> = sr
            .observations
            .iter()
            .map(|(d, v)| format!("{},{}", fmt(x_for(*d)), fmt(y_for(*v))))
            .collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            pts.join(" "),
            color_for(idx)
        );
    }

    // dashed restriction / relaxation markers
    let mut marker = |date: NaiveDate, label: &str| {
        if date >= first && date <= last {
            let x = x_for(date);
            let _ = writeln!(
                s,
                "<line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"#333333\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>",
                x = fmt(x),
                y1 = fmt(top),
                y2 = fmt(top + h)
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">{}</text>",
                fmt(x),
                fmt(top - 5.0),
                escape(label)
            );
        }
    };
    marker(markers.restriction, "restriction");
    if let Some(relax) = markers.relaxation {
        marker(relax, "relaxation");
    }

    legend(&mut s, labels, 600.0, 60.0);
    s.push_str("</svg>\n");
    s
}
