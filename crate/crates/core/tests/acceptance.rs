//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see every line.

use std::time::Instant;

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mobility_mcdm::aggregate::{agg_auc, agg_mean, agg_rank_sums, AnalysisWindow, ObjectiveVector};
use mobility_mcdm::ingest::{LocalityKey, PlaceCategory};
use mobility_mcdm::mcdm::{
    eps_dominates, nondominated_sort, nonneg_lift, pareto_compare, Comparator, DominanceRelation,
};
use mobility_mcdm::preprocess::{
    calibrate, loess_smooth, stl_decompose, ProcessedSeries, SeriesVariant, StlParams,
};
use mobility_mcdm::report::{resolve_config, run_pipeline, write_outputs, CliOverrides, RunConfig};

fn verdict(criterion: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("ACCEPTANCE {criterion}: PASS");
    } else {
        println!("ACCEPTANCE {criterion}: FAIL");
        for f in &failures {
            eprintln!("  {f}");
        }
        panic!("{criterion} failed with {} violation(s)", failures.len());
    }
}

fn key(code: &str) -> LocalityKey {
    LocalityKey::country(code, "")
}

fn vector(idx: usize, components: Vec<f64>) -> ObjectiveVector {
    ObjectiveVector::new(key(&format!("L{idx}")), 0, components)
}

fn window(values: &[f64]) -> AnalysisWindow {
    AnalysisWindow {
        key: key("XX"),
        category: PlaceCategory::Workplaces,
        variant: SeriesVariant::Raw,
        start: NaiveDate::from_ymd_opt(2020, 3, 1).unwrap(),
        values: values.to_vec(),
        scaled: false,
        scale_divisor: 1.0,
    }
}

// --- criterion 1: dominance axiom suite -----------------------------------

#[test]
fn criterion_1_dominance_axioms() {
    use DominanceRelation::*;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();

    let grid = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..5).map(|_| rng.gen_range(-2..3) as f64).collect()
    };
    let dominates = |r: DominanceRelation| matches!(r, StrictlyDominates | Dominates);

    for trial in 0..10_000 {
        let a = grid(&mut rng);
        let b = grid(&mut rng);
        let c = grid(&mut rng);
        let ab = pareto_compare(&a, &b).unwrap();
        let ba = pareto_compare(&b, &a).unwrap();

        // antisymmetry of Dominates
        if dominates(ab) && ba.implies_weak_dominance() {
            failures.push(format!("trial {trial}: antisymmetry {a:?} vs {b:?}"));
        }
        // symmetry of Indifferent
        if (ab == Indifferent) != (ba == Indifferent) {
            failures.push(format!("trial {trial}: indifference asymmetric"));
        }
        // symmetry of Incomparable: mutual incomparability holds exactly
        // when neither vector dominates and they are not equal
        let mutually_incomparable = ab == Incomparable && ba == Incomparable;
        let neither_dominates = !dominates(ab) && !dominates(ba) && ab != Indifferent;
        if mutually_incomparable != neither_dominates {
            failures.push(format!(
                "trial {trial}: incomparability asymmetric {a:?} {b:?}"
            ));
        }
        // strength chain: strict => dominates => weak
        if ab == StrictlyDominates {
            let chain = a.iter().zip(&b).all(|(x, y)| x <= y)
                && a.iter().zip(&b).any(|(x, y)| x < y)
                && ab.implies_weak_dominance();
            if !chain {
                failures.push(format!("trial {trial}: strength chain broken"));
            }
        }
        // transitivity of Dominates
        let bc = pareto_compare(&b, &c).unwrap();
        if dominates(ab) && dominates(bc) && !dominates(pareto_compare(&a, &c).unwrap()) {
            failures.push(format!("trial {trial}: transitivity {a:?} {b:?} {c:?}"));
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("runtime {elapsed:?} exceeded 1 s"));
    }
    verdict("criterion 1 (dominance axioms)", failures);
}

// --- criterion 2: nondominated-sort oracle ---------------------------------

/// Self-contained quadratic front-peeling oracle with its own dominance test.
fn depth_oracle(vectors: &[Vec<f64>]) -> Vec<usize> {
    let dom = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
    };
    let n = vectors.len();
    let mut depth = vec![0usize; n];
    let mut level = 0;
    while depth.contains(&0) {
        level += 1;
        let front: Vec<usize> = (0..n)
            .filter(|&j| depth[j] == 0)
            .filter(|&j| !(0..n).any(|i| depth[i] == 0 && i != j && dom(&vectors[i], &vectors[j])))
            .collect();
        for j in front {
            depth[j] = level;
        }
    }
    depth
}

#[test]
fn criterion_2_sort_matches_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failures = Vec::new();
    for trial in 0..1000 {
        let n = rng.gen_range(1..=12);
        let dims = rng.gen_range(1..=5);
        let raw: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dims).map(|_| rng.gen_range(0..6) as f64).collect())
            .collect();
        let vectors: Vec<ObjectiveVector> = raw
            .iter()
            .enumerate()
            .map(|(i, v)| vector(i, v.clone()))
            .collect();
        let sorted = nondominated_sort(&vectors, &Comparator::Pareto).unwrap();
        let expected = depth_oracle(&raw);
        if sorted.depths != expected {
            failures.push(format!(
                "trial {trial}: got {:?}, oracle {:?} for {raw:?}",
                sorted.depths, expected
            ));
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("runtime {elapsed:?} exceeded 5 s"));
    }
    verdict("criterion 2 (nondominated-sort oracle)", failures);
}

// --- criterion 3: epsilon-dominance properties ------------------------------

#[test]
fn criterion_3_eps_dominance_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut failures = Vec::new();
    for trial in 0..10_000 {
        let a: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..10.0)).collect();
        let b: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..10.0)).collect();
        // monotone in epsilon
        let eps = rng.gen_range(0.001..0.4);
        let wider = eps + rng.gen_range(0.001..0.4);
        if eps_dominates(&a, &b, eps).unwrap() && !eps_dominates(&a, &b, wider).unwrap() {
            failures.push(format!("trial {trial}: monotonicity {a:?} {b:?}"));
        }
        // agreement with weak Pareto dominance at eps -> 0
        let tiny = eps_dominates(&a, &b, 1e-12).unwrap();
        let weak = pareto_compare(&a, &b).unwrap().implies_weak_dominance();
        if tiny != weak {
            failures.push(format!("trial {trial}: eps->0 disagreement {a:?} {b:?}"));
        }
    }
    verdict("criterion 3 (epsilon-dominance properties)", failures);
}

// --- criterion 4: STL identity ----------------------------------------------

#[test]
fn criterion_4_stl_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut failures = Vec::new();
    let params = StlParams::default();
    for trial in 0..100 {
        let values: Vec<f64> = (0..150).map(|_| rng.gen_range(-60.0..40.0)).collect();
        let out = stl_decompose(&values, 7, &params).unwrap();
        for (i, y) in values.iter().enumerate() {
            let sum = out.trend[i] + out.seasonal[i] + out.remainder[i];
            if (sum - y).abs() >= 1e-9 {
                failures.push(format!(
                    "trial {trial} index {i}: identity off by {}",
                    sum - y
                ));
                break;
            }
        }
    }
    let constant = vec![7.25; 150];
    let out = stl_decompose(&constant, 7, &params).unwrap();
    for i in 0..constant.len() {
        if (out.trend[i] - 7.25).abs() >= 1e-6
            || out.seasonal[i].abs() >= 1e-6
            || out.remainder[i].abs() >= 1e-6
        {
            failures.push(format!("constant series decomposition off at {i}"));
            break;
        }
    }
    verdict("criterion 4 (decomposition identity)", failures);
}

// --- criterion 5: STL trend recovery -----------------------------------------

#[test]
fn criterion_5_stl_trend_recovery() {
    let mut failures = Vec::new();
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/stl_reference.json"
    );
    let fixture: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let values: Vec<f64> = fixture["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let reference_trend: Vec<f64> = fixture["reference_trend"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let intercept = fixture["ramp_intercept"].as_f64().unwrap();
    let slope = fixture["ramp_slope"].as_f64().unwrap();
    let n = values.len();

    let out = stl_decompose(&values, 7, &StlParams::default()).unwrap();
    let lo = n / 10;
    let hi = n - n / 10;
    let rmse_vs = |other: &dyn Fn(usize) -> f64| {
        ((lo..hi)
            .map(|i| (out.trend[i] - other(i)).powi(2))
            .sum::<f64>()
            / (hi - lo) as f64)
            .sqrt()
    };
    let ramp_rmse = rmse_vs(&|i| intercept + slope * i as f64);
    if ramp_rmse > 0.1 {
        failures.push(format!("interior trend RMSE vs ramp {ramp_rmse} > 0.1"));
    }
    // agreement with the independently recorded reference decomposition
    let ref_rmse = rmse_vs(&|i| reference_trend[i]);
    if ref_rmse > 0.1 {
        failures.push(format!("interior trend RMSE vs reference {ref_rmse} > 0.1"));
    }
    verdict("criterion 5 (trend recovery)", failures);
}

// --- criterion 6: loess oracle ------------------------------------------------

/// Closed-form weighted linear regression over the tricube neighborhood.
fn wls_oracle(points: &[(f64, f64)], span: f64, x0: f64) -> f64 {
    let n = points.len();
    let q = (span * n as f64).ceil() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (points[a].0 - x0)
            .abs()
            .total_cmp(&(points[b].0 - x0).abs())
            .then(a.cmp(&b))
    });
    let selected = &order[..q];
    let d_max = (points[selected[q - 1]].0 - x0).abs();
    let tri = |u: f64| {
        if u < 1.0 {
            (1.0 - u.powi(3)).powi(3)
        } else {
            0.0
        }
    };
    let w: Vec<f64> = selected
        .iter()
        .map(|&i| tri((points[i].0 - x0).abs() / d_max))
        .collect();
    let sw: f64 = w.iter().sum();
    let xb = selected
        .iter()
        .zip(&w)
        .map(|(&i, wi)| wi * points[i].0)
        .sum::<f64>()
        / sw;
    let yb = selected
        .iter()
        .zip(&w)
        .map(|(&i, wi)| wi * points[i].1)
        .sum::<f64>()
        / sw;
    let sxx: f64 = selected
        .iter()
        .zip(&w)
        .map(|(&i, wi)| wi * (points[i].0 - xb).powi(2))
        .sum();
    let sxy: f64 = selected
        .iter()
        .zip(&w)
        .map(|(&i, wi)| wi * (points[i].0 - xb) * (points[i].1 - yb))
        .sum();
    yb + (sxy / sxx) * (x0 - xb)
}

#[test]
fn criterion_6_loess_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut failures = Vec::new();
    for trial in 0..100 {
        let mut xs: Vec<f64> = (0..30).map(|_| rng.gen_range(0.0..20.0)).collect();
        xs.sort_by(|a, b| a.total_cmp(b));
        let points: Vec<(f64, f64)> = xs
            .into_iter()
            .map(|x| (x, 4.0 * (x * 0.4).cos() + rng.gen_range(-1.5..1.5)))
            .collect();
        let fitted = loess_smooth(&points, 0.5, 1, None).unwrap();
        for ((x0, _), f) in points.iter().zip(&fitted) {
            let want = wls_oracle(&points, 0.5, *x0);
            if (f - want).abs() >= 1e-9 {
                failures.push(format!("trial {trial} x0 {x0}: {f} vs {want}"));
            }
        }
    }
    verdict("criterion 6 (local regression oracle)", failures);
}

// --- criterion 7: aggregation oracles -----------------------------------------

#[test]
fn criterion_7_aggregation_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut failures = Vec::new();

    // mean vs compensated summation
    for _ in 0..200 {
        let values: Vec<f64> = (0..50).map(|_| rng.gen_range(-100.0..100.0)).collect();
        let mut sum = 0.0;
        let mut c = 0.0;
        for &v in &values {
            let y = v - c;
            let t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        let kahan = sum / values.len() as f64;
        let got = agg_mean(&window(&values)).unwrap();
        if (got - kahan).abs() >= 1e-12 {
            failures.push(format!("mean vs kahan: {got} vs {kahan}"));
        }
    }

    // AUC on piecewise-linear data with knots at the sample days
    for _ in 0..200 {
        let n = rng.gen_range(2..60);
        let knots: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..50.0)).collect();
        let got = agg_auc(&window(&knots)).unwrap();
        let want: f64 = knots.windows(2).map(|p| p[0] + (p[1] - p[0]) / 2.0).sum();
        if (got - want).abs() >= 1e-9 {
            failures.push(format!("auc analytic: {got} vs {want}"));
        }
    }

    // rank sums vs full-sort oracle, plus the midrank total identity
    for trial in 0..500 {
        let n = rng.gen_range(2..7);
        let days = rng.gen_range(1..15);
        let values: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..days).map(|_| rng.gen_range(0..6) as f64).collect())
            .collect();
        let windows: Vec<AnalysisWindow> = values.iter().map(|v| window(v)).collect();
        let refs: Vec<&AnalysisWindow> = windows.iter().collect();
        let got = agg_rank_sums(&refs).unwrap();
        // oracle: midrank = |below| + (|equal| + 1) / 2, summed per day
        let mut want = vec![0.0; n];
        for day in 0..days {
            for i in 0..n {
                let v = values[i][day];
                let below = values.iter().filter(|o| o[day] < v).count() as f64;
                let equal = values.iter().filter(|o| o[day] == v).count() as f64;
                want[i] += below + (equal + 1.0) / 2.0;
            }
        }
        for (g, w) in got.iter().zip(&want) {
            if (g - w).abs() >= 1e-9 {
                failures.push(format!("trial {trial}: rank sums {got:?} vs {want:?}"));
                break;
            }
        }
        let total: f64 = got.iter().sum();
        let expect = days as f64 * (n * (n + 1)) as f64 / 2.0;
        if (total - expect).abs() >= 1e-9 {
            failures.push(format!("trial {trial}: rank-sum total {total} vs {expect}"));
        }
    }
    verdict("criterion 7 (aggregation oracles)", failures);
}

// --- criterion 8: calibration/scaling invariants --------------------------------

#[test]
fn criterion_8_calibration_scaling_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut failures = Vec::new();
    let start = NaiveDate::from_ymd_opt(2020, 2, 15).unwrap();
    let restriction = NaiveDate::from_ymd_opt(2020, 3, 1).unwrap();

    for trial in 0..100 {
        let n = rng.gen_range(30..120);
        let series = ProcessedSeries {
            key: key("XX"),
            category: PlaceCategory::Parks,
            variant: SeriesVariant::Raw,
            observations: (0..n)
                .map(|i| {
                    (
                        start + chrono::Days::new(i as u64),
                        rng.gen_range(-80.0..40.0),
                    )
                })
                .collect(),
            calibration_offset: 0.0,
        };
        let calibrated = calibrate(&series, restriction).unwrap();
        let pre: Vec<f64> = calibrated
            .observations
            .iter()
            .filter(|(d, _)| *d < restriction)
            .map(|(_, v)| *v)
            .collect();
        let pre_mean = pre.iter().sum::<f64>() / pre.len() as f64;
        if pre_mean.abs() >= 1e-9 {
            failures.push(format!("trial {trial}: pre-restriction mean {pre_mean}"));
        }
        let twice = calibrate(&calibrated, restriction).unwrap();
        if twice
            .observations
            .iter()
            .zip(&calibrated.observations)
            .any(|((_, a), (_, b))| (a - b).abs() >= 1e-9)
        {
            failures.push(format!("trial {trial}: calibration not idempotent"));
        }

        let values: Vec<f64> = (0..50).map(|_| rng.gen_range(-80.0..40.0)).collect();
        let scaled = mobility_mcdm::aggregate::scale_unit_variance(&window(&values)).unwrap();
        let mean = scaled.values.iter().sum::<f64>() / scaled.values.len() as f64;
        let var = scaled
            .values
            .iter()
            .map(|v| (v - mean).powi(2))
            .sum::<f64>()
            / (scaled.values.len() - 1) as f64;
        if (var - 1.0).abs() >= 1e-9 {
            failures.push(format!("trial {trial}: scaled variance {var}"));
        }

        // lift leaves Pareto depths unchanged
        let m = rng.gen_range(2..8);
        let vectors: Vec<ObjectiveVector> = (0..m)
            .map(|i| vector(i, (0..4).map(|_| rng.gen_range(-10.0..10.0)).collect()))
            .collect();
        let (lifted, _) = nonneg_lift(&vectors);
        let before = nondominated_sort(&vectors, &Comparator::Pareto).unwrap();
        let after = nondominated_sort(&lifted, &Comparator::Pareto).unwrap();
        if before.depths != after.depths {
            failures.push(format!("trial {trial}: lift changed depths"));
        }
    }
    verdict("criterion 8 (calibration/scaling invariants)", failures);
}

// --- criterion 9: data-dependent reproduction ------------------------------------

fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fixture_config(dir: &std::path::Path, localities: &str, level: &str) -> RunConfig {
    resolve_config(
        CliOverrides {
            data: Some(data_path("cmr_sample.csv")),
            calendar: Some(data_path("restriction_calendar.csv")),
            localities: Some(localities.into()),
            level: Some(level.into()),
            seasonality: Some("both".into()),
            aggregation: Some("all".into()),
            granularity: Some("50".into()),
            comparison: Some("all".into()),
            out: Some(dir.join("out").to_string_lossy().into_owned()),
            formats: Some("json".into()),
            ..Default::default()
        },
        None,
    )
    .unwrap()
}

#[test]
fn criterion_9_bundled_data_reproduction() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();

    let region_keys = "FR:Île-de-France,IT:Lombardy,BR:São Paulo,BR:Amazonas,US:New York";
    let config = fixture_config(dir.path(), region_keys, "region");
    let result = run_pipeline(&config).unwrap();
    let provenance = |extra: &str| {
        format!(
            "config {} | calendar Lombardy 2020-02-23/2020-05-11 | {extra}",
            result.config_hash
        )
    };
    if !result.fully_succeeded() {
        failures.push(format!("region combos failed: {:?}", result.failures));
    }

    let idf = LocalityKey::parse_spec("FR:Île-de-France").unwrap();
    let lombardy = LocalityKey::parse_spec("IT:Lombardy").unwrap();
    let sao_paulo = LocalityKey::parse_spec("BR:São Paulo").unwrap();
    let amazonas = LocalityKey::parse_spec("BR:Amazonas").unwrap();
    let new_york = LocalityKey::parse_spec("US:New York").unwrap();

    // (a) mean-scalarized total order across all aggregation x seasonality
    let expected_order = [&idf, &lombardy, &sao_paulo, &amazonas, &new_york];
    for combo in &result.combos {
        let ranked = combo.rankings.iter().find(|r| r.label == "mean").unwrap();
        let mut actual: Vec<(usize, String)> = result
            .localities
            .iter()
            .map(|k| {
                (
                    ranked.ranking.depth(0, k).unwrap(),
                    k.display_name().to_string(),
                )
            })
            .collect();
        actual.sort();
        let expected: Vec<String> = expected_order
            .iter()
            .map(|k| k.display_name().to_string())
            .collect();
        let got: Vec<String> = actual.iter().map(|(_, n)| n.clone()).collect();
        let depths: Vec<usize> = actual.iter().map(|(d, _)| *d).collect();
        if got != expected || depths != vec![1, 2, 3, 4, 5] {
            failures.push(provenance(&format!(
                "(a) {}: expected total order {expected:?}, got {got:?} with depths {depths:?}",
                combo.slug()
            )));
        }
    }

    // (b) Pareto cluster structure per combination
    for combo in &result.combos {
        let ranked = combo.rankings.iter().find(|r| r.label == "pareto").unwrap();
        let d = |k: &LocalityKey| ranked.ranking.depth(0, k).unwrap();
        let (di, dl, ds, da, dn) = (
            d(&idf),
            d(&lombardy),
            d(&sao_paulo),
            d(&amazonas),
            d(&new_york),
        );
        let top_ok = di <= 2 && dl <= 2;
        let middle_ok = ds == da && ds > di.max(dl);
        let last_ok = dn > ds && [di, dl, ds, da].iter().all(|&x| x < dn);
        if !(top_ok && middle_ok && last_ok) {
            failures.push(provenance(&format!(
                "(b) {}: depths IDF={di} Lombardy={dl} SaoPaulo={ds} Amazonas={da} NewYork={dn}",
                combo.slug()
            )));
        }
    }

    // (c) country-level Pareto clusters
    let country_keys = "ES,NZ,AR,CA,DE,JP,KR";
    let config = fixture_config(dir.path(), country_keys, "country");
    let country_result = run_pipeline(&config).unwrap();
    if !country_result.fully_succeeded() {
        failures.push(format!(
            "country combos failed: {:?}",
            country_result.failures
        ));
    }
    let clusters = [
        ("ES", 1usize),
        ("NZ", 1),
        ("AR", 2),
        ("CA", 3),
        ("DE", 3),
        ("JP", 4),
        ("KR", 4),
    ];
    for combo in &country_result.combos {
        let ranked = combo.rankings.iter().find(|r| r.label == "pareto").unwrap();
        for (code, expected_depth) in clusters {
            let got = ranked.ranking.depth(0, &key(code)).unwrap();
            if got != expected_depth {
                failures.push(provenance(&format!(
                    "(c) {}: {code} depth {got}, expected {expected_depth}",
                    combo.slug()
                )));
            }
        }
    }

    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() >= 30.0 {
        failures.push(format!("runtime {elapsed:?} exceeded 30 s"));
    }
    verdict("criterion 9 (bundled-data reproduction)", failures);
}

// --- criterion 10: end-to-end determinism -----------------------------------------

fn walk(dir: &std::path::Path, out: &mut Vec<std::path::PathBuf>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            walk(&path, out);
        } else {
            out.push(path);
        }
    }
}

#[test]
fn criterion_10_end_to_end_determinism() {
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let region_keys = "FR:Île-de-France,IT:Lombardy,BR:São Paulo,BR:Amazonas,US:New York";

    let mut outputs = Vec::new();
    for run in 0..2 {
        let mut config = fixture_config(dir.path(), region_keys, "region");
        config.granularity = mobility_mcdm::report::config::parse_granularity("both").unwrap();
        config.formats = mobility_mcdm::report::config::parse_formats("csv,json,svg").unwrap();
        config.out = dir.path().join(format!("run{run}"));
        let result = run_pipeline(&config).unwrap();
        write_outputs(&result, &config).unwrap();
        outputs.push(config.out.clone());
    }

    let mut files_a = Vec::new();
    walk(&outputs[0], &mut files_a);
    files_a.sort();
    let mut files_b = Vec::new();
    walk(&outputs[1], &mut files_b);
    files_b.sort();

    let rel_a: Vec<_> = files_a
        .iter()
        .map(|p| p.strip_prefix(&outputs[0]).unwrap())
        .collect();
    let rel_b: Vec<_> = files_b
        .iter()
        .map(|p| p.strip_prefix(&outputs[1]).unwrap())
        .collect();
    if rel_a != rel_b {
        failures.push(format!(
            "file sets differ: {} vs {}",
            rel_a.len(),
            rel_b.len()
        ));
    } else {
        if files_a.is_empty() {
            failures.push("no output files produced".to_string());
        }
        for (a, b) in files_a.iter().zip(&files_b) {
            if std::fs::read(a).unwrap() != std::fs::read(b).unwrap() {
                failures.push(format!("{:?} differs between runs", a.file_name().unwrap()));
            }
        }
    }
    verdict("criterion 10 (end-to-end determinism)", failures);
}
