//! Seasonal-trend decomposition by loess.
//!
//! Inner loop: detrend, smooth each cycle-subseries (extending one cycle on
//! each side), low-pass filter the smoothed subseries, deseasonalize, smooth
//! the trend. Outer loop: recompute bisquare robustness weights from the
//! remainder and repeat.

use super::loess::smooth_equispaced;
use super::PreprocessError;

/// Smoothing parameters. `None` windows resolve to the published defaults:
/// a periodic seasonal fit (the loess span covers each whole cycle-subseries),
/// a low-pass window of the smallest odd integer >= period, and a trend
/// window from the `1.5 * period / (1 - 1.5 / seasonal_window)` heuristic.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct StlParams {
    pub seasonal_window: Option<usize>,
    pub trend_window: Option<usize>,
    pub low_pass_window: Option<usize>,
    pub seasonal_degree: usize,
    pub trend_degree: usize,
    pub low_pass_degree: usize,
    pub inner_iterations: usize,
    pub outer_iterations: usize,
}

impl Default for StlParams {
    fn default() -> Self {
        StlParams {
            seasonal_window: None,
            trend_window: None,
            low_pass_window: None,
            seasonal_degree: 1,
            trend_degree: 1,
            low_pass_degree: 1,
            inner_iterations: 2,
            outer_iterations: 1,
        }
    }
}

fn next_odd_at_least(v: f64) -> usize {
    let k = v.ceil().max(1.0) as usize;
    if k.is_multiple_of(2) {
        k + 1
    } else {
        k
    }
}

impl StlParams {
    fn resolved_low_pass(&self, period: usize) -> usize {
        self.low_pass_window
            .unwrap_or_else(|| next_odd_at_least(period as f64))
    }

    fn resolved_trend(&self, period: usize) -> usize {
        self.trend_window.unwrap_or_else(|| {
            let base = 1.5 * period as f64;
            match self.seasonal_window {
                // Periodic seasonal: the 1.5/n_s correction vanishes.
                None => next_odd_at_least(base),
                Some(ns) => next_odd_at_least(base / (1.0 - 1.5 / ns as f64)),
            }
        })
    }
}

/// Additive decomposition: `trend + seasonal + remainder` reproduces the
/// input pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct StlDecomposition {
    pub trend: Vec<f64>,
    pub seasonal: Vec<f64>,
    pub remainder: Vec<f64>,
}

fn moving_mean(values: &[f64], window: usize) -> Vec<f64> {
    let n = values.len();
    debug_assert!(window >= 1 && window <= n);
    let mut out = Vec::with_capacity(n - window + 1);
    let mut acc: f64 = values[..window].iter().sum();
    out.push(acc / window as f64);
    for i in window..n {
        acc += values[i] - values[i - window];
        out.push(acc / window as f64);
    }
    out
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn bisquare(u: f64) -> f64 {
    if u < 1.0 {
        let t = 1.0 - u * u;
        t * t
    } else {
        0.0
    }
}

/// Decomposes a gap-free series of daily values with the given seasonal
/// `period` into trend, seasonal, and remainder components.
pub fn stl_decompose(
    values: &[f64],
    period: usize,
    params: &StlParams,
) -> Result<StlDecomposition, PreprocessError> {
    if period < 2 {
        return Err(PreprocessError::InvalidPeriod(period));
    }
    let n = values.len();
    if n < 2 * period {
        return Err(PreprocessError::SeriesTooShort { len: n, period });
    }

    let q_low = params.resolved_low_pass(period);
    let q_trend = params.resolved_trend(period);
    let inner_positions: Vec<f64> = (0..n).map(|i| i as f64).collect();

    let mut trend = vec![0.0; n];
    let mut seasonal = vec![0.0; n];
    let mut rho: Option<Vec<f64>> = None;

    for outer in 0..=params.outer_iterations {
        for _ in 0..params.inner_iterations.max(1) {
            // 1. Detrend.
            let detrended: Vec<f64> = values.iter().zip(&trend).map(|(y, t)| y - t).collect();

            // 2. Cycle-subseries smoothing, extended one cycle on each side.
            let mut extended = vec![0.0; n + 2 * period];
            for pos in 0..period {
                let idx: Vec<usize> = (pos..n).step_by(period).collect();
                let sub: Vec<f64> = idx.iter().map(|&i| detrended[i]).collect();
                let sub_rho: Option<Vec<f64>> =
                    rho.as_ref().map(|r| idx.iter().map(|&i| r[i]).collect());
                let m = sub.len();
                let q = params.seasonal_window.map_or(m, |w| w.min(m));
                let eval: Vec<f64> = (-1..=m as i64).map(|v| v as f64).collect();
                let fitted =
                    smooth_equispaced(&sub, sub_rho.as_deref(), q, params.seasonal_degree, &eval)?;
                for (j, &v) in fitted.iter().enumerate() {
                    extended[j * period + pos] = v;
                }
            }

            // 3. Low-pass filter of the extended subseries.
            let stage = moving_mean(&extended, period);
            let stage = moving_mean(&stage, period);
            let stage = moving_mean(&stage, 3);
            debug_assert_eq!(stage.len(), n);
            let low = smooth_equispaced(
                &stage,
                None,
                q_low,
                params.low_pass_degree,
                &inner_positions,
            )?;

            // 4. Detrend the smoothed subseries to get the seasonal.
            for i in 0..n {
                seasonal[i] = extended[period + i] - low[i];
            }

            // 5/6. Deseasonalize and smooth the trend.
            let deseasonalized: Vec<f64> =
                values.iter().zip(&seasonal).map(|(y, s)| y - s).collect();
            trend = smooth_equispaced(
                &deseasonalized,
                rho.as_deref(),
                q_trend,
                params.trend_degree,
                &inner_positions,
            )?;
        }

        if outer < params.outer_iterations {
            let residuals: Vec<f64> = (0..n).map(|i| values[i] - trend[i] - seasonal[i]).collect();
            let abs: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
            let h = 6.0 * median(&abs);
            rho = Some(if h <= 0.0 {
                vec![1.0; n]
            } else {
                abs.iter().map(|a| bisquare(a / h)).collect()
            });
        }
    }

    let remainder: Vec<f64> = (0..n).map(|i| values[i] - trend[i] - seasonal[i]).collect();
    Ok(StlDecomposition {
        trend,
        seasonal,
        remainder,
    })
}
