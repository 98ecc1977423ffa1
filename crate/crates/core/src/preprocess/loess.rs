//! Locally weighted polynomial regression with tricube weights.

use super::PreprocessError;

fn tricube(u: f64) -> f64 {
    if u < 1.0 {
        let t = 1.0 - u * u * u;
        t * t * t
    } else {
        0.0
    }
}

/// Solves the symmetric system `m x = b` in place by Gaussian elimination
/// with partial pivoting. Returns None when the matrix is singular.
fn solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1e-300);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            #[allow(clippy::needless_range_loop)]
            for k in col..n {
                m[row][k] -= factor * m[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Fits a locally weighted polynomial of `degree` over the `q` nearest
/// neighbors of `x0` and returns the fitted value at `x0`.
///
/// `rho` are per-point robustness weights multiplied into the tricube
/// weights. When the local design is singular the degree falls back toward a
/// weighted mean; all weights zero is an error.
pub(crate) fn fit_at(
    xs: &[f64],
    ys: &[f64],
    rho: Option<&[f64]>,
    q: usize,
    degree: usize,
    x0: f64,
) -> Result<f64, PreprocessError> {
    let n = xs.len();
    if n == 0 {
        return Err(PreprocessError::Empty);
    }
    let q = q.clamp(1, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (xs[a] - x0)
            .abs()
            .total_cmp(&(xs[b] - x0).abs())
            .then(a.cmp(&b))
    });
    let selected = &order[..q];
    let d_max = (xs[selected[q - 1]] - x0).abs();

    let weight = |idx: usize| -> f64 {
        let r = rho.map(|r| r[idx]).unwrap_or(1.0);
        if d_max <= 0.0 {
            // All selected points coincide with x0.
            r
        } else {
            tricube((xs[idx] - x0).abs() / d_max) * r
        }
    };

    let total: f64 = selected.iter().map(|&i| weight(i)).sum();
    if total.is_nan() || total <= 0.0 {
        return Err(PreprocessError::DegenerateDesign(x0));
    }

    for deg in (0..=degree).rev() {
        let dim = deg + 1;
        let mut m = vec![vec![0.0; dim]; dim];
        let mut b = vec![0.0; dim];
        for &i in selected {
            let w = weight(i);
            if w == 0.0 {
                continue;
            }
            let u = xs[i] - x0;
            let mut pow = vec![1.0; 2 * dim - 1];
            for k in 1..pow.len() {
                pow[k] = pow[k - 1] * u;
            }
            for r in 0..dim {
                for c in 0..dim {
                    m[r][c] += w * pow[r + c];
                }
                b[r] += w * pow[r] * ys[i];
            }
        }
        if let Some(beta) = solve(m, b) {
            return Ok(beta[0]);
        }
    }
    unreachable!("degree-0 fit with positive total weight always solves");
}

/// Smooths `points` with locally weighted regression, returning the fitted
/// value at each input x.
///
/// `span` is the fraction of points entering each local fit (the nearest
/// `ceil(span * n)` neighbors, tricube-weighted by distance); `degree` is the
/// local polynomial degree (0, 1 or 2). `robustness_weights`, when given,
/// multiply the tricube weights point-wise.
pub fn loess_smooth(
    points: &[(f64, f64)],
    span: f64,
    degree: usize,
    robustness_weights: Option<&[f64]>,
) -> Result<Vec<f64>, PreprocessError> {
    if points.is_empty() {
        return Err(PreprocessError::Empty);
    }
    if !(span > 0.0 && span <= 1.0) {
        return Err(PreprocessError::InvalidSpan(span));
    }
    if degree > 2 {
        return Err(PreprocessError::InvalidDegree(degree));
    }
    if let Some(w) = robustness_weights {
        if w.len() != points.len() {
            return Err(PreprocessError::WeightLengthMismatch {
                got: w.len(),
                expected: points.len(),
            });
        }
    }
    let xs: Vec<f64> = points.iter().map(|(x, _)| *x).collect();
    let ys: Vec<f64> = points.iter().map(|(_, y)| *y).collect();
    let q = (span * points.len() as f64).ceil() as usize;
    xs.iter()
        .map(|&x0| fit_at(&xs, &ys, robustness_weights, q, degree, x0))
        .collect()
}

/// Equally spaced variant used by the decomposition internals: smooths `ys`
/// at integer positions with a window of `q` points, optionally evaluating at
/// out-of-range positions. When robustness weights zero out a whole window
/// the fit falls back to the nearest raw value, as the reference
/// decomposition implementations do.
pub(crate) fn smooth_equispaced(
    ys: &[f64],
    rho: Option<&[f64]>,
    q: usize,
    degree: usize,
    eval_at: &[f64],
) -> Result<Vec<f64>, PreprocessError> {
    let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
    eval_at
        .iter()
        .map(|&x0| match fit_at(&xs, ys, rho, q, degree, x0) {
            Err(PreprocessError::DegenerateDesign(_)) => {
                let nearest = x0.round().clamp(0.0, (ys.len() - 1) as f64) as usize;
                Ok(ys[nearest])
            }
            other => other,
        })
        .collect()
}
