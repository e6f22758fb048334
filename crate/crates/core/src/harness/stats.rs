//! Small statistics kit used by the scenario runners: least-squares line
//! and exponential fits, and a bounded histogram with explicit
//! out-of-range accounting.

use crate::error::{Error, Result};

/// Result of a least-squares fit of `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination, clamped to [0, 1].
    pub r_squared: f64,
    /// Root mean square of the fit residuals.
    pub residual_rms: f64,
    pub n_points: usize,
}

/// Ordinary least squares for `y = slope * x + intercept`.
///
/// Needs at least three points so the residual statistics mean something.
/// A degenerate abscissa (all x equal) cannot determine a slope.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::Config(format!(
            "fit_line: {} x values vs {} y values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::Config(format!(
            "fit_line: need at least 3 points, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Numeric("fit_line: non-finite input".into()));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Relative test: sxx underflows when the xs agree to ~8 significant digits.
    if sxx <= 1e-15 * n * mean_x * mean_x {
        return Err(Error::Numeric(
            "fit_line: abscissa has no variance, slope undetermined".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (slope * x + intercept);
        ss_res += r * r;
    }
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        // All ys identical: the horizontal line reproduces them exactly.
        1.0
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        residual_rms: (ss_res / n).sqrt(),
        n_points: xs.len(),
    })
}

/// Fit `y = a * exp(b x)` by a least-squares line through `(x, ln y)`.
///
/// Returns the fit of the logarithm: `slope` is the decay/growth rate `b`
/// and `intercept` is `ln a`. Every y must be strictly positive.
pub fn fit_exponential(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if ys.iter().any(|&y| y <= 0.0) {
        return Err(Error::Domain(
            "fit_exponential: every y must be positive".into(),
        ));
    }
    let log_ys: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    fit_line(xs, &log_ys)
}

/// Histogram over half-open bins `[edges[i], edges[i+1])` with explicit
/// counters for values falling outside the covered range.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// Values below `edges[0]`.
    pub below: usize,
    /// Values at or above `edges[last]`.
    pub above: usize,
}

impl Histogram {
    /// Total number of tallied values, in and out of range.
    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.below + self.above
    }

    /// Left and right edge of bin `i`.
    pub fn bin_span(&self, i: usize) -> (f64, f64) {
        (self.edges[i], self.edges[i + 1])
    }
}

/// Tally `values` into half-open bins defined by strictly increasing
/// `edges`. Out-of-range values are counted separately, never dropped,
/// so `total()` always equals the number of inputs.
pub fn histogram(values: &[f64], edges: &[f64]) -> Result<Histogram> {
    if edges.len() < 2 {
        return Err(Error::Domain(
            "histogram: need at least two bin edges".into(),
        ));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(
            "histogram: bin edges must be strictly increasing".into(),
        ));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Domain("histogram: NaN value".into()));
    }
    let mut counts = vec![0usize; edges.len() - 1];
    let mut below = 0;
    let mut above = 0;
    for &v in values {
        if v < edges[0] {
            below += 1;
        } else if v >= edges[edges.len() - 1] {
            above += 1;
        } else {
            // partition_point: first edge strictly greater than v, so v
            // lands in the bin to that edge's left.
            let idx = edges.partition_point(|&e| e <= v) - 1;
            counts[idx] += 1;
        }
    }
    Ok(Histogram {
        edges: edges.to_vec(),
        counts,
        below,
        above,
    })
}

/// First valley when scanning `counts` rightward from `start`: the bin where
/// the counts stop falling and first turn strictly back up. A flat stretch at
/// the bottom counts as one valley and its first bin is reported. Returns
/// None when the counts never rise again (pure decay has no interior valley).
pub fn first_local_min_bin(counts: &[usize], start: usize) -> Option<usize> {
    if counts.len() < 3 || start + 2 >= counts.len() {
        return None;
    }
    let mut valley = None;
    for i in (start + 1)..counts.len() {
        if counts[i] < counts[i - 1] {
            valley = Some(i);
        } else if counts[i] > counts[i - 1] && valley.is_some() {
            return valley;
        }
    }
    None
}
