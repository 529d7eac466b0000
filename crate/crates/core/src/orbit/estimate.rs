use serde::{Deserialize, Serialize};

use super::{log_max1, OrbitEstimate, Verdict};

/// Regression settings. The slope of `ln max(1, h_n)` against `n` is fitted
/// over the trailing half of the orbit; the verdict compares the two
/// trailing quarters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimator {
    /// Relative agreement required between the quarter-window estimates.
    pub agreement: f64,
}

impl Default for Estimator {
    fn default() -> Self {
        Estimator { agreement: 1e-4 }
    }
}

fn slope(ys: &[f64], start: usize, end: usize) -> f64 {
    let n = (end - start + 1) as f64;
    let xm = (start + end) as f64 / 2.0;
    let ym = ys[start..=end].iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys[start..=end].iter().enumerate() {
        let dx = (start + i) as f64 - xm;
        sxy += dx * (y - ym);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// `(alpha_hat, window, verdict)` from `ln h_0, ..., ln h_N` (`N >= 4`).
pub fn estimate_alpha(
    ln_heights: &[Option<f64>],
    est: &Estimator,
) -> (f64, (usize, usize), Verdict) {
    let n = ln_heights.len() - 1;
    assert!(n >= 4, "estimator needs at least 4 iterations");
    let ys: Vec<f64> = ln_heights.iter().map(|l| log_max1(*l)).collect();
    let start = n - n / 2;
    let mid = n - n / 4;
    let alpha = slope(&ys, start, n).exp();
    let a1 = slope(&ys, start, mid).exp();
    let a2 = slope(&ys, mid, n).exp();
    let verdict = if (a1 - a2).abs() <= est.agreement * alpha {
        Verdict::ConvergedTo(alpha)
    } else {
        Verdict::Inconclusive
    };
    (alpha, (start, n), verdict)
}

/// Estimate from a completed orbit; a detected cycle forces `alpha_hat = 1`.
pub(crate) fn finish(ln_heights: Vec<Option<f64>>, preperiodic: bool) -> OrbitEstimate {
    let (alpha_hat, window, verdict) = estimate_alpha(&ln_heights, &Estimator::default());
    if preperiodic {
        OrbitEstimate {
            alpha_hat: 1.0,
            window,
            ln_heights,
            verdict: Verdict::Preperiodic,
        }
    } else {
        OrbitEstimate {
            alpha_hat,
            window,
            ln_heights,
            verdict,
        }
    }
}
