//! Orbits with exact heights: affine monomial maps on `G_m^n` acting on
//! multiplicatively represented algebraic points, and `P -> [m]P + Q` on
//! elliptic curves over `Q`, plus products of the two.
//!
//! Heights are carried as natural logarithms (`ln h`) because `h` itself
//! leaves the `f64` range after a few hundred torus iterations.

mod elliptic;
mod estimate;
mod product;
mod torus;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use elliptic::{
    ec_add, ec_alpha_estimate, ec_mul, ec_naive_height, ec_torsion_test, ECPoint, EcSystem,
    EllipticCurveQ, DEFAULT_BIT_BUDGET,
};
pub use estimate::{estimate_alpha, Estimator};
pub use product::{product_alpha_estimate, ProductEstimate};
pub use torus::{
    torus_alpha_estimate, torus_alpha_one_representative, torus_height, torus_is_preperiodic,
    torus_step, MonomialMap, Preperiodicity, TorusHeight, TorusPoint,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("dimension mismatch: map acts on dimension {map}, point has dimension {point}")]
    DimensionMismatch { map: usize, point: usize },
    #[error("invalid torus point: {0}")]
    InvalidPoint(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primes must be strictly increasing")]
    PrimesNotIncreasing,
    #[error("at least {min} iterations required, got {got}")]
    TooFewIterations { min: usize, got: usize },
    #[error("no cycle found within {budget} steps")]
    BudgetExceeded { budget: usize },
    #[error("minimal polynomial has the cyclotomic factor {0}")]
    CyclotomicFactor(crate::IntPoly),
    #[error("M - I is not invertible")]
    NonInvertible,
    #[error("singular curve: discriminant is zero")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("multiplier must be at least 2, got {0}")]
    BadMultiplier(i64),
    #[error("coordinate size exceeded {budget} bits after {completed} steps")]
    BitBudgetExceeded {
        budget: u64,
        completed: usize,
        /// `ln h` for the steps that did complete.
        ln_heights: Vec<Option<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Preperiodic,
    ConvergedTo(f64),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEstimate {
    pub alpha_hat: f64,
    /// Iterations `(n_min, n_max)` used by the regression.
    pub window: (usize, usize),
    /// `ln h(f^n(x))` for `n = 0..=N`; `None` where the height is zero.
    pub ln_heights: Vec<Option<f64>>,
    pub verdict: Verdict,
}

impl OrbitEstimate {
    pub fn iterations(&self) -> usize {
        self.ln_heights.len().saturating_sub(1)
    }
}

/// `ln max(1, h)` from `ln h`.
pub fn log_max1(ln_h: Option<f64>) -> f64 {
    ln_h.map_or(0.0, |v| v.max(0.0))
}

/// `ln(e^a + e^b)` with `None` as `ln 0`.
pub fn ln_add(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
            Some(hi + (lo - hi).exp().ln_1p())
        }
    }
}

/// Decimal rendering of `h = e^ln_h`, in scientific notation when large.
pub fn format_height(ln_h: Option<f64>) -> String {
    let Some(l) = ln_h else {
        return "0".to_string();
    };
    if l < 700.0 {
        return format!("{:e}", l.exp());
    }
    let log10 = l / std::f64::consts::LN_10;
    let e = log10.floor();
    let m = 10f64.powf(log10 - e);
    format!("{m:.15}e{e}")
}

/// Writes the height sequence as CSV with columns `n,h,log_h`, where
/// `log_h = ln max(1, h)`.
pub fn write_heights_csv<W: Write>(mut w: W, ln_heights: &[Option<f64>]) -> io::Result<()> {
    writeln!(w, "n,h,log_h")?;
    for (n, l) in ln_heights.iter().enumerate() {
        writeln!(w, "{n},{},{}", format_height(*l), log_max1(*l))?;
    }
    Ok(())
}

/// Iterates `step` from `x0` for `n_iter` steps with Brent cycle detection.
/// Once a repeat is found the remaining heights follow from periodicity.
pub(crate) struct OrbitRun {
    pub ln_heights: Vec<Option<f64>>,
    /// `(index, period)`: `x_index = x_(index - period)`.
    pub cycle: Option<(usize, usize)>,
}

pub(crate) fn run_orbit<S, F, H>(
    x0: S,
    n_iter: usize,
    mut step: F,
    ln_height: H,
) -> Result<OrbitRun, OrbitError>
where
    S: Clone + PartialEq,
    F: FnMut(&S) -> Result<S, OrbitError>,
    H: Fn(&S) -> Option<f64>,
{
    let mut ln_heights = Vec::with_capacity(n_iter + 1);
    ln_heights.push(ln_height(&x0));
    let mut tortoise = x0.clone();
    let mut x = x0;
    let (mut power, mut lam) = (1usize, 1usize);
    for k in 1..=n_iter {
        x = match step(&x) {
            Ok(next) => next,
            Err(OrbitError::BitBudgetExceeded { budget, .. }) => {
                return Err(OrbitError::BitBudgetExceeded {
                    budget,
                    completed: k - 1,
                    ln_heights,
                })
            }
            Err(e) => return Err(e),
        };
        ln_heights.push(ln_height(&x));
        if x == tortoise {
            for n in k + 1..=n_iter {
                let v = ln_heights[n - lam];
                ln_heights.push(v);
            }
            return Ok(OrbitRun {
                ln_heights,
                cycle: Some((k, lam)),
            });
        }
        if lam == power {
            tortoise = x.clone();
            power *= 2;
            lam = 0;
        }
        lam += 1;
    }
    Ok(OrbitRun {
        ln_heights,
        cycle: None,
    })
}
