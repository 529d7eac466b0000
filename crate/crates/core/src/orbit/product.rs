use serde::{Deserialize, Serialize};

use super::elliptic::{ec_alpha_estimate, ECPoint, EcSystem};
use super::estimate::finish;
use super::torus::{torus_estimate_unchecked, MonomialMap, TorusPoint};
use super::{ln_add, OrbitError, OrbitEstimate, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductEstimate {
    /// Estimate from the joint height `h_T + h_E`.
    pub joint: OrbitEstimate,
    pub torus: OrbitEstimate,
    pub elliptic: OrbitEstimate,
}

impl ProductEstimate {
    pub fn max_component(&self) -> f64 {
        self.torus.alpha_hat.max(self.elliptic.alpha_hat)
    }
}

/// `(x, P) -> (f(x), [m]P + Q)` on `G_m^n x E`.
pub fn product_alpha_estimate(
    torus: (&MonomialMap, &TorusPoint),
    elliptic: (&EcSystem, &ECPoint),
    n_iter: usize,
    bit_budget: u64,
) -> Result<ProductEstimate, OrbitError> {
    if n_iter < 4 {
        return Err(OrbitError::TooFewIterations { min: 4, got: n_iter });
    }
    let t = torus_estimate_unchecked(torus.0, torus.1, n_iter)?;
    let e = ec_alpha_estimate(elliptic.0, elliptic.1, n_iter, bit_budget)?;
    let ln: Vec<Option<f64>> = t
        .ln_heights
        .iter()
        .zip(&e.ln_heights)
        .map(|(a, b)| ln_add(*a, *b))
        .collect();
    let both = t.verdict == Verdict::Preperiodic && e.verdict == Verdict::Preperiodic;
    Ok(ProductEstimate {
        joint: finish(ln, both),
        torus: t,
        elliptic: e,
    })
}
