//! Certified enclosures of the spectral radius `rho(F)`, the largest modulus
//! of a complex root of `F`.
//!
//! Two stages. Graeffe root squaring on the exact integer coefficients gives
//! a bracket `[beta/d, 2 beta]` for the largest root modulus of the k-th
//! iterate (Fujiwara above, the elementary symmetric bound below), whose
//! `2^k`-th root brackets `rho` within a factor `(2d)^(1/2^k)`. Iterates with
//! unimodular roots keep bounded coefficients, so cyclotomic-like inputs
//! reach tight widths here. When coefficient growth hits the bit limit the
//! bracket is refined by bisection on the exact Schur–Cohn test
//! "every root of `F(r z)` lies in the open unit disk", i.e. `rho < r`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{IntPoly, PolyError};

const GRAEFFE_MAX_ITERATIONS: u32 = 48;
const GRAEFFE_BIT_LIMIT: u64 = 8192;
/// Above this degree the float-padded Graeffe bracket is returned without
/// exact endpoint verification.
const EXACT_VERIFY_MAX_DEGREE: usize = 32;

/// Closed interval `[lo, hi]` with rational endpoints containing a real number.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "EnclosureRepr", try_from = "EnclosureRepr")]
pub struct RealEnclosure {
    lo: BigRational,
    hi: BigRational,
}

#[derive(Serialize, Deserialize)]
struct EnclosureRepr {
    lo: String,
    hi: String,
}

impl From<RealEnclosure> for EnclosureRepr {
    fn from(e: RealEnclosure) -> Self {
        EnclosureRepr {
            lo: e.lo.to_string(),
            hi: e.hi.to_string(),
        }
    }
}

impl TryFrom<EnclosureRepr> for RealEnclosure {
    type Error = String;
    fn try_from(r: EnclosureRepr) -> Result<Self, String> {
        let lo: BigRational = r.lo.parse().map_err(|_| format!("bad rational {}", r.lo))?;
        let hi: BigRational = r.hi.parse().map_err(|_| format!("bad rational {}", r.hi))?;
        RealEnclosure::new(lo, hi).ok_or_else(|| "enclosure with lo > hi".to_string())
    }
}

impl RealEnclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Option<Self> {
        (lo <= hi).then_some(RealEnclosure { lo, hi })
    }

    pub fn exact(v: BigRational) -> Self {
        RealEnclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        BigRational::from_float(x).is_some_and(|r| self.contains(&r))
    }

    pub fn overlaps(&self, other: &RealEnclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Enclosure of the square of a nonnegative enclosed value.
    pub fn square(&self) -> RealEnclosure {
        debug_assert!(!self.lo.is_negative());
        RealEnclosure {
            lo: &self.lo * &self.lo,
            hi: &self.hi * &self.hi,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &RealEnclosure) -> RealEnclosure {
        RealEnclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Orders by midpoint, ties by width.
    pub fn cmp_mid(&self, other: &RealEnclosure) -> std::cmp::Ordering {
        (&self.lo + &self.hi)
            .cmp(&(&other.lo + &other.hi))
            .then_with(|| self.width().cmp(&other.width()))
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.width().to_f64().unwrap_or(f64::NAN);
        if w == 0.0 {
            write!(f, "{}", self.midpoint())
        } else {
            write!(f, "{:.12} ± {:.1e}", self.midpoint(), w / 2.0)
        }
    }
}

impl fmt::Debug for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn log2_abs(c: &BigInt) -> f64 {
    let bits = c.bits();
    if bits <= 64 {
        return c.abs().to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (c.abs() >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// `(-1)^d h(t) h(-t)` with `t^2` replaced by `t`: roots are squared.
fn graeffe(h: &IntPoly) -> IntPoly {
    let prod = h * &h.negate_variable();
    let sign = if h.degree().unwrap() % 2 == 1 { -1 } else { 1 };
    IntPoly::new(
        prod.coeffs()
            .iter()
            .step_by(2)
            .map(|c| c * sign)
            .collect(),
    )
    .primitive_part()
}

/// Bracket for `rho` from the `k`-th Graeffe iterate `h` (nonzero constant term).
fn graeffe_bracket(h: &IntPoly, k: u32) -> (BigRational, BigRational) {
    let c = h.coeffs();
    let d = c.len() - 1;
    let lead = log2_abs(&c[d]);
    let mut beta = f64::NEG_INFINITY;
    for j in 1..=d {
        if !c[d - j].is_zero() {
            beta = beta.max((log2_abs(&c[d - j]) - lead) / j as f64);
        }
    }
    let geometric_mean = (log2_abs(&c[0]) - lead) / d as f64;
    let upper = 1.0 + beta;
    let lower = (beta - (d as f64).log2()).max(geometric_mean);
    let scale = (-(k as f64)).exp2();
    // Float error in the logs is far below 1e-9 at the bit limit; padding
    // absorbs it before the 2^k-th root shrinks the bracket.
    let pad = (1e-9 + 1e-12 * (beta.abs() + 1.0)) * scale;
    let lo = ((lower * scale - pad).exp2() * (1.0 - 1e-15)).max(0.0);
    let hi = (upper * scale + pad).exp2() * (1.0 + 1e-15);
    (
        BigRational::from_float(lo).unwrap(),
        BigRational::from_float(hi).unwrap(),
    )
}

/// Exact Schur–Cohn test: true iff every complex root `z` of `f` has `|z| < r`.
pub fn schur_stable(f: &IntPoly, r: &BigRational) -> bool {
    if !r.is_positive() {
        return false;
    }
    let d = f.degree().expect("nonzero polynomial");
    let (u, v) = (r.numer(), r.denom());
    let mut upow = BigInt::one();
    let mut vpow: Vec<BigInt> = Vec::with_capacity(d + 1);
    let mut acc = BigInt::one();
    for _ in 0..=d {
        vpow.push(acc.clone());
        acc *= v;
    }
    let mut p: Vec<BigInt> = Vec::with_capacity(d + 1);
    for (j, a) in f.coeffs().iter().enumerate() {
        p.push(a * &upow * &vpow[d - j]);
        upow *= u;
    }
    loop {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        let n = p.len() - 1;
        if n == 0 {
            return true;
        }
        let (a0, an) = (p[0].clone(), p[n].clone());
        if a0.abs() >= an.abs() {
            return false;
        }
        let mut q: Vec<BigInt> = (0..n)
            .map(|j| &an * &p[j + 1] - &a0 * &p[n - 1 - j])
            .collect();
        let g = q.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in q.iter_mut() {
                *c /= &g;
            }
        }
        p = q;
    }
}

/// Strict upper bound `1 + max |a_i / a_d|` on the root moduli.
fn cauchy_bound(f: &IntPoly) -> BigRational {
    let c = f.coeffs();
    let lead = BigRational::from_integer(c[c.len() - 1].abs());
    let m = c[..c.len() - 1]
        .iter()
        .map(|a| BigRational::from_integer(a.abs()) / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// Enclosure of `rho(f)` of width at most `tol`. `rho(t^k) = 0`.
pub fn spectral_radius(f: &IntPoly, tol: &BigRational) -> Result<RealEnclosure, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(PolyError::ConstantPolynomial);
    }
    if !tol.is_positive() {
        return Err(PolyError::NonPositiveTolerance);
    }
    let g = f.shift_down(f.t_adic_valuation()).primitive_part();
    match g.degree().unwrap() {
        0 => return Ok(RealEnclosure::exact(BigRational::zero())),
        1 => {
            let root = BigRational::new(g.coeff(0).abs(), g.coeff(1).abs());
            return Ok(RealEnclosure::exact(root));
        }
        _ => {}
    }

    let mut h = g.clone();
    let (mut lo, mut hi) = graeffe_bracket(&h, 0);
    let exact_verify = g.degree().unwrap() <= EXACT_VERIFY_MAX_DEGREE;
    for k in 1..=GRAEFFE_MAX_ITERATIONS {
        if &hi - &lo <= *tol || h.max_coeff_bits() > GRAEFFE_BIT_LIMIT {
            break;
        }
        h = graeffe(&h);
        let (l, u) = graeffe_bracket(&h, k);
        lo = lo.max(l);
        hi = hi.min(u);
    }

    if !exact_verify && &hi - &lo <= *tol {
        return Ok(RealEnclosure { lo, hi });
    }
    if schur_stable(&g, &lo) {
        log::warn!("graeffe lower bracket for {g} failed exact check; restarting from 0");
        lo = BigRational::zero();
    }
    if !schur_stable(&g, &hi) {
        log::warn!("graeffe upper bracket for {g} failed exact check; using Cauchy bound");
        hi = cauchy_bound(&g);
    }
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if schur_stable(&g, &mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RealEnclosure { lo, hi })
}

/// Enclosure of `rho(f)^2` of width at most `tol`.
pub fn spectral_radius_squared(f: &IntPoly, tol: &BigRational) -> Result<RealEnclosure, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(PolyError::ConstantPolynomial);
    }
    let bound = cauchy_bound(f);
    let inner = tol / (BigRational::from_integer(2.into()) * bound + BigRational::one());
    Ok(spectral_radius(f, &inner)?.square())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    fn tol(exp: i32) -> BigRational {
        BigRational::new(1.into(), BigInt::from(10).pow(exp as u32))
    }

    #[test]
    fn linear_is_exact() {
        for m in 1..6 {
            let e = spectral_radius(&IntPoly::linear_root(m), &tol(6)).unwrap();
            assert_eq!(e, RealEnclosure::from_integer(m));
        }
    }

    #[test]
    fn nilpotent_is_zero() {
        let e = spectral_radius(&p("t^3"), &tol(6)).unwrap();
        assert_eq!(e, RealEnclosure::from_integer(0));
    }

    #[test]
    fn unit_circle_quadratic() {
        let e = spectral_radius(&p("t^2 + 1"), &tol(9)).unwrap();
        assert!(e.contains(&BigRational::one()));
        assert!(e.width() <= tol(9));
    }

    #[test]
    fn golden_ratio_squared() {
        let e = spectral_radius(&p("t^2 - 3t + 1"), &tol(12)).unwrap();
        let v = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(e.width() <= tol(12));
        assert!((e.midpoint() - v).abs() < 1e-11);
    }

    #[test]
    fn errors() {
        assert_eq!(
            spectral_radius(&IntPoly::zero(), &tol(3)),
            Err(PolyError::ZeroPolynomial)
        );
        assert_eq!(
            spectral_radius(&p("5"), &tol(3)),
            Err(PolyError::ConstantPolynomial)
        );
        assert_eq!(
            spectral_radius(&p("t - 1"), &BigRational::zero()),
            Err(PolyError::NonPositiveTolerance)
        );
    }

    #[test]
    fn schur_cohn_simple_cases() {
        let half = BigRational::new(1.into(), 2.into());
        assert!(schur_stable(&p("2t - 1"), &BigRational::one()));
        assert!(!schur_stable(&p("2t - 1"), &half));
        assert!(!schur_stable(&p("t^2 + 1"), &BigRational::one()));
        assert!(schur_stable(&p("t^2 + 1"), &BigRational::new(1001.into(), 1000.into())));
    }

    #[test]
    fn squared_width() {
        let e = spectral_radius_squared(&p("t^2 - 3t + 3"), &tol(9)).unwrap();
        assert!(e.contains(&BigRational::from_integer(3.into())));
        assert!(e.width() <= tol(9));
    }
}
