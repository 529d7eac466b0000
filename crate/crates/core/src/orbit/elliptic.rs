//! Short Weierstrass curves `y^2 = x^3 + a x + b` over `Q` with exact
//! affine arithmetic, and the maps `P -> [m]P + Q`.
//!
//! Coordinates reach millions of bits within ten doublings, so this module
//! uses malachite rationals (subquadratic gcd) rather than `num-rational`.

use malachite_base::num::arithmetic::traits::Square;
use malachite_base::num::basic::traits::Zero;
use malachite_base::num::conversion::traits::SciMantissaAndExponent;
use malachite_base::num::logic::traits::SignificantBits;
use malachite_nz::natural::Natural;
use malachite_q::Rational;
use serde::{Deserialize, Serialize};

use super::estimate::finish;
use super::{run_orbit, OrbitError, OrbitEstimate};

/// Default cap on the bit size of the numerator and denominator of `x`.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 22;

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|_| format!("bad rational {s:?}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CurveRepr", try_from = "CurveRepr")]
pub struct EllipticCurveQ {
    a: Rational,
    b: Rational,
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    a: String,
    b: String,
}

impl From<EllipticCurveQ> for CurveRepr {
    fn from(e: EllipticCurveQ) -> Self {
        CurveRepr {
            a: e.a.to_string(),
            b: e.b.to_string(),
        }
    }
}

impl TryFrom<CurveRepr> for EllipticCurveQ {
    type Error = String;
    fn try_from(r: CurveRepr) -> Result<Self, String> {
        EllipticCurveQ::new(parse_rational(&r.a)?, parse_rational(&r.b)?).map_err(|e| e.to_string())
    }
}

impl std::fmt::Display for EllipticCurveQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

impl EllipticCurveQ {
    pub fn new(a: Rational, b: Rational) -> Result<Self, OrbitError> {
        let e = EllipticCurveQ { a, b };
        if e.discriminant() == Rational::ZERO {
            return Err(OrbitError::SingularCurve);
        }
        Ok(e)
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self, OrbitError> {
        Self::new(Rational::from(a), Rational::from(b))
    }

    /// Parses decimal rationals such as `"-2"` or `"3/4"`.
    pub fn parse(a: &str, b: &str) -> Result<Self, OrbitError> {
        let p = |s: &str| parse_rational(s).map_err(OrbitError::InvalidPoint);
        Self::new(p(a)?, p(b)?)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `-16 (4a^3 + 27b^2)`.
    pub fn discriminant(&self) -> Rational {
        let inner = Rational::from(4) * (&self.a).square() * &self.a + Rational::from(27) * (&self.b).square();
        Rational::from(-16) * inner
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => y.square() == x.square() * x + &self.a * x + &self.b,
        }
    }

    fn check(&self, p: &ECPoint) -> Result<(), OrbitError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(OrbitError::PointNotOnCurve)
        }
    }

    fn neg(&self, p: &ECPoint) -> ECPoint {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => ECPoint::Affine {
                x: x.clone(),
                y: -y,
            },
        }
    }

    fn add(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (ECPoint::Infinity, _) => return q.clone(),
            (_, ECPoint::Infinity) => return p.clone(),
            (ECPoint::Affine { x: x1, y: y1 }, ECPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if *y1 == -y2 {
                return ECPoint::Infinity;
            }
            (Rational::from(3) * x1.square() + &self.a) / (Rational::from(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = (&lambda).square() - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        ECPoint::Affine { x: x3, y: y3 }
    }

    fn mul(&self, m: i64, p: &ECPoint) -> ECPoint {
        let mut base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PointRepr", try_from = "PointRepr")]
pub enum ECPoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PointRepr {
    Infinity,
    Affine { x: String, y: String },
}

impl From<ECPoint> for PointRepr {
    fn from(p: ECPoint) -> Self {
        match p {
            ECPoint::Infinity => PointRepr::Infinity,
            ECPoint::Affine { x, y } => PointRepr::Affine {
                x: x.to_string(),
                y: y.to_string(),
            },
        }
    }
}

impl TryFrom<PointRepr> for ECPoint {
    type Error = String;
    fn try_from(r: PointRepr) -> Result<Self, String> {
        Ok(match r {
            PointRepr::Infinity => ECPoint::Infinity,
            PointRepr::Affine { x, y } => ECPoint::Affine {
                x: parse_rational(&x)?,
                y: parse_rational(&y)?,
            },
        })
    }
}

impl std::fmt::Display for ECPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ECPoint::Infinity => f.write_str("O"),
            ECPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl ECPoint {
    pub fn affine_i64(x: i64, y: i64) -> Self {
        ECPoint::Affine {
            x: Rational::from(x),
            y: Rational::from(y),
        }
    }

    pub fn parse(x: &str, y: &str) -> Result<Self, OrbitError> {
        let p = |s: &str| parse_rational(s).map_err(OrbitError::InvalidPoint);
        Ok(ECPoint::Affine { x: p(x)?, y: p(y)? })
    }

    /// Largest bit length among the numerator and denominator of `x`.
    pub fn x_bits(&self) -> u64 {
        match self {
            ECPoint::Infinity => 0,
            ECPoint::Affine { x, .. } => x
                .numerator_ref()
                .significant_bits()
                .max(x.denominator_ref().significant_bits()),
        }
    }
}

fn ln_natural(n: &Natural) -> f64 {
    let (m, e): (f64, u64) = n.sci_mantissa_and_exponent();
    m.ln() + e as f64 * std::f64::consts::LN_2
}

pub fn ec_add(e: &EllipticCurveQ, p: &ECPoint, q: &ECPoint) -> Result<ECPoint, OrbitError> {
    e.check(p)?;
    e.check(q)?;
    Ok(e.add(p, q))
}

pub fn ec_mul(e: &EllipticCurveQ, m: i64, p: &ECPoint) -> Result<ECPoint, OrbitError> {
    e.check(p)?;
    Ok(e.mul(m, p))
}

/// `ln max(|num x|, den x)`; zero at infinity.
pub fn ec_naive_height(p: &ECPoint) -> f64 {
    match p {
        ECPoint::Infinity => 0.0,
        ECPoint::Affine { x, .. } => {
            let (n, d) = (x.numerator_ref(), x.denominator_ref());
            if *n == Natural::ZERO {
                return 0.0;
            }
            ln_natural(if n > d { n } else { d })
        }
    }
}

fn ln_height(p: &ECPoint) -> Option<f64> {
    let h = ec_naive_height(p);
    (h > 0.0).then(|| h.ln())
}

/// `kP = O` for some `1 <= k <= 12`. Complete on `E(Q)` by Mazur's theorem.
pub fn ec_torsion_test(e: &EllipticCurveQ, p: &ECPoint) -> Result<bool, OrbitError> {
    e.check(p)?;
    let mut q = p.clone();
    for _ in 1..=12 {
        if q == ECPoint::Infinity {
            return Ok(true);
        }
        q = e.add(&q, p);
    }
    Ok(false)
}

/// `P -> [m]P + Q` on `E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcSystem {
    curve: EllipticCurveQ,
    m: i64,
    translation: Option<ECPoint>,
}

impl EcSystem {
    pub fn new(curve: EllipticCurveQ, m: i64, translation: Option<ECPoint>) -> Result<Self, OrbitError> {
        if m < 2 {
            return Err(OrbitError::BadMultiplier(m));
        }
        if let Some(q) = &translation {
            curve.check(q)?;
        }
        Ok(EcSystem { curve, m, translation })
    }

    pub fn curve(&self) -> &EllipticCurveQ {
        &self.curve
    }

    pub fn multiplier(&self) -> i64 {
        self.m
    }

    pub fn translation(&self) -> Option<&ECPoint> {
        self.translation.as_ref()
    }

    pub fn step(&self, p: &ECPoint) -> ECPoint {
        let mp = self.curve.mul(self.m, p);
        match &self.translation {
            Some(q) => self.curve.add(&mp, q),
            None => mp,
        }
    }

    fn translation_is_torsion(&self) -> bool {
        self.translation
            .as_ref()
            .is_none_or(|q| ec_torsion_test(&self.curve, q).unwrap_or(false))
    }
}

/// Iterates `P -> [m]P + Q` for `n_iter >= 4` steps. A torsion starting point
/// under a torsion (or absent) translation is reported preperiodic directly.
pub fn ec_alpha_estimate(
    sys: &EcSystem,
    p: &ECPoint,
    n_iter: usize,
    bit_budget: u64,
) -> Result<OrbitEstimate, OrbitError> {
    if n_iter < 4 {
        return Err(OrbitError::TooFewIterations { min: 4, got: n_iter });
    }
    sys.curve.check(p)?;
    let shortcut = sys.translation_is_torsion() && ec_torsion_test(&sys.curve, p)?;
    let run = run_orbit(
        p.clone(),
        n_iter,
        |x| {
            let y = sys.step(x);
            if y.x_bits() > bit_budget {
                return Err(OrbitError::BitBudgetExceeded {
                    budget: bit_budget,
                    completed: 0,
                    ln_heights: Vec::new(),
                });
            }
            Ok(y)
        },
        ln_height,
    )?;
    Ok(finish(run.ln_heights, shortcut || run.cycle.is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::Verdict;

    fn e1() -> EllipticCurveQ {
        EllipticCurveQ::from_i64(0, 1).unwrap()
    }

    fn e2() -> EllipticCurveQ {
        EllipticCurveQ::from_i64(0, -2).unwrap()
    }

    #[test]
    fn singular_curve_rejected() {
        assert_eq!(EllipticCurveQ::from_i64(0, 0), Err(OrbitError::SingularCurve));
        assert_eq!(EllipticCurveQ::from_i64(-3, 2), Err(OrbitError::SingularCurve));
    }

    #[test]
    fn group_law_examples() {
        let e = e1();
        let p = ECPoint::affine_i64(2, 3);
        assert_eq!(ec_add(&e, &p, &ECPoint::Infinity).unwrap(), p);
        assert_eq!(ec_add(&e, &p, &p).unwrap(), ECPoint::affine_i64(0, 1));
        assert_eq!(ec_mul(&e, 0, &p).unwrap(), ECPoint::Infinity);
        assert_eq!(ec_mul(&e, 6, &p).unwrap(), ECPoint::Infinity);
        assert_eq!(ec_mul(&e, 3, &p).unwrap(), ECPoint::affine_i64(-1, 0));
        assert_eq!(ec_mul(&e, -1, &p).unwrap(), ECPoint::affine_i64(2, -3));
        assert_eq!(
            ec_add(&e, &p, &ECPoint::affine_i64(1, 1)),
            Err(OrbitError::PointNotOnCurve)
        );
    }

    #[test]
    fn doubling_on_x3_minus_2() {
        // Tangent at (3, 5): lambda = 27/10, x = 729/100 - 6 = 129/100.
        let d = ec_mul(&e2(), 2, &ECPoint::affine_i64(3, 5)).unwrap();
        assert_eq!(d, ECPoint::parse("129/100", "-383/1000").unwrap());
        assert!(e2().contains(&d));
    }

    #[test]
    fn heights() {
        assert!((ec_naive_height(&ECPoint::affine_i64(2, 3)) - 2f64.ln()).abs() < 1e-15);
        let p = ECPoint::Affine {
            x: "3/5".parse().unwrap(),
            y: Rational::from(0),
        };
        assert!((ec_naive_height(&p) - 5f64.ln()).abs() < 1e-15);
        assert_eq!(ec_naive_height(&ECPoint::Infinity), 0.0);
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(ec_torsion_test(&e1(), &ECPoint::Infinity), Ok(true));
        assert_eq!(ec_torsion_test(&e1(), &ECPoint::affine_i64(2, 3)), Ok(true));
        assert_eq!(ec_torsion_test(&e2(), &ECPoint::affine_i64(3, 5)), Ok(false));
    }

    #[test]
    fn short_doubling_orbit_grows_by_four() {
        let sys = EcSystem::new(e2(), 2, None).unwrap();
        let est = ec_alpha_estimate(&sys, &ECPoint::affine_i64(3, 5), 7, DEFAULT_BIT_BUDGET).unwrap();
        assert!((est.alpha_hat - 4.0).abs() < 0.2, "{}", est.alpha_hat);
    }

    #[test]
    fn torsion_and_infinity_are_preperiodic() {
        let sys = EcSystem::new(e1(), 2, None).unwrap();
        let est = ec_alpha_estimate(&sys, &ECPoint::affine_i64(2, 3), 8, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!((est.alpha_hat, est.verdict), (1.0, Verdict::Preperiodic));
        let est = ec_alpha_estimate(&sys, &ECPoint::Infinity, 8, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(est.verdict, Verdict::Preperiodic);
    }

    #[test]
    fn budget_is_reported_with_partial_data() {
        let sys = EcSystem::new(e2(), 2, None).unwrap();
        match ec_alpha_estimate(&sys, &ECPoint::affine_i64(3, 5), 10, 1000) {
            Err(OrbitError::BitBudgetExceeded { completed, ln_heights, .. }) => {
                assert_eq!(completed, 4);
                assert_eq!(ln_heights.len(), 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(EcSystem::new(e1(), 1, None), Err(OrbitError::BadMultiplier(1)));
        let sys = EcSystem::new(e1(), 2, None).unwrap();
        assert!(matches!(
            ec_alpha_estimate(&sys, &ECPoint::affine_i64(2, 3), 3, DEFAULT_BIT_BUDGET),
            Err(OrbitError::TooFewIterations { .. })
        ));
    }
}
