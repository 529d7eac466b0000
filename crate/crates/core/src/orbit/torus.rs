//! Points of `G_m^n` of the form `x_j = zeta_j * prod_i p_i^(q_ji)` with
//! rational exponents and root-of-unity angles, and affine monomial maps
//! `x -> a * x^M` acting on them. Exponents transform linearly, so exact
//! orbits stay cheap for thousands of steps.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::estimate::finish;
use super::{run_orbit, OrbitError, OrbitEstimate};
use crate::linalg::{minpoly_matrix, IntMatrix};
use crate::polyfactor::{factor_over_q, is_cyclotomic, IntPoly};

/// Above this many bits the exact sign test falls back to floating point.
const EXACT_SIGN_MAX_BITS: f64 = (1u64 << 22) as f64;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PointRepr", try_from = "PointRepr")]
pub struct TorusPoint {
    primes: Vec<u64>,
    /// `n x s`, row `j` holds the exponents of coordinate `j`.
    exponents: Vec<Vec<BigRational>>,
    /// In `[0, 1)`.
    angles: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    primes: Vec<u64>,
    exponents: Vec<Vec<String>>,
    angles: Vec<String>,
}

impl From<TorusPoint> for PointRepr {
    fn from(x: TorusPoint) -> Self {
        PointRepr {
            primes: x.primes,
            exponents: x
                .exponents
                .iter()
                .map(|r| r.iter().map(|q| q.to_string()).collect())
                .collect(),
            angles: x.angles.iter().map(|q| q.to_string()).collect(),
        }
    }
}

impl TryFrom<PointRepr> for TorusPoint {
    type Error = OrbitError;
    fn try_from(r: PointRepr) -> Result<Self, OrbitError> {
        let parse = |s: &String| {
            s.parse::<BigRational>()
                .map_err(|_| OrbitError::InvalidPoint(format!("bad rational {s:?}")))
        };
        let exponents = r
            .exponents
            .iter()
            .map(|row| row.iter().map(parse).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let angles = r.angles.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        TorusPoint::new(r.primes, exponents, angles)
    }
}

impl std::fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TorusPoint({self})")
    }
}

impl std::fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let coords: Vec<String> = (0..self.dim())
            .map(|j| {
                let mut parts = Vec::new();
                if !self.angles[j].is_zero() {
                    parts.push(format!("e(2pi i {})", self.angles[j]));
                }
                for (p, q) in self.primes.iter().zip(&self.exponents[j]) {
                    if !q.is_zero() {
                        parts.push(if q.is_one() {
                            p.to_string()
                        } else {
                            format!("{p}^({q})")
                        });
                    }
                }
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            })
            .collect();
        write!(f, "({})", coords.join(", "))
    }
}

impl TorusPoint {
    pub fn new(
        primes: Vec<u64>,
        exponents: Vec<Vec<BigRational>>,
        angles: Vec<BigRational>,
    ) -> Result<Self, OrbitError> {
        let n = angles.len();
        if n == 0 {
            return Err(OrbitError::InvalidPoint("dimension must be positive".into()));
        }
        if exponents.len() != n {
            return Err(OrbitError::InvalidPoint(format!(
                "{} exponent rows for {n} coordinates",
                exponents.len()
            )));
        }
        if let Some(row) = exponents.iter().find(|r| r.len() != primes.len()) {
            return Err(OrbitError::InvalidPoint(format!(
                "exponent row of length {} for {} primes",
                row.len(),
                primes.len()
            )));
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(OrbitError::NotPrime(p));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OrbitError::PrimesNotIncreasing);
        }
        let mut x = TorusPoint {
            primes,
            exponents,
            angles,
        };
        x.canonicalize();
        Ok(x)
    }

    pub fn identity(n: usize) -> Self {
        TorusPoint {
            primes: Vec::new(),
            exponents: vec![Vec::new(); n],
            angles: vec![BigRational::zero(); n],
        }
    }

    /// Point with nonzero rational coordinates `num_j / den_j`.
    pub fn from_rationals(coords: &[(i64, i64)]) -> Result<Self, OrbitError> {
        let mut primes = Vec::new();
        let mut rows = Vec::with_capacity(coords.len());
        let mut angles = Vec::with_capacity(coords.len());
        for &(num, den) in coords {
            if num == 0 || den == 0 {
                return Err(OrbitError::InvalidPoint("coordinate must be a nonzero rational".into()));
            }
            let mut row = Vec::new();
            for (v, sign) in [(num, 1), (den, -1)] {
                for (p, e) in factor_u64(v.unsigned_abs()) {
                    row.push((p, e as i64 * sign));
                }
            }
            primes.extend(row.iter().map(|(p, _)| *p));
            rows.push(row);
            angles.push(if (num < 0) != (den < 0) {
                BigRational::new(1.into(), 2.into())
            } else {
                BigRational::zero()
            });
        }
        primes.sort_unstable();
        primes.dedup();
        let exponents = rows
            .into_iter()
            .map(|row| {
                primes
                    .iter()
                    .map(|p| rat(row.iter().filter(|(q, _)| q == p).map(|(_, e)| e).sum()))
                    .collect()
            })
            .collect();
        TorusPoint::new(primes, exponents, angles)
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self, OrbitError> {
        let c: Vec<(i64, i64)> = coords.iter().map(|&v| (v, 1)).collect();
        Self::from_rationals(&c)
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn exponents(&self) -> &[Vec<BigRational>] {
        &self.exponents
    }

    pub fn angles(&self) -> &[BigRational] {
        &self.angles
    }

    pub fn is_torsion(&self) -> bool {
        self.primes.is_empty()
    }

    /// Drops all-zero prime columns and reduces angles mod 1.
    fn canonicalize(&mut self) {
        for a in self.angles.iter_mut() {
            *a = frac(a);
        }
        let keep: Vec<bool> = (0..self.primes.len())
            .map(|i| self.exponents.iter().any(|r| !r[i].is_zero()))
            .collect();
        if keep.iter().all(|&k| k) {
            return;
        }
        fn filter<T>(v: &mut Vec<T>, keep: &[bool]) {
            let mut it = keep.iter();
            v.retain(|_| *it.next().unwrap());
        }
        filter(&mut self.primes, &keep);
        for r in self.exponents.iter_mut() {
            filter(r, &keep);
        }
    }

    /// Exponent columns re-indexed over `primes` (a superset of `self.primes`).
    fn aligned(&self, primes: &[u64]) -> Vec<Vec<BigRational>> {
        let idx: Vec<Option<usize>> = primes
            .iter()
            .map(|p| self.primes.iter().position(|q| q == p))
            .collect();
        self.exponents
            .iter()
            .map(|r| {
                idx.iter()
                    .map(|i| i.map_or_else(BigRational::zero, |i| r[i].clone()))
                    .collect()
            })
            .collect()
    }

    fn merged_primes(&self, other: &TorusPoint) -> Vec<u64> {
        let mut ps: Vec<u64> = self.primes.iter().chain(&other.primes).copied().collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Coordinate-wise product.
    pub fn mul(&self, other: &TorusPoint) -> Result<TorusPoint, OrbitError> {
        if self.dim() != other.dim() {
            return Err(OrbitError::DimensionMismatch {
                map: self.dim(),
                point: other.dim(),
            });
        }
        let primes = self.merged_primes(other);
        let (a, b) = (self.aligned(&primes), other.aligned(&primes));
        let exponents = a
            .iter()
            .zip(&b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
            .collect();
        let angles = self.angles.iter().zip(&other.angles).map(|(x, y)| x + y).collect();
        let mut x = TorusPoint {
            primes,
            exponents,
            angles,
        };
        x.canonicalize();
        Ok(x)
    }

    /// Coordinate-wise `x^q`. For non-integer `q` this picks the root whose
    /// angle is `q` times the angle of `x`.
    pub fn pow_rational(&self, q: &BigRational) -> TorusPoint {
        let mut x = TorusPoint {
            primes: self.primes.clone(),
            exponents: self
                .exponents
                .iter()
                .map(|r| r.iter().map(|e| e * q).collect())
                .collect(),
            angles: self.angles.iter().map(|a| a * q).collect(),
        };
        x.canonicalize();
        x
    }

    pub fn pow(&self, k: i64) -> TorusPoint {
        self.pow_rational(&rat(k))
    }

    pub fn inverse(&self) -> TorusPoint {
        self.pow(-1)
    }
}

fn factor_u64(mut v: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        let mut e = 0;
        while v.is_multiple_of(d) {
            v /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

/// `x -> a * x^M` with `(x^M)_j = prod_k x_k^(M_jk)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMap {
    m: IntMatrix,
    translation: Option<TorusPoint>,
}

impl MonomialMap {
    pub fn new(m: IntMatrix, translation: Option<TorusPoint>) -> Result<Self, OrbitError> {
        if let Some(a) = &translation {
            if a.dim() != m.dim() {
                return Err(OrbitError::DimensionMismatch {
                    map: m.dim(),
                    point: a.dim(),
                });
            }
        }
        Ok(MonomialMap { m, translation })
    }

    pub fn homomorphism(m: IntMatrix) -> Self {
        MonomialMap {
            m,
            translation: None,
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn translation(&self) -> Option<&TorusPoint> {
        self.translation.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn is_isogeny(&self) -> bool {
        !self.m.determinant().is_zero()
    }

    fn check_dim(&self, x: &TorusPoint) -> Result<(), OrbitError> {
        if x.dim() != self.dim() {
            return Err(OrbitError::DimensionMismatch {
                map: self.dim(),
                point: x.dim(),
            });
        }
        Ok(())
    }

    /// First cyclotomic irreducible factor of the minimal polynomial of `M`.
    fn cyclotomic_factor(&self) -> Option<IntPoly> {
        let f = factor_over_q(&minpoly_matrix(&self.m)).expect("minimal polynomial is nonzero");
        let found = f
            .nonzero_root_factors()
            .find(|(g, _)| is_cyclotomic(g).unwrap_or(false))
            .map(|(g, _)| g.clone());
        found
    }
}

fn matrix_times_columns(m: &IntMatrix, rows: &[Vec<BigRational>], s: usize) -> Vec<Vec<BigRational>> {
    let n = m.dim();
    let mut out = vec![vec![BigRational::zero(); s]; n];
    for i in 0..s {
        let col: Vec<BigRational> = rows.iter().map(|r| r[i].clone()).collect();
        for (j, v) in m.apply_rational(&col).into_iter().enumerate() {
            out[j][i] = v;
        }
    }
    out
}

pub fn torus_step(f: &MonomialMap, x: &TorusPoint) -> Result<TorusPoint, OrbitError> {
    f.check_dim(x)?;
    let s = x.primes.len();
    let mut y = TorusPoint {
        primes: x.primes.clone(),
        exponents: matrix_times_columns(&f.m, &x.exponents, s),
        angles: f.m.apply_rational(&x.angles),
    };
    match &f.translation {
        Some(a) => y.mul(a),
        None => {
            y.canonicalize();
            Ok(y)
        }
    }
}

/// `m * 2^e`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    m: f64,
    e: i64,
}

impl Scaled {
    fn from_bigint(x: &BigInt) -> Scaled {
        let b = x.bits() as i64;
        if b <= 900 {
            Scaled {
                m: x.to_f64().unwrap(),
                e: 0,
            }
        } else {
            let shift = b - 64;
            Scaled {
                m: (x >> shift as usize).to_f64().unwrap(),
                e: shift,
            }
        }
    }

    fn from_rational(q: &BigRational) -> Scaled {
        let (n, d) = (Scaled::from_bigint(q.numer()), Scaled::from_bigint(q.denom()));
        Scaled {
            m: n.m / d.m,
            e: n.e - d.e,
        }
    }

    fn scale(self, c: f64) -> Scaled {
        Scaled {
            m: self.m * c,
            e: self.e,
        }
    }

    fn sum(xs: &[Scaled]) -> Scaled {
        let Some(emax) = xs.iter().filter(|x| x.m != 0.0).map(|x| x.e).max() else {
            return Scaled { m: 0.0, e: 0 };
        };
        let m = xs
            .iter()
            .map(|x| x.m * 2f64.powi((x.e - emax).max(-2000) as i32))
            .sum();
        Scaled { m, e: emax }
    }

    fn ln(self) -> Option<f64> {
        (self.m > 0.0).then(|| self.m.ln() + self.e as f64 * std::f64::consts::LN_2)
    }
}

/// Sign of `sum_i q_i ln p_i`, exactly when the integers involved are small
/// enough, else from the scaled floating-point sum.
fn log_combination_sign(primes: &[u64], qs: &[BigRational], approx: &Scaled, magnitude: &Scaled) -> Ordering {
    let ratio = if magnitude.m == 0.0 {
        0.0
    } else {
        approx.m.abs() / magnitude.m.abs() * 2f64.powi((approx.e - magnitude.e).clamp(-2000, 2000) as i32)
    };
    if ratio > 1e-9 {
        return approx.m.partial_cmp(&0.0).unwrap();
    }
    let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * &l).to_integer()).collect();
    let bits: f64 = ints
        .iter()
        .zip(primes)
        .map(|(a, &p)| a.abs().to_f64().unwrap_or(f64::INFINITY) * (p as f64).log2())
        .sum();
    if bits > EXACT_SIGN_MAX_BITS {
        log::warn!("height sign decided in floating point ({bits:.0} bits)");
        return approx.m.partial_cmp(&0.0).unwrap();
    }
    let (mut pos, mut neg) = (BigInt::one(), BigInt::one());
    for (a, &p) in ints.iter().zip(primes) {
        let e = a.abs().to_u32().expect("bounded by bit check");
        let pe = num_traits::pow(BigInt::from(p), e as usize);
        if a.is_positive() {
            pos *= pe;
        } else if a.is_negative() {
            neg *= pe;
        }
    }
    pos.cmp(&neg)
}

/// `h(x) = sum_i c_i ln p_i` with exact rational `c_i`.
#[derive(Debug, Clone)]
pub struct TorusHeight {
    primes: Vec<u64>,
    coeffs: Vec<BigRational>,
    ln: Option<f64>,
}

impl PartialEq for TorusHeight {
    fn eq(&self, other: &Self) -> bool {
        let nz = |h: &TorusHeight| -> Vec<(u64, BigRational)> {
            h.primes
                .iter()
                .zip(&h.coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (*p, c.clone()))
                .collect()
        };
        nz(self) == nz(other)
    }
}

impl TorusHeight {
    pub fn coeffs(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.primes.iter().copied().zip(&self.coeffs)
    }

    /// `ln h`, `None` when `h = 0`.
    pub fn ln(&self) -> Option<f64> {
        self.ln
    }

    /// `h` as a float (may be infinite for very large heights).
    pub fn value(&self) -> f64 {
        self.ln.map_or(0.0, f64::exp)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// `h(x) = sum_j [ sum_i max(0, -q_ji) ln p_i + max(0, sum_i q_ji ln p_i) ]`.
pub fn torus_height(x: &TorusPoint) -> TorusHeight {
    let s = x.primes.len();
    let lnp: Vec<f64> = x.primes.iter().map(|&p| (p as f64).ln()).collect();
    let mut coeffs = vec![BigRational::zero(); s];
    let mut pieces = Vec::new();
    for row in &x.exponents {
        let terms: Vec<Scaled> = row
            .iter()
            .zip(&lnp)
            .map(|(q, l)| Scaled::from_rational(q).scale(*l))
            .collect();
        for (i, q) in row.iter().enumerate() {
            if q.is_negative() {
                coeffs[i] -= q;
                pieces.push(terms[i].scale(-1.0));
            }
        }
        let total = Scaled::sum(&terms);
        let magnitude = Scaled::sum(&terms.iter().map(|t| t.scale(t.m.signum())).collect::<Vec<_>>());
        if log_combination_sign(&x.primes, row, &total, &magnitude) == Ordering::Greater {
            for (c, q) in coeffs.iter_mut().zip(row) {
                *c += q;
            }
            pieces.push(total);
        }
    }
    let ln = Scaled::sum(&pieces).ln();
    TorusHeight {
        primes: x.primes.clone(),
        coeffs,
        ln,
    }
}

pub fn torus_alpha_estimate(
    f: &MonomialMap,
    x: &TorusPoint,
    n_iter: usize,
) -> Result<OrbitEstimate, OrbitError> {
    if n_iter < 16 {
        return Err(OrbitError::TooFewIterations {
            min: 16,
            got: n_iter,
        });
    }
    torus_estimate_unchecked(f, x, n_iter)
}

pub(crate) fn torus_estimate_unchecked(
    f: &MonomialMap,
    x: &TorusPoint,
    n_iter: usize,
) -> Result<OrbitEstimate, OrbitError> {
    f.check_dim(x)?;
    let run = run_orbit(x.clone(), n_iter, |y| torus_step(f, y), |y| torus_height(y).ln())?;
    Ok(finish(run.ln_heights, run.cycle.is_some()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preperiodicity {
    /// `f^(preperiod + period)(x) = f^preperiod(x)`, both minimal.
    Preperiodic { preperiod: usize, period: usize },
    /// Proven infinite: `f` is an isogeny without cyclotomic factors and the
    /// exponents of `x` differ from those of the fixed point.
    Wandering,
}

impl Preperiodicity {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, Preperiodicity::Preperiodic { .. })
    }
}

fn brent<S: Clone + PartialEq>(
    x0: &S,
    budget: usize,
    step: impl Fn(&S) -> Result<S, OrbitError>,
) -> Result<(usize, usize), OrbitError> {
    let (mut power, mut lam) = (1usize, 1usize);
    let mut tortoise = x0.clone();
    let mut hare = step(x0)?;
    let mut steps = 1;
    while tortoise != hare {
        if steps >= budget {
            return Err(OrbitError::BudgetExceeded { budget });
        }
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step(&hare)?;
        lam += 1;
        steps += 1;
    }
    let mut tortoise = x0.clone();
    let mut hare = x0.clone();
    for _ in 0..lam {
        hare = step(&hare)?;
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = step(&tortoise)?;
        hare = step(&hare)?;
        mu += 1;
    }
    Ok((mu, lam))
}

/// Decides whether the orbit of `x` is finite. Isogenies whose minimal
/// polynomial has no cyclotomic factor are decided by comparing exponents
/// with the fixed point; otherwise cycle detection runs for `budget` steps.
pub fn torus_is_preperiodic(
    f: &MonomialMap,
    x: &TorusPoint,
    budget: usize,
) -> Result<Preperiodicity, OrbitError> {
    f.check_dim(x)?;
    if budget == 0 {
        return Err(OrbitError::BudgetExceeded { budget });
    }
    if f.is_isogeny() && f.cyclotomic_factor().is_none() {
        let b = torus_alpha_one_representative(f)?;
        let diff = x.mul(&b.inverse())?;
        if !diff.is_torsion() {
            return Ok(Preperiodicity::Wandering);
        }
    }
    let (preperiod, period) = brent(x, budget, |y| torus_step(f, y))?;
    Ok(Preperiodicity::Preperiodic { preperiod, period })
}

/// The fixed point `b` of `x -> a * x^M`, i.e. `(M - I) q_b = -q_a` on
/// exponents and angles. Then `T_b^-1 o f o T_b = x^M`, and the points with
/// arithmetic degree 1 are exactly `b` times torsion.
pub fn torus_alpha_one_representative(f: &MonomialMap) -> Result<TorusPoint, OrbitError> {
    if let Some(g) = f.cyclotomic_factor() {
        return Err(OrbitError::CyclotomicFactor(g));
    }
    let n = f.dim();
    let a = f.translation.clone().unwrap_or_else(|| TorusPoint::identity(n));
    let m1 = f.m.add_scalar(&BigInt::from(-1));
    let s = a.primes.len();
    let mut exponents = vec![vec![BigRational::zero(); s]; n];
    for i in 0..s {
        let rhs: Vec<BigRational> = a.exponents.iter().map(|r| -&r[i]).collect();
        let sol = m1.solve_rational(&rhs).ok_or(OrbitError::NonInvertible)?;
        for (j, v) in sol.into_iter().enumerate() {
            exponents[j][i] = v;
        }
    }
    let rhs: Vec<BigRational> = a.angles.iter().map(|t| -t).collect();
    let angles = m1.solve_rational(&rhs).ok_or(OrbitError::NonInvertible)?;
    let mut b = TorusPoint {
        primes: a.primes,
        exponents,
        angles,
    };
    b.canonicalize();
    Ok(b)
}
