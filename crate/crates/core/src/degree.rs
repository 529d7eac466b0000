//! Degree calculus for an endomorphism `f` of a semi-abelian variety
//! `0 -> T -> X -> A -> 0`, given by the minimal polynomials (or matrices)
//! of its torus block `f_T` and abelian block `g`.
//!
//! The minimal polynomial of `f` is `F = lcm(P_T, P_A)`: an endomorphism
//! killing `T` and inducing zero on `A` factors through `A -> T`, which is
//! zero. Each irreducible factor `F_i != t` of `F` is classified by which of
//! `P_T`, `P_A` it divides, and contributes `rho(F_i)`, `rho(F_i)^2` or both
//! to the set of arithmetic degrees.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{minpoly_matrix, IntMatrix};
use crate::polyfactor::{
    factor_over_q_seeded, is_cyclotomic, poly_lcm, spectral_radius, spectral_radius_squared,
    IntPoly, PolyError, RealEnclosure, DEFAULT_SEED,
};

/// Enclosures closer than this are treated as the same algebraic number.
pub fn dedup_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("endomorphism has neither a torus nor an abelian block")]
    Empty,
    #[error("abelian matrix has odd dimension {0}; a rational representation has size 2g")]
    OddAbelianDimension(usize),
    #[error("block polynomial {0} must be monic")]
    NotMonic(IntPoly),
    #[error("block polynomial must be nonconstant")]
    ConstantBlock,
    #[error("endomorphism is not surjective (t divides the minimal polynomial)")]
    NotSurjective,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One block of the endomorphism: the integer matrix of the lattice action
/// or directly its minimal polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    Matrix(IntMatrix),
    Poly(IntPoly),
}

impl Block {
    pub fn minimal_polynomial(&self) -> IntPoly {
        match self {
            Block::Matrix(m) => minpoly_matrix(m),
            Block::Poly(p) => p.clone(),
        }
    }
}

/// `f = T_a o g` on a semi-abelian variety, as lattice data. The translation
/// point itself is not stored: degrees do not depend on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiAbelianEndo {
    torus: Option<Block>,
    abelian: Option<Block>,
    has_translation: bool,
    p_t: Option<IntPoly>,
    p_a: Option<IntPoly>,
}

impl SemiAbelianEndo {
    pub fn new(
        torus: Option<Block>,
        abelian: Option<Block>,
        has_translation: bool,
    ) -> Result<Self, DegreeError> {
        if torus.is_none() && abelian.is_none() {
            return Err(DegreeError::Empty);
        }
        if let Some(Block::Matrix(m)) = &abelian {
            if m.dim() % 2 == 1 {
                return Err(DegreeError::OddAbelianDimension(m.dim()));
            }
        }
        for b in [&torus, &abelian].into_iter().flatten() {
            if let Block::Poly(p) = b {
                if p.is_constant() {
                    return Err(DegreeError::ConstantBlock);
                }
                if !p.is_monic() {
                    return Err(DegreeError::NotMonic(p.clone()));
                }
            }
        }
        let p_t = torus.as_ref().map(Block::minimal_polynomial);
        let p_a = abelian.as_ref().map(Block::minimal_polynomial);
        Ok(SemiAbelianEndo {
            torus,
            abelian,
            has_translation,
            p_t,
            p_a,
        })
    }

    /// Convenience constructor from block minimal polynomials.
    pub fn from_polys(
        p_t: Option<IntPoly>,
        p_a: Option<IntPoly>,
        has_translation: bool,
    ) -> Result<Self, DegreeError> {
        Self::new(p_t.map(Block::Poly), p_a.map(Block::Poly), has_translation)
    }

    pub fn torus(&self) -> Option<&Block> {
        self.torus.as_ref()
    }

    pub fn abelian(&self) -> Option<&Block> {
        self.abelian.as_ref()
    }

    pub fn has_translation(&self) -> bool {
        self.has_translation
    }

    pub fn with_translation(&self, has_translation: bool) -> Self {
        SemiAbelianEndo {
            has_translation,
            ..self.clone()
        }
    }

    /// `P_T`, if the torus block is present.
    pub fn torus_poly(&self) -> Option<&IntPoly> {
        self.p_t.as_ref()
    }

    /// `P_A`, if the abelian block is present.
    pub fn abelian_poly(&self) -> Option<&IntPoly> {
        self.p_a.as_ref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Nilpotent,
    Torus,
    Abelian,
    Mixed,
}

impl std::fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ComponentKind::Nilpotent => "nilpotent",
            ComponentKind::Torus => "torus",
            ComponentKind::Abelian => "abelian",
            ComponentKind::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub factor: IntPoly,
    pub multiplicity: u32,
    pub kind: ComponentKind,
    pub rho: RealEnclosure,
    pub cyclotomic: bool,
    /// `A_i`: `rho` for torus, `rho^2` for abelian, both for mixed, empty for nilpotent.
    pub contributions: Vec<RealEnclosure>,
}

/// `delta_f` for surjective `f`. For non-surjective `f` the dynamical degree
/// is undefined; the report then carries the largest arithmetic degree,
/// which is the growth rate on the dominant part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta {
    Dominant(RealEnclosure),
    NotDominant { degree_growth: RealEnclosure },
}

impl Delta {
    pub fn value(&self) -> &RealEnclosure {
        match self {
            Delta::Dominant(e) => e,
            Delta::NotDominant { degree_growth } => degree_growth,
        }
    }

    pub fn is_dominant(&self) -> bool {
        matches!(self, Delta::Dominant(_))
    }
}

/// Shape of the set `{x : alpha_f(x) = 1}` for surjective `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaOneLocus {
    /// Some factor of the minimal polynomial is cyclotomic; no description.
    HypothesisFails { cyclotomic_factors: Vec<IntPoly> },
    /// `alpha_f(x) = 1` iff `x` lies in `b + X_tors` for some point `b`.
    TorsionTranslate,
}

impl AlphaOneLocus {
    pub fn describe(&self, has_translation: bool) -> String {
        match self {
            AlphaOneLocus::HypothesisFails { cyclotomic_factors } => {
                let fs: Vec<String> = cyclotomic_factors.iter().map(|f| f.to_string()).collect();
                format!("no description: cyclotomic factor(s) {}", fs.join(", "))
            }
            AlphaOneLocus::TorsionTranslate if has_translation => {
                "b + torsion for some point b".to_string()
            }
            AlphaOneLocus::TorsionTranslate => "torsion points (b = 0)".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeOptions {
    /// Maximal width of every reported enclosure.
    pub tol: BigRational,
    pub seed: u64,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions {
            tol: dedup_width(),
            seed: DEFAULT_SEED,
        }
    }
}

impl DegreeOptions {
    fn working_tol(&self) -> Result<BigRational, DegreeError> {
        if !self.tol.is_positive() {
            return Err(PolyError::NonPositiveTolerance.into());
        }
        Ok(self.tol.clone().min(dedup_width()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub has_translation: bool,
    pub torus_polynomial: Option<IntPoly>,
    pub abelian_polynomial: Option<IntPoly>,
    pub minimal_polynomial: IntPoly,
    pub components: Vec<ComponentInfo>,
    pub surjective: bool,
    pub delta: Delta,
    pub alpha_set: Vec<RealEnclosure>,
    /// Present only for surjective `f`.
    pub alpha_one_locus: Option<AlphaOneLocus>,
    /// `F(1) != 0`: a translation can be conjugated away.
    pub translation_normalizable: bool,
}

/// `lcm(P_T, P_A)`, monic.
pub fn minimal_polynomial(e: &SemiAbelianEndo) -> IntPoly {
    let mut f = IntPoly::one();
    for p in [e.torus_poly(), e.abelian_poly()].into_iter().flatten() {
        f = poly_lcm(&f, p).expect("nonzero block polynomials");
    }
    f
}

pub fn is_surjective(e: &SemiAbelianEndo) -> bool {
    !minimal_polynomial(e).coeff(0).is_zero()
}

fn classify(factor: &IntPoly, e: &SemiAbelianEndo) -> ComponentKind {
    let in_t = e.torus_poly().is_some_and(|p| factor.divides(p));
    let in_a = e.abelian_poly().is_some_and(|p| factor.divides(p));
    match (in_t, in_a) {
        (true, true) => ComponentKind::Mixed,
        (true, false) => ComponentKind::Torus,
        (false, true) => ComponentKind::Abelian,
        (false, false) => unreachable!("factor of lcm divides neither block"),
    }
}

/// Irreducible components of `F = lcm(P_T, P_A)` with their kinds,
/// spectral radii and degree contributions.
pub fn split(e: &SemiAbelianEndo, opts: &DegreeOptions) -> Result<Vec<ComponentInfo>, DegreeError> {
    let tol = opts.working_tol()?;
    let f = minimal_polynomial(e);
    let fact = factor_over_q_seeded(&f, opts.seed)?;
    let mut out = Vec::with_capacity(fact.factors.len());
    for (g, mult) in fact.factors {
        if g == IntPoly::t() {
            out.push(ComponentInfo {
                factor: g,
                multiplicity: mult,
                kind: ComponentKind::Nilpotent,
                rho: RealEnclosure::from_integer(0),
                cyclotomic: false,
                contributions: Vec::new(),
            });
            continue;
        }
        let kind = classify(&g, e);
        let rho = spectral_radius(&g, &tol)?;
        let cyclotomic = is_cyclotomic(&g)?;
        let contributions = match kind {
            ComponentKind::Torus => vec![rho.clone()],
            ComponentKind::Abelian => vec![spectral_radius_squared(&g, &tol)?],
            ComponentKind::Mixed => vec![rho.clone(), spectral_radius_squared(&g, &tol)?],
            ComponentKind::Nilpotent => unreachable!(),
        };
        out.push(ComponentInfo {
            factor: g,
            multiplicity: mult,
            kind,
            rho,
            cyclotomic,
            contributions,
        });
    }
    Ok(out)
}

/// `max(rho(P_T), rho(P_A)^2)`; the translation flag is ignored.
pub fn dynamical_degree(e: &SemiAbelianEndo, tol: &BigRational) -> Result<RealEnclosure, DegreeError> {
    if !is_surjective(e) {
        return Err(DegreeError::NotSurjective);
    }
    block_growth(e, tol)
}

fn block_growth(e: &SemiAbelianEndo, tol: &BigRational) -> Result<RealEnclosure, DegreeError> {
    let mut best: Option<RealEnclosure> = None;
    if let Some(p) = e.torus_poly() {
        best = Some(spectral_radius(p, tol)?);
    }
    if let Some(p) = e.abelian_poly() {
        let r2 = spectral_radius_squared(p, tol)?;
        best = Some(match best {
            Some(b) => max_enclosure(b, r2),
            None => r2,
        });
    }
    Ok(best.expect("validated endo has a block"))
}

fn max_enclosure(a: RealEnclosure, b: RealEnclosure) -> RealEnclosure {
    if a.hi() < b.lo() {
        b
    } else if b.hi() < a.lo() {
        a
    } else if a.width() <= b.width() {
        // Overlapping: both contain the true maximum up to tolerance.
        a
    } else {
        b
    }
}

/// Sorts ascending and merges enclosures that overlap, keeping the narrower one.
fn dedup(mut values: Vec<RealEnclosure>) -> Vec<RealEnclosure> {
    values.sort_by(|a, b| a.cmp_mid(b));
    let mut out: Vec<RealEnclosure> = Vec::with_capacity(values.len());
    for v in values {
        match out.last_mut() {
            Some(last) if last.overlaps(&v) => {
                log::debug!("merging degree enclosures {last} and {v}");
                if v.width() < last.width() {
                    *last = v;
                }
            }
            _ => out.push(v),
        }
    }
    out
}

/// `A(f) = {1} u A_1 u ... u A_r`, ascending, deduplicated.
pub fn arithmetic_degree_set(
    e: &SemiAbelianEndo,
    opts: &DegreeOptions,
) -> Result<Vec<RealEnclosure>, DegreeError> {
    Ok(alpha_set_of(&split(e, opts)?))
}

fn alpha_set_of(components: &[ComponentInfo]) -> Vec<RealEnclosure> {
    let mut all = vec![RealEnclosure::from_integer(1)];
    for c in components {
        all.extend(c.contributions.iter().cloned());
    }
    dedup(all)
}

fn locus_of(components: &[ComponentInfo]) -> AlphaOneLocus {
    let cyclotomic_factors: Vec<IntPoly> = components
        .iter()
        .filter(|c| c.cyclotomic)
        .map(|c| c.factor.clone())
        .collect();
    if cyclotomic_factors.is_empty() {
        AlphaOneLocus::TorsionTranslate
    } else {
        AlphaOneLocus::HypothesisFails { cyclotomic_factors }
    }
}

pub fn alpha_one_locus(e: &SemiAbelianEndo, opts: &DegreeOptions) -> Result<AlphaOneLocus, DegreeError> {
    if !is_surjective(e) {
        return Err(DegreeError::NotSurjective);
    }
    Ok(locus_of(&split(e, opts)?))
}

/// `F(1) != 0`, so that `f - id` is surjective and `T_a o f` is conjugate by
/// a translation to `f`. The flag on `e` is not consulted.
pub fn conjugation_normalizes(e: &SemiAbelianEndo) -> bool {
    !minimal_polynomial(e).eval(&BigInt::one()).is_zero()
}

pub fn degree_report(e: &SemiAbelianEndo, opts: &DegreeOptions) -> Result<DegreeReport, DegreeError> {
    let tol = opts.working_tol()?;
    let components = split(e, opts)?;
    let alpha_set = alpha_set_of(&components);
    let surjective = is_surjective(e);
    let delta = if surjective {
        Delta::Dominant(block_growth(e, &tol)?)
    } else {
        let top = alpha_set.last().expect("1 is always present").clone();
        Delta::NotDominant { degree_growth: top }
    };
    Ok(DegreeReport {
        has_translation: e.has_translation(),
        torus_polynomial: e.torus_poly().cloned(),
        abelian_polynomial: e.abelian_poly().cloned(),
        minimal_polynomial: minimal_polynomial(e),
        alpha_one_locus: surjective.then(|| locus_of(&components)),
        components,
        surjective,
        delta,
        alpha_set,
        translation_normalizable: conjugation_normalizes(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    fn endo(t: Option<&str>, a: Option<&str>) -> SemiAbelianEndo {
        SemiAbelianEndo::from_polys(t.map(p), a.map(p), false).unwrap()
    }

    fn golden() -> f64 {
        (3.0 + 5f64.sqrt()) / 2.0
    }

    fn mids(v: &[RealEnclosure]) -> Vec<f64> {
        v.iter().map(|e| e.midpoint()).collect()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    #[test]
    fn validation() {
        assert_eq!(SemiAbelianEndo::new(None, None, false), Err(DegreeError::Empty));
        let m = IntMatrix::identity(3);
        assert_eq!(
            SemiAbelianEndo::new(None, Some(Block::Matrix(m)), false),
            Err(DegreeError::OddAbelianDimension(3))
        );
        assert!(matches!(
            SemiAbelianEndo::from_polys(Some(p("2t - 1")), None, false),
            Err(DegreeError::NotMonic(_))
        ));
        assert_eq!(
            SemiAbelianEndo::from_polys(Some(p("1")), None, false),
            Err(DegreeError::ConstantBlock)
        );
    }

    #[test]
    fn minimal_polynomial_examples() {
        assert_eq!(minimal_polynomial(&endo(Some("t^2 - 3t + 1"), None)), p("t^2 - 3t + 1"));
        assert_eq!(minimal_polynomial(&endo(Some("t - 2"), Some("t - 2"))), p("t - 2"));
        assert_eq!(
            minimal_polynomial(&endo(Some("t^2 - 3t + 1"), Some("t - 2"))),
            p("t^3 - 5t^2 + 7t - 2")
        );
    }

    #[test]
    fn matrix_blocks_reduce_to_minimal_polynomials() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let e = SemiAbelianEndo::new(
            Some(Block::Matrix(m)),
            Some(Block::Matrix(IntMatrix::scalar(2, 2.into()))),
            false,
        )
        .unwrap();
        assert_eq!(e.abelian_poly(), Some(&p("t - 2")));
        assert_eq!(minimal_polynomial(&e), p("t^3 - 5t^2 + 7t - 2"));
    }

    #[test]
    fn split_examples() {
        let o = DegreeOptions::default();
        let c = split(&endo(Some("t^2 - 3t + 1"), Some("t - 2")), &o).unwrap();
        let kinds: Vec<_> = c.iter().map(|c| (c.factor.clone(), c.kind)).collect();
        assert_eq!(
            kinds,
            vec![
                (p("t - 2"), ComponentKind::Abelian),
                (p("t^2 - 3t + 1"), ComponentKind::Torus)
            ]
        );
        let c = split(&endo(Some("t - 2"), Some("t - 2")), &o).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind, ComponentKind::Mixed);
        let c = split(&endo(Some("t^2"), None), &o).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].kind, c[0].multiplicity), (ComponentKind::Nilpotent, 2));
    }

    #[test]
    fn surjectivity() {
        assert!(is_surjective(&endo(Some("t - 1"), None)));
        assert!(!is_surjective(&endo(Some("t^2"), None)));
        assert!(!is_surjective(&endo(Some("t^2 - 2t"), None)));
        let tol = dedup_width();
        assert_eq!(
            dynamical_degree(&endo(Some("t^2"), None), &tol),
            Err(DegreeError::NotSurjective)
        );
    }

    #[test]
    fn dynamical_degree_examples() {
        let tol = dedup_width();
        let d = dynamical_degree(&endo(Some("t - 2"), None), &tol).unwrap();
        assert_eq!(d, RealEnclosure::from_integer(2));
        let d = dynamical_degree(&endo(None, Some("t - 2")), &tol).unwrap();
        assert_eq!(d, RealEnclosure::from_integer(4));
        let d = dynamical_degree(&endo(Some("t^2 - 3t + 1"), Some("t - 2")), &tol).unwrap();
        assert!(d.contains_f64(4.0));
    }

    #[test]
    fn degree_set_examples() {
        let o = DegreeOptions::default();
        let a = arithmetic_degree_set(&endo(Some("t^2 - 3t + 1"), None), &o).unwrap();
        assert!(close(&mids(&a), &[1.0, golden()]));
        let a = arithmetic_degree_set(&endo(Some("t - 2"), Some("t - 2")), &o).unwrap();
        assert!(close(&mids(&a), &[1.0, 2.0, 4.0]));
        let a = arithmetic_degree_set(&endo(Some("t^2"), None), &o).unwrap();
        assert!(close(&mids(&a), &[1.0]));
    }

    #[test]
    fn cyclotomic_contribution_merges_into_one() {
        let o = DegreeOptions::default();
        let a = arithmetic_degree_set(&endo(Some("t^2 + t + 1"), Some("t - 1")), &o).unwrap();
        assert_eq!(a, vec![RealEnclosure::from_integer(1)]);
    }

    #[test]
    fn locus_examples() {
        let o = DegreeOptions::default();
        assert_eq!(
            alpha_one_locus(&endo(Some("t - 2"), None), &o),
            Ok(AlphaOneLocus::TorsionTranslate)
        );
        assert_eq!(
            alpha_one_locus(&endo(Some("t - 1"), None), &o),
            Ok(AlphaOneLocus::HypothesisFails {
                cyclotomic_factors: vec![p("t - 1")]
            })
        );
        let e = SemiAbelianEndo::from_polys(None, Some(p("t^2 - 3t + 3")), true).unwrap();
        let l = alpha_one_locus(&e, &o).unwrap();
        assert_eq!(l, AlphaOneLocus::TorsionTranslate);
        assert!(l.describe(true).contains("b + torsion"));
        assert!(l.describe(false).contains("b = 0"));
        assert_eq!(
            alpha_one_locus(&endo(Some("t^2"), None), &o),
            Err(DegreeError::NotSurjective)
        );
    }

    #[test]
    fn conjugation_condition() {
        assert!(conjugation_normalizes(&endo(Some("t - 2"), None)));
        assert!(!conjugation_normalizes(&endo(Some("t - 1"), None)));
        assert!(conjugation_normalizes(&endo(Some("t^2 - 3t + 1"), None)));
        // F(1) = 1 still allows normalization.
        assert!(conjugation_normalizes(&endo(Some("t"), None)));
    }

    #[test]
    fn non_dominant_report_uses_largest_degree() {
        let r = degree_report(&endo(Some("t^2"), Some("t^2 - 3t + 3")), &DegreeOptions::default())
            .unwrap();
        assert!(!r.surjective);
        assert!(!r.delta.is_dominant());
        assert!(r.delta.value().contains_f64(3.0));
        assert!(close(&mids(&r.alpha_set), &[1.0, 3.0]));
        assert_eq!(r.alpha_one_locus, None);
    }

    #[test]
    fn report_translation_flag_is_isolated() {
        let o = DegreeOptions::default();
        let e = endo(Some("t^2 - 3t + 1"), Some("t - 2"));
        let a = degree_report(&e, &o).unwrap();
        let mut b = degree_report(&e.with_translation(true), &o).unwrap();
        assert!(b.has_translation);
        b.has_translation = false;
        assert_eq!(a, b);
    }

    #[test]
    fn tolerance_must_be_positive() {
        let o = DegreeOptions {
            tol: BigRational::zero(),
            seed: 1,
        };
        assert!(split(&endo(Some("t - 2"), None), &o).is_err());
    }
}
