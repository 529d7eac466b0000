//! Scenario files: TOML, validated before anything runs.
//!
//! ```toml
//! version = 1
//! description = "golden-ratio monomial map"
//!
//! [endomorphism]
//! torus = { matrix = [[2, 1], [1, 1]] }
//! abelian = { multiplication_by = 2 }
//! translation = false
//!
//! [systems]
//! curve = { a = 0, b = -2 }
//!
//! [estimator]
//! iterations = 2000
//!
//! [[orbit]]
//! name = "generic"
//! torus_point = [2, 3]
//! tolerance = 1e-3
//! ```

use std::fmt;

use arithdeg::degree::{Block, DegreeError};
use arithdeg::orbit::{ECPoint, EcSystem, EllipticCurveQ, MonomialMap, OrbitError, TorusPoint};
use arithdeg::{IntMatrix, IntPoly, SemiAbelianEndo};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{origin}: {message}")]
pub struct SchemaError {
    /// File name or scenario name.
    pub origin: String,
    pub message: String,
}

impl SchemaError {
    fn at(field: &str, message: impl fmt::Display) -> Self {
        SchemaError {
            origin: String::new(),
            message: format!("field `{field}`: {message}"),
        }
    }

    fn with_origin(mut self, origin: &str) -> Self {
        self.origin = origin.to_string();
        self
    }
}

/// Integer or string, read as an exact rational.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn rational(&self, field: &str) -> Result<BigRational, SchemaError> {
        match self {
            Num::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
            Num::Text(s) => parse_rational(s).map_err(|e| SchemaError::at(field, e)),
        }
    }

    fn text(&self) -> String {
        match self {
            Num::Int(v) => v.to_string(),
            Num::Text(s) => s.trim().to_string(),
        }
    }
}

/// Parses `p`, `p/q`, decimals and scientific notation exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("not a rational number: {s:?}");
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.contains(['+', '-']) || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if digits.trim_start_matches(['+', '-']).is_empty() {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * ten.pow(shift as u32))
    } else {
        BigRational::new(n, ten.pow((-shift) as u32))
    })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    Text(String),
    /// Constant term first.
    Coeffs(Vec<i64>),
}

impl PolySpec {
    fn build(&self, field: &str) -> Result<IntPoly, SchemaError> {
        match self {
            PolySpec::Text(s) => s.parse().map_err(|e| SchemaError::at(field, e)),
            PolySpec::Coeffs(c) => Ok(IntPoly::from_i64s(c)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub matrix: Option<Vec<Vec<i64>>>,
    pub poly: Option<PolySpec>,
    /// `[m]` on an elliptic curve: rational representation `m I_2`.
    pub multiplication_by: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndomorphismSpec {
    pub torus: Option<BlockSpec>,
    pub abelian: Option<BlockSpec>,
    #[serde(default)]
    pub translation: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub a: Num,
    pub b: Num,
}

/// A point of `G_m^n`: rational coordinates, or the full multiplicative form.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum TorusPointSpec {
    Coords(Vec<Num>),
    Full(FullTorusPoint),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullTorusPoint {
    pub primes: Vec<u64>,
    /// One row per coordinate, one entry per prime.
    pub exponents: Vec<Vec<Num>>,
    /// Root-of-unity angles in `[0, 1)`, one per coordinate.
    pub angles: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum EcPointSpec {
    Coords(Vec<Num>),
    /// `"infinity"`.
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemsSpec {
    /// `a` in `x -> a * x^M`.
    pub torus_translation: Option<TorusPointSpec>,
    pub curve: Option<CurveSpec>,
    /// `Q` in `P -> [m]P + Q`.
    pub elliptic_translation: Option<EcPointSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSpec {
    pub iterations: usize,
    pub bit_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub name: String,
    pub torus_point: Option<TorusPointSpec>,
    pub elliptic_point: Option<EcPointSpec>,
    /// Start at `b * x` where `b` is the fixed point of the torus map.
    #[serde(default)]
    pub relative_to_fixed_point: bool,
    pub iterations: Option<usize>,
    /// Absolute tolerance against the predicted degree set.
    pub tolerance: f64,
    /// A specific member of the predicted set the estimate must match.
    pub expect: Option<f64>,
    #[serde(default)]
    pub expect_preperiodic: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeExpectation {
    pub delta: Option<f64>,
    pub dominant: Option<bool>,
    pub alpha_set: Option<Vec<f64>>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    #[serde(default)]
    pub description: String,
    pub endomorphism: EndomorphismSpec,
    pub systems: Option<SystemsSpec>,
    pub estimator: Option<EstimatorSpec>,
    #[serde(default, rename = "orbit")]
    pub orbits: Vec<OrbitSpec>,
    pub expect: Option<DegreeExpectation>,
}

/// What an orbit block iterates.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitSystem {
    Torus(MonomialMap, TorusPoint),
    Elliptic(EcSystem, ECPoint),
    Product((MonomialMap, TorusPoint), (EcSystem, ECPoint)),
}

impl OrbitSystem {
    pub fn kind(&self) -> &'static str {
        match self {
            OrbitSystem::Torus(..) => "torus",
            OrbitSystem::Elliptic(..) => "elliptic",
            OrbitSystem::Product(..) => "product",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitJob {
    pub name: String,
    pub system: OrbitSystem,
    pub iterations: usize,
    pub bit_budget: u64,
    pub tolerance: f64,
    pub expect: Option<f64>,
    pub expect_preperiodic: bool,
}

/// A validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub endo: SemiAbelianEndo,
    pub orbits: Vec<OrbitJob>,
    pub expect: Option<DegreeExpectation>,
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &str) -> Result<ScenarioFile, SchemaError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| SchemaError {
            origin: origin.to_string(),
            message: e.to_string().trim_end().to_string(),
        })?;
        if file.version != SCHEMA_VERSION {
            return Err(SchemaError::at(
                "version",
                format!("unsupported schema version {}, expected {SCHEMA_VERSION}", file.version),
            )
            .with_origin(origin));
        }
        Ok(file)
    }
}

impl Scenario {
    pub fn load(text: &str, name: &str) -> Result<Scenario, SchemaError> {
        let file = ScenarioFile::parse(text, name)?;
        Scenario::from_file(file, name).map_err(|e| e.with_origin(name))
    }

    fn from_file(file: ScenarioFile, name: &str) -> Result<Scenario, SchemaError> {
        let e = &file.endomorphism;
        if e.torus.is_none() && e.abelian.is_none() {
            return Err(SchemaError::at(
                "endomorphism",
                "needs a `torus` or an `abelian` block",
            ));
        }
        let torus = e.torus.as_ref().map(|b| block(b, "endomorphism.torus", false)).transpose()?;
        let abelian = e
            .abelian
            .as_ref()
            .map(|b| block(b, "endomorphism.abelian", true))
            .transpose()?;
        let endo = SemiAbelianEndo::new(torus, abelian, e.translation).map_err(|err| {
            let field = match err {
                DegreeError::OddAbelianDimension(_) => "endomorphism.abelian",
                _ => "endomorphism",
            };
            SchemaError::at(field, err)
        })?;
        let systems = Systems::build(&file, &endo)?;
        let mut orbits = Vec::new();
        for (i, o) in file.orbits.iter().enumerate() {
            let field = format!("orbit[{i}]");
            let est = file.estimator.as_ref().ok_or_else(|| {
                SchemaError::at("estimator", "required when orbit blocks are present")
            })?;
            orbits.push(orbit_job(o, est, &systems, &field)?);
        }
        if let Some(x) = &file.expect {
            if !(x.tolerance > 0.0) {
                return Err(SchemaError::at("expect.tolerance", "must be positive"));
            }
        }
        Ok(Scenario {
            name: name.to_string(),
            description: file.description,
            endo,
            orbits,
            expect: file.expect,
        })
    }
}

fn block(b: &BlockSpec, field: &str, abelian: bool) -> Result<Block, SchemaError> {
    let given = [b.matrix.is_some(), b.poly.is_some(), b.multiplication_by.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(SchemaError::at(
            field,
            "give exactly one of `matrix`, `poly`, `multiplication_by`",
        ));
    }
    if let Some(rows) = &b.matrix {
        let rows: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        return IntMatrix::from_i64_rows(&rows)
            .map(Block::Matrix)
            .map_err(|e| SchemaError::at(&format!("{field}.matrix"), e));
    }
    if let Some(p) = &b.poly {
        return Ok(Block::Poly(p.build(&format!("{field}.poly"))?));
    }
    let m = b.multiplication_by.unwrap();
    if !abelian {
        return Err(SchemaError::at(
            &format!("{field}.multiplication_by"),
            "only valid for the abelian block",
        ));
    }
    Ok(Block::Poly(IntPoly::from_i64s(&[-m, 1])))
}

/// The concrete maps orbit blocks run on.
struct Systems {
    torus: Option<MonomialMap>,
    elliptic: Option<EcSystem>,
}

impl Systems {
    fn build(file: &ScenarioFile, endo: &SemiAbelianEndo) -> Result<Systems, SchemaError> {
        let sys = file.systems.as_ref();
        let flag = file.endomorphism.translation;
        let torus_translation = sys.and_then(|s| s.torus_translation.as_ref());
        let ec_translation = sys.and_then(|s| s.elliptic_translation.as_ref());
        if (torus_translation.is_some() || ec_translation.is_some()) && !flag {
            return Err(SchemaError::at(
                "systems",
                "translation points require `endomorphism.translation = true`",
            ));
        }
        let torus = match endo.torus() {
            Some(Block::Matrix(m)) => {
                let a = torus_translation
                    .map(|p| torus_point(p, "systems.torus_translation"))
                    .transpose()?;
                Some(
                    MonomialMap::new(m.clone(), a)
                        .map_err(|e| SchemaError::at("systems.torus_translation", e))?,
                )
            }
            _ => {
                if torus_translation.is_some() {
                    return Err(SchemaError::at(
                        "systems.torus_translation",
                        "needs `endomorphism.torus` given as a matrix",
                    ));
                }
                None
            }
        };
        let elliptic = match sys.and_then(|s| s.curve.as_ref()) {
            Some(c) => {
                let m = file
                    .endomorphism
                    .abelian
                    .as_ref()
                    .and_then(|b| b.multiplication_by)
                    .ok_or_else(|| {
                        SchemaError::at(
                            "systems.curve",
                            "needs `endomorphism.abelian = { multiplication_by = m }`",
                        )
                    })?;
                let curve = EllipticCurveQ::parse(&c.a.text(), &c.b.text())
                    .map_err(|e| SchemaError::at("systems.curve", e))?;
                let q = ec_translation
                    .map(|p| ec_point(p, "systems.elliptic_translation"))
                    .transpose()?;
                Some(EcSystem::new(curve, m, q).map_err(|e| SchemaError::at("systems", e))?)
            }
            None => {
                if ec_translation.is_some() {
                    return Err(SchemaError::at("systems.elliptic_translation", "needs `systems.curve`"));
                }
                None
            }
        };
        Ok(Systems { torus, elliptic })
    }
}

fn orbit_job(
    o: &OrbitSpec,
    est: &EstimatorSpec,
    systems: &Systems,
    field: &str,
) -> Result<OrbitJob, SchemaError> {
    let torus = match &o.torus_point {
        Some(p) => {
            let f = systems.torus.as_ref().ok_or_else(|| {
                SchemaError::at(
                    &format!("{field}.torus_point"),
                    "needs `endomorphism.torus` given as a matrix",
                )
            })?;
            let mut x = torus_point(p, &format!("{field}.torus_point"))?;
            if o.relative_to_fixed_point {
                let b = arithdeg::orbit::torus_alpha_one_representative(f)
                    .map_err(|e| SchemaError::at(&format!("{field}.relative_to_fixed_point"), e))?;
                x = b
                    .mul(&x)
                    .map_err(|e| SchemaError::at(&format!("{field}.torus_point"), e))?;
            }
            if x.dim() != f.dim() {
                return Err(SchemaError::at(
                    &format!("{field}.torus_point"),
                    OrbitError::DimensionMismatch {
                        map: f.dim(),
                        point: x.dim(),
                    },
                ));
            }
            Some((f.clone(), x))
        }
        None => {
            if o.relative_to_fixed_point {
                return Err(SchemaError::at(
                    &format!("{field}.relative_to_fixed_point"),
                    "needs a torus point",
                ));
            }
            None
        }
    };
    let elliptic = match &o.elliptic_point {
        Some(p) => {
            let sys = systems.elliptic.as_ref().ok_or_else(|| {
                SchemaError::at(&format!("{field}.elliptic_point"), "needs `systems.curve`")
            })?;
            let pt = ec_point(p, &format!("{field}.elliptic_point"))?;
            if !sys.curve().contains(&pt) {
                return Err(SchemaError::at(
                    &format!("{field}.elliptic_point"),
                    OrbitError::PointNotOnCurve,
                ));
            }
            Some((sys.clone(), pt))
        }
        None => None,
    };
    let system = match (torus, elliptic) {
        (Some(t), Some(e)) => OrbitSystem::Product(t, e),
        (Some((f, x)), None) => OrbitSystem::Torus(f, x),
        (None, Some((s, p))) => OrbitSystem::Elliptic(s, p),
        (None, None) => {
            return Err(SchemaError::at(
                field,
                "needs `torus_point`, `elliptic_point` or both",
            ))
        }
    };
    let iterations = o.iterations.unwrap_or(est.iterations);
    let min = if matches!(system, OrbitSystem::Torus(..)) { 16 } else { 4 };
    if iterations < min {
        return Err(SchemaError::at(
            &format!("{field}.iterations"),
            format!("at least {min} iterations required for a {} orbit", system.kind()),
        ));
    }
    if !(o.tolerance > 0.0) {
        return Err(SchemaError::at(&format!("{field}.tolerance"), "must be positive"));
    }
    Ok(OrbitJob {
        name: o.name.clone(),
        system,
        iterations,
        bit_budget: est.bit_budget.unwrap_or(arithdeg::orbit::DEFAULT_BIT_BUDGET),
        tolerance: o.tolerance,
        expect: o.expect,
        expect_preperiodic: o.expect_preperiodic,
    })
}

fn torus_point(p: &TorusPointSpec, field: &str) -> Result<TorusPoint, SchemaError> {
    let point = match p {
        TorusPointSpec::Coords(cs) => {
            let mut pairs = Vec::with_capacity(cs.len());
            for (i, c) in cs.iter().enumerate() {
                let q = c.rational(&format!("{field}[{i}]"))?;
                let fits = |v: &BigInt| i64::try_from(v.clone()).ok();
                match (fits(q.numer()), fits(q.denom())) {
                    (Some(n), Some(d)) => pairs.push((n, d)),
                    _ => {
                        return Err(SchemaError::at(
                            &format!("{field}[{i}]"),
                            "coordinate does not fit in 64 bits; use the full form",
                        ))
                    }
                }
            }
            TorusPoint::from_rationals(&pairs)
        }
        TorusPointSpec::Full(f) => {
            let mut exps = Vec::with_capacity(f.exponents.len());
            for (i, row) in f.exponents.iter().enumerate() {
                let r: Result<Vec<BigRational>, SchemaError> = row
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v.rational(&format!("{field}.exponents[{i}][{j}]")))
                    .collect();
                exps.push(r?);
            }
            let angles: Result<Vec<BigRational>, SchemaError> = f
                .angles
                .iter()
                .enumerate()
                .map(|(i, v)| v.rational(&format!("{field}.angles[{i}]")))
                .collect();
            TorusPoint::new(f.primes.clone(), exps, angles?)
        }
    };
    point.map_err(|e| SchemaError::at(field, e))
}

fn ec_point(p: &EcPointSpec, field: &str) -> Result<ECPoint, SchemaError> {
    match p {
        EcPointSpec::Named(s) if s.eq_ignore_ascii_case("infinity") => Ok(ECPoint::Infinity),
        EcPointSpec::Named(s) => Err(SchemaError::at(
            field,
            format!("expected [x, y] or \"infinity\", got {s:?}"),
        )),
        EcPointSpec::Coords(c) if c.len() == 2 => {
            ECPoint::parse(&c[0].text(), &c[1].text()).map_err(|e| SchemaError::at(field, e))
        }
        EcPointSpec::Coords(c) => Err(SchemaError::at(
            field,
            format!("expected 2 coordinates, got {}", c.len()),
        )),
    }
}

/// Parses `--tol` style input; must be positive.
pub fn parse_tolerance(s: &str) -> Result<BigRational, String> {
    let q = parse_rational(s)?;
    if !q.is_positive() {
        return Err(format!("tolerance must be positive, got {s}"));
    }
    Ok(q)
}

/// `1/10^k` rendered compactly, otherwise `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.numer().is_one() {
        let mut d = q.denom().clone();
        let mut k = 0;
        let ten = BigInt::from(10);
        while (&d % &ten).is_zero() {
            d /= &ten;
            k += 1;
        }
        if d.is_one() && k > 0 {
            return format!("1e-{k}");
        }
    }
    q.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIB: &str = r#"
version = 1
[endomorphism]
torus = { matrix = [[2, 1], [1, 1]] }
[estimator]
iterations = 100
[[orbit]]
name = "generic"
torus_point = [2, "3"]
tolerance = 1e-3
"#;

    #[test]
    fn rationals() {
        let r = |s: &str| parse_rational(s).unwrap();
        assert_eq!(r("3/6"), BigRational::new(1.into(), 2.into()));
        assert_eq!(r("1e-9"), BigRational::new(1.into(), BigInt::from(10).pow(9)));
        assert_eq!(r("-0.25"), BigRational::new((-1).into(), 4.into()));
        assert_eq!(r("2.5e1"), BigRational::from_integer(25.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_tolerance("0").is_err());
        assert_eq!(format_rational(&r("1e-12")), "1e-12");
        assert_eq!(format_rational(&r("3/7")), "3/7");
    }

    #[test]
    fn loads_torus_scenario() {
        let s = Scenario::load(FIB, "fib").unwrap();
        assert_eq!(s.orbits.len(), 1);
        assert_eq!(s.orbits[0].iterations, 100);
        assert!(matches!(s.orbits[0].system, OrbitSystem::Torus(..)));
    }

    #[test]
    fn unknown_fields_are_rejected_with_location() {
        let bad = FIB.replace("tolerance = 1e-3", "tolerance = 1e-3\ncolour = 1");
        let e = Scenario::load(&bad, "fib").unwrap_err();
        assert!(e.message.contains("colour"), "{e}");
        assert!(e.message.contains("line"), "{e}");
    }

    #[test]
    fn empty_endomorphism_is_a_schema_error() {
        let e = Scenario::load("version = 1\n[endomorphism]\n", "x").unwrap_err();
        assert!(e.message.contains("`endomorphism`"), "{e}");
    }

    #[test]
    fn version_is_checked() {
        let e = Scenario::load(&FIB.replace("version = 1", "version = 9"), "x").unwrap_err();
        assert!(e.message.contains("version"));
    }

    #[test]
    fn block_needs_exactly_one_form() {
        let text = "version = 1\n[endomorphism]\ntorus = { matrix = [[2]], poly = \"t-2\" }\n";
        assert!(Scenario::load(text, "x").unwrap_err().message.contains("exactly one"));
        let text = "version = 1\n[endomorphism]\ntorus = { multiplication_by = 2 }\n";
        assert!(Scenario::load(text, "x").is_err());
    }

    #[test]
    fn translation_point_requires_flag() {
        let text = format!("{FIB}\n[systems]\ntorus_translation = [5, 7]\n");
        let e = Scenario::load(&text, "x").unwrap_err();
        assert!(e.message.contains("translation"), "{e}");
        let ok = text.replace("[[2, 1], [1, 1]] }", "[[2, 1], [1, 1]] }\ntranslation = true");
        Scenario::load(&ok, "x").unwrap();
    }

    #[test]
    fn elliptic_and_product_orbits() {
        let text = r#"
version = 1
[endomorphism]
torus = { matrix = [[2, 1], [1, 1]] }
abelian = { multiplication_by = 2 }
[systems]
curve = { a = 0, b = -2 }
[estimator]
iterations = 10
[[orbit]]
name = "ec"
elliptic_point = [3, 5]
tolerance = 0.2
[[orbit]]
name = "inf"
elliptic_point = "infinity"
tolerance = 1e-9
[[orbit]]
name = "both"
torus_point = [-1, 1]
elliptic_point = ["3", "5"]
tolerance = 1e-3
"#;
        let s = Scenario::load(text, "x").unwrap();
        let kinds: Vec<&str> = s.orbits.iter().map(|o| o.system.kind()).collect();
        assert_eq!(kinds, ["elliptic", "elliptic", "product"]);
        let off = text.replace("[3, 5]", "[3, 6]");
        assert!(Scenario::load(&off, "x").unwrap_err().message.contains("not on the curve"));
    }

    #[test]
    fn polynomial_blocks_accept_both_forms() {
        for form in ["\"t^2 - 3t + 1\"", "[1, -3, 1]"] {
            let text = format!("version = 1\n[endomorphism]\ntorus = {{ poly = {form} }}\n");
            let s = Scenario::load(&text, "x").unwrap();
            assert_eq!(s.endo.torus_poly().unwrap().to_string(), "t^2 - 3t + 1");
        }
    }
}
