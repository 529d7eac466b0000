//! Univariate integer polynomial engine: factorization over `Q`,
//! cyclotomic detection and certified spectral radii.

mod cyclotomic;
mod modp;
mod poly;
mod spectral;
mod zassenhaus;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, is_cyclotomic};
pub use poly::{primitive_gcd, IntPoly};
pub use spectral::{schur_stable, spectral_radius, spectral_radius_squared, RealEnclosure};

/// Seed used for the randomized equal-degree splitting when none is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("both polynomials are zero")]
    BothZero,
    #[error("polynomial {0} is not monic")]
    NotMonic(IntPoly),
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(IntPoly),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// `unit * content * prod(factor^multiplicity)`, factors primitive with
/// positive leading coefficient, pairwise non-associate, sorted by degree then
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredPolynomial {
    pub unit: i8,
    #[serde(with = "bigint_string")]
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl FactoredPolynomial {
    /// Exponent `e0` of the factor `t`.
    pub fn t_exponent(&self) -> u32 {
        self.factors
            .iter()
            .find(|(f, _)| *f == IntPoly::t())
            .map_or(0, |(_, e)| *e)
    }

    /// Factors other than `t`.
    pub fn nonzero_root_factors(&self) -> impl Iterator<Item = &(IntPoly, u32)> {
        self.factors.iter().filter(|(f, _)| *f != IntPoly::t())
    }

    pub fn expand(&self) -> IntPoly {
        let scalar = &self.content * BigInt::from(self.unit);
        self.factors
            .iter()
            .fold(IntPoly::constant(scalar), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, e)| f.degree().unwrap() * *e as usize)
            .sum()
    }

    fn sort(&mut self) {
        self.factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    }
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn split_scalar(f: &IntPoly) -> (i8, BigInt, IntPoly) {
    let unit = if f.leading().unwrap().is_negative() { -1 } else { 1 };
    (unit, f.content(), f.primitive_part())
}

/// Squarefree decomposition (Yun). Factors are squarefree and pairwise
/// coprime but not necessarily irreducible.
pub fn squarefree_decomposition(f: &IntPoly) -> Result<FactoredPolynomial, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (unit, content, prim) = split_scalar(f);
    let mut out = FactoredPolynomial {
        unit,
        content,
        factors: yun(&prim),
    };
    out.sort();
    Ok(out)
}

/// Yun's algorithm on a primitive polynomial with positive leading coefficient.
/// All divisors are primitive, so every quotient stays in `Z[t]`.
fn yun(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    if f.is_constant() {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = primitive_gcd(f, &df);
    let mut b = f.div_exact(&a0).expect("gcd divides f");
    let mut c = df.div_exact(&a0).expect("gcd divides f'");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_constant() {
        let a = primitive_gcd(&b, &d);
        b = b.div_exact(&a).expect("a divides b");
        c = d.div_exact(&a).expect("a divides d");
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Complete factorization over `Q` with the default seed.
pub fn factor_over_q(f: &IntPoly) -> Result<FactoredPolynomial, PolyError> {
    factor_over_q_seeded(f, DEFAULT_SEED)
}

pub fn factor_over_q_seeded(f: &IntPoly, seed: u64) -> Result<FactoredPolynomial, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (unit, content, prim) = split_scalar(f);
    let e0 = prim.t_adic_valuation();
    let rest = prim.shift_down(e0);
    let mut factors = Vec::new();
    if e0 > 0 {
        factors.push((IntPoly::t(), e0 as u32));
    }
    for (part, mult) in yun(&rest) {
        for g in zassenhaus::factor_primitive_squarefree(&part, &mut rng) {
            factors.push((g, mult));
        }
    }
    let mut out = FactoredPolynomial {
        unit,
        content,
        factors,
    };
    out.sort();
    Ok(out)
}

/// True when `f` is irreducible over `Q` (nonconstant, one factor of multiplicity one).
pub fn is_irreducible(f: &IntPoly) -> bool {
    if f.is_constant() {
        return false;
    }
    match factor_over_q(f) {
        Ok(fp) => fp.factors.len() == 1 && fp.factors[0].1 == 1,
        Err(_) => false,
    }
}

/// Gcd over `Q`, returned primitive with positive leading coefficient
/// (the primitive integer representative of the monic gcd).
pub fn poly_gcd(f: &IntPoly, g: &IntPoly) -> Result<IntPoly, PolyError> {
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    Ok(primitive_gcd(f, g))
}

/// Lcm over `Q`, same normalization as [`poly_gcd`]. The lcm with zero is zero.
pub fn poly_lcm(f: &IntPoly, g: &IntPoly) -> Result<IntPoly, PolyError> {
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(IntPoly::zero());
    }
    let d = primitive_gcd(f, g);
    let fp = f.primitive_part();
    let q = fp.div_exact(&d).expect("gcd divides f");
    Ok((&q * &g.primitive_part()).primitive_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let f = &p("t - 1").pow(2) * &p("t + 2");
        let sq = squarefree_decomposition(&f).unwrap();
        assert_eq!(sq.factors, vec![(p("t - 1"), 2), (p("t + 2"), 1)]);
        assert_eq!(sq.expand(), f);

        let sq = squarefree_decomposition(&p("t")).unwrap();
        assert_eq!(sq.factors, vec![(p("t"), 1)]);

        let sq = squarefree_decomposition(&p("t^2 + t + 1")).unwrap();
        assert_eq!(sq.factors, vec![(p("t^2 + t + 1"), 1)]);

        assert_eq!(
            squarefree_decomposition(&IntPoly::zero()),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn squarefree_keeps_non_irreducible_parts_together() {
        // (t^2 - 1)^3 (t^2 + 1): the cube part is reducible but squarefree.
        let f = &p("t^2 - 1").pow(3) * &p("t^2 + 1");
        let sq = squarefree_decomposition(&f).unwrap();
        assert_eq!(sq.factors, vec![(p("t^2 - 1"), 3), (p("t^2 + 1"), 1)]);
    }

    #[test]
    fn factor_examples() {
        let fp = factor_over_q(&p("t^4 - 1")).unwrap();
        assert_eq!(
            fp.factors,
            vec![(p("t - 1"), 1), (p("t + 1"), 1), (p("t^2 + 1"), 1)]
        );
        let fp = factor_over_q(&p("t^3 - 5t^2 + 7t - 2")).unwrap();
        assert_eq!(fp.factors, vec![(p("t - 2"), 1), (p("t^2 - 3t + 1"), 1)]);
        let fp = factor_over_q(&p("t^2 + t + 1")).unwrap();
        assert_eq!(fp.factors, vec![(p("t^2 + t + 1"), 1)]);
        assert_eq!(factor_over_q(&IntPoly::zero()), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn factor_tracks_unit_content_and_t_power() {
        let f = p("-6t^5 + 6t^3");
        let fp = factor_over_q(&f).unwrap();
        assert_eq!(fp.unit, -1);
        assert_eq!(fp.content, BigInt::from(6));
        assert_eq!(fp.t_exponent(), 3);
        assert_eq!(fp.expand(), f);
        assert_eq!(fp.degree(), 5);
    }

    #[test]
    fn reversed_coefficient_list_is_negated_t4_minus_1() {
        let fp = factor_over_q(&p("1,0,0,0,-1")).unwrap();
        assert_eq!(fp.unit, -1);
        assert_eq!(fp.factors.len(), 3);
    }

    #[test]
    fn gcd_lcm_examples() {
        assert_eq!(poly_gcd(&p("t^2 - 1"), &p("t - 1")).unwrap(), p("t - 1"));
        assert_eq!(
            poly_lcm(&p("t - 2"), &p("t^2 - 3t + 1")).unwrap(),
            p("t^3 - 5t^2 + 7t - 2")
        );
        let f = p("3t^2 - 3");
        assert_eq!(poly_gcd(&f, &f).unwrap(), p("t^2 - 1"));
        assert_eq!(
            poly_gcd(&IntPoly::zero(), &IntPoly::zero()),
            Err(PolyError::BothZero)
        );
        assert_eq!(poly_lcm(&p("t - 2"), &p("t - 2")).unwrap(), p("t - 2"));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&p("t^2 - 3t + 1")));
        assert!(!is_irreducible(&p("t^2 - 1")));
        assert!(!is_irreducible(&p("5")));
        assert!(!is_irreducible(&p("t").pow(2)));
    }
}
