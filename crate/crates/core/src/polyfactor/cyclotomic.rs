use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{is_irreducible, IntPoly, PolyError};

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `Phi_n`, built by dividing `t^n - 1` by the cyclotomic polynomials of the proper divisors.
pub fn cyclotomic_polynomial(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut f = &IntPoly::monomial(BigInt::one(), n as usize) - &IntPoly::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        f = f
            .div_exact(&cyclotomic_polynomial(d))
            .expect("cyclotomic divisor");
    }
    f
}

/// `t^n mod f` for monic `f`, by square and multiply in `Z[t]`.
fn t_power_mod(n: u64, f: &IntPoly) -> IntPoly {
    let mut acc = IntPoly::one();
    for i in (0..u64::BITS - n.leading_zeros()).rev() {
        acc = (&acc * &acc).rem_monic(f);
        if (n >> i) & 1 == 1 {
            acc = acc.shift_up_one().rem_monic(f);
        }
    }
    acc
}

impl IntPoly {
    fn shift_up_one(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::default()];
        c.extend(self.coeffs().iter().cloned());
        IntPoly::new(c)
    }
}

/// Decides whether a monic irreducible `f` equals some `Phi_n` by testing
/// `f | t^n - 1` for every `n <= 2 deg(f)^2` with `phi(n) = deg f`
/// (complete because `phi(n) >= sqrt(n / 2)`).
pub fn is_cyclotomic(f: &IntPoly) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(PolyError::NotMonic(f.clone()));
    }
    if !is_irreducible(f) {
        return Err(PolyError::NotIrreducible(f.clone()));
    }
    if *f == IntPoly::t() {
        return Ok(false);
    }
    // All roots are units, so the constant term must be a unit.
    if !f.coeff(0).abs().is_one() {
        return Ok(false);
    }
    let d = f.degree().unwrap() as u64;
    Ok((1..=2 * d * d)
        .filter(|&n| euler_phi(n) == d)
        .any(|n| t_power_mod(n, f).is_one()))
}
