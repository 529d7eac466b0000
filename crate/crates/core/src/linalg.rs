//! Exact integer matrices: characteristic and minimal polynomials,
//! polynomial evaluation at a matrix, and rational linear solves.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyfactor::{factor_over_q, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Square matrix of arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<String>>", try_from = "Vec<Vec<String>>")]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(LinalgError::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
            data.extend(r);
        }
        Ok(IntMatrix { n, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1);
        IntMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, BigInt::one())
    }

    pub fn scalar(n: usize, c: BigInt) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_scalar(&self, c: &BigInt) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += c;
        }
        m
    }

    /// Integer matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        self.rows()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Matrix-vector product against a rational vector.
    pub fn apply_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.n);
        self.rows()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| {
                        acc + b * BigRational::from_integer(a.clone())
                    })
            })
            .collect()
    }

    /// Block upper triangular matrix `[[a, c], [0, b]]`.
    pub fn block_upper(a: &IntMatrix, c: &[Vec<BigInt>], b: &IntMatrix) -> IntMatrix {
        let n = a.n + b.n;
        let mut m = IntMatrix::zero(n);
        for i in 0..a.n {
            for j in 0..a.n {
                m.set(i, j, a.get(i, j).clone());
            }
            for j in 0..b.n {
                m.set(i, a.n + j, c[i][j].clone());
            }
        }
        for i in 0..b.n {
            for j in 0..b.n {
                m.set(a.n + i, a.n + j, b.get(i, j).clone());
            }
        }
        m
    }

    pub fn block_diagonal(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let zeros = vec![vec![BigInt::zero(); b.n]; a.n];
        Self::block_upper(a, &zeros, b)
    }

    /// Determinant via the constant term of the characteristic polynomial.
    pub fn determinant(&self) -> BigInt {
        let c0 = charpoly(self).coeff(0);
        if self.n.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }

    /// Solves `self * x = b` over the rationals; `None` when singular.
    pub fn solve_rational(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut a: Vec<Vec<BigRational>> = self
            .rows()
            .zip(b)
            .map(|(r, bi)| {
                let mut row: Vec<BigRational> = r
                    .iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect();
                row.push(bi.clone());
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in col..=n {
                        let delta = &factor * &a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
        Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
    }
}

impl From<IntMatrix> for Vec<Vec<String>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl TryFrom<Vec<Vec<String>>> for IntMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<String>>) -> Result<Self, String> {
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| s.parse::<BigInt>().map_err(|_| format!("bad entry {s}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(rows).map_err(|e| e.to_string())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .finish()
    }
}

impl<'a> Mul<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `det(tI - M)` by Faddeev–LeVerrier. For integer `M` every division by `k`
/// is exact, so the recurrence stays in the integers.
pub fn charpoly(m: &IntMatrix) -> IntPoly {
    let n = m.dim();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // aux_k = M * aux_{k-1} + c_{n-k+1} I, aux_0 = 0
    let mut aux = IntMatrix::zero(n);
    for k in 1..=n {
        aux = (m * &aux).add_scalar(&coeffs[n - k + 1]);
        let tr = (m * &aux).trace();
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = -q;
    }
    IntPoly::new(coeffs)
}

/// Horner evaluation `F(M)`.
pub fn mat_poly_eval(f: &IntPoly, m: &IntMatrix) -> IntMatrix {
    let mut acc = IntMatrix::zero(m.dim());
    for c in f.coeffs().iter().rev() {
        acc = (&acc * m).add_scalar(c);
    }
    acc
}

/// Monic minimal polynomial over `Q`: factor the characteristic polynomial
/// and lower each exponent while the product still annihilates `M`.
pub fn minpoly_matrix(m: &IntMatrix) -> IntPoly {
    let chi = charpoly(m);
    let fp = factor_over_q(&chi).expect("characteristic polynomial is nonzero");
    let mut exps: Vec<u32> = fp.factors.iter().map(|(_, e)| *e).collect();
    let build = |exps: &[u32]| {
        fp.factors
            .iter()
            .zip(exps)
            .fold(IntPoly::one(), |acc, ((f, _), &e)| &acc * &f.pow(e))
    };
    for i in 0..exps.len() {
        while exps[i] > 1 {
            exps[i] -= 1;
            if !mat_poly_eval(&build(&exps), m).is_zero() {
                exps[i] += 1;
                break;
            }
        }
    }
    build(&exps)
}
