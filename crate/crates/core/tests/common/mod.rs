#![allow(dead_code)]

use arithdeg::{IntMatrix, IntPoly};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn poly(s: &str) -> IntPoly {
    s.parse().unwrap()
}

pub fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows).unwrap()
}

pub fn golden() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|k| k >= 0 && k * k == n)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive form with positive leading coefficient.
pub fn normalize(c: &[i64]) -> Vec<i64> {
    let g = c.iter().fold(0, |g, &x| gcd(g, x));
    let s = if *c.last().unwrap() < 0 { -1 } else { 1 };
    c.iter().map(|x| s * x / g).collect()
}

/// Irreducible over `Q` by construction: linear, quadratic with non-square
/// discriminant, or Eisenstein at 2 or 3.
pub fn irreducible() -> impl Strategy<Value = Vec<i64>> {
    let linear = (1i64..=20, -20i64..=20)
        .prop_filter("primitive", |(a, b)| gcd(*a, *b) == 1)
        .prop_map(|(a, b)| vec![b, a]);
    let quadratic = (1i64..=20, -20i64..=20, -20i64..=20)
        .prop_filter("irreducible", |(a, b, c)| {
            *c != 0 && gcd(gcd(*a, *b), *c) == 1 && !is_square(b * b - 4 * a * c)
        })
        .prop_map(|(a, b, c)| vec![c, b, a]);
    let eisenstein = (3usize..=6, prop_oneof![Just(2i64), Just(3)])
        .prop_flat_map(|(d, p)| {
            let lead = (1i64..=20).prop_filter("p does not divide", move |a| a % p != 0);
            let mids = proptest::collection::vec(-20i64 / p..=20 / p, d - 1);
            let c0 = (-20i64 / p..=20 / p).prop_filter("p^2 does not divide", move |k| k % p != 0);
            (lead, mids, c0).prop_map(move |(a, mids, k)| {
                let mut c = vec![k * p];
                c.extend(mids.into_iter().map(|m| m * p));
                c.push(a);
                c
            })
        })
        .prop_filter("primitive", |c| c.iter().fold(0, |g, &x| gcd(g, x)) == 1);
    prop_oneof![linear, quadratic, eisenstein]
}

/// Pairwise non-associate irreducibles with multiplicities in `1..=3`.
pub fn factor_multiset(max: usize) -> impl Strategy<Value = Vec<(Vec<i64>, u32)>> {
    proptest::collection::vec((irreducible(), 1u32..=3), 1..=max).prop_map(|v| {
        let mut seen: Vec<Vec<i64>> = Vec::new();
        let mut out = Vec::new();
        for (c, e) in v {
            let n = normalize(&c);
            if !seen.contains(&n) {
                seen.push(n.clone());
                out.push((n, e));
            }
        }
        out
    })
}

pub fn product(fs: &[(Vec<i64>, u32)]) -> IntPoly {
    fs.iter()
        .fold(IntPoly::one(), |acc, (c, e)| &acc * &IntPoly::from_i64s(c).pow(*e))
}

pub fn small_matrix(n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(proptest::collection::vec(-bound..=bound, n), n).prop_map(|rows| {
        IntMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
        .unwrap()
    })
}

pub fn any_small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4).prop_flat_map(|n| small_matrix(n, 3))
}

/// `(U, U^-1)` for a product of elementary matrices `I + c e_ij`.
pub fn unimodular(n: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        let mut v = IntMatrix::identity(n);
        for (i, j, c) in ops {
            if i == j {
                continue;
            }
            let mut e = IntMatrix::identity(n);
            e.set(i, j, BigInt::from(c));
            let mut einv = IntMatrix::identity(n);
            einv.set(i, j, BigInt::from(-c));
            u = &u * &e;
            v = &einv * &v;
        }
        (u, v)
    })
}

/// Leibniz expansion of `det(A)`.
pub fn leibniz_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::from(0);
    permute(&mut perm, 0, a, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, a: &[Vec<BigInt>], total: &mut BigInt) {
    let n = perm.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut prod = BigInt::from(if inversions % 2 == 0 { 1 } else { -1 });
        for (i, &j) in perm.iter().enumerate() {
            prod *= &a[i][j];
        }
        *total += prod;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, a, total);
        perm.swap(k, i);
    }
}

/// No eigenvalue of the 2x2 matrix `[[a, b], [c, d]]` is zero or a root of unity.
pub fn isogeny_without_roots_of_unity(a: i64, b: i64, c: i64, d: i64) -> bool {
    let (tr, det) = (a + d, a * d - b * c);
    let chi = |t: i64| t * t - tr * t + det;
    det != 0 && chi(1) != 0 && chi(-1) != 0 && !(det == 1 && tr.abs() <= 1)
}
