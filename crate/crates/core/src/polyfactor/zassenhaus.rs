//! Zassenhaus factorization of a primitive squarefree integer polynomial:
//! modular factorization, multifactor Hensel lifting along a balanced
//! factor tree, and subset recombination pruned by the degree sets
//! admissible modulo several primes.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::modp::{self, Fp};
use super::IntPoly;

/// Number of good primes whose degree patterns are intersected.
const PRIMES_TRIED: usize = 3;

type ZmPoly = Vec<BigInt>;

fn zm_trim(mut a: ZmPoly) -> ZmPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn zm_reduce(a: &[BigInt], m: &BigInt) -> ZmPoly {
    zm_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZmPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZmPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZmPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_reduce(&out, m)
}

/// Division by a monic polynomial modulo `m`.
fn zm_div_rem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZmPoly, ZmPoly) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), zm_trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if !c.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[k + i] = (&r[k + i] - &c * bc).mod_floor(m);
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (zm_trim(q), zm_reduce(&r, m))
}

/// One quadratic Hensel step: from `f = g h (mod m)`, `s g + t h = 1 (mod m)`
/// with `h` monic, produce the same data modulo `m^2`.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZmPoly, ZmPoly, ZmPoly, ZmPoly) {
    let m2 = m * m;
    let e = zm_sub(f, &zm_mul(g, h, &m2), &m2);
    let (q, r) = zm_div_rem_monic(&zm_mul(s, &e, &m2), h, &m2);
    let g2 = zm_add(&zm_add(g, &zm_mul(t, &e, &m2), &m2), &zm_mul(&q, g, &m2), &m2);
    let h2 = zm_add(h, &r, &m2);
    let b = zm_sub(
        &zm_add(&zm_mul(s, &g2, &m2), &zm_mul(t, &h2, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let (c, d) = zm_div_rem_monic(&zm_mul(s, &b, &m2), &h2, &m2);
    let s2 = zm_sub(s, &d, &m2);
    let t2 = zm_sub(&zm_sub(t, &zm_mul(t, &b, &m2), &m2), &zm_mul(&c, &g2, &m2), &m2);
    (g2, h2, s2, t2)
}

/// Lifts `f = lc * prod(factors) (mod p)` to monic factors modulo `p^(2^steps)`.
/// `f` is given modulo the final modulus.
fn lift_tree(f: &[BigInt], factors: &[Fp], p: u64, steps: u32) -> Vec<ZmPoly> {
    let pb = BigInt::from(p);
    let modulus = (0..steps).fold(pb.clone(), |acc, _| &acc * &acc);
    if factors.len() == 1 {
        let lc = f.last().unwrap().mod_floor(&modulus);
        let lc_inv = mod_inverse(&lc, &modulus);
        return vec![zm_reduce(
            &f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(),
            &modulus,
        )];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let f_p: Vec<u64> = f
        .iter()
        .map(|c| num_traits::ToPrimitive::to_u64(&c.mod_floor(&pb)).unwrap())
        .collect();
    let lc_p = *f_p.last().unwrap();
    let g0 = modp::scale(
        &left.iter().fold(vec![1u64], |acc, u| modp::mul(&acc, u, p)),
        lc_p,
        p,
    );
    let h0 = right.iter().fold(vec![1u64], |acc, u| modp::mul(&acc, u, p));
    let (one, s0, t0) = modp::ext_gcd(&g0, &h0, p);
    debug_assert_eq!(one, vec![1]);

    let (mut g, mut h) = (modp::to_bigint(&g0), modp::to_bigint(&h0));
    let (mut s, mut t) = (modp::to_bigint(&s0), modp::to_bigint(&t0));
    let mut m = pb;
    for _ in 0..steps {
        let f_m = zm_reduce(f, &(&m * &m));
        let next = hensel_step(&f_m, &g, &h, &s, &t, &m);
        (g, h, s, t) = next;
        m = &m * &m;
    }
    let mut out = lift_tree(&g, left, p, steps);
    out.extend(lift_tree(&h, right, p, steps));
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn symmetric(c: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r > half {
        r - m
    } else {
        r
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| {
        let r = n.sqrt();
        (3..=r).step_by(2).all(|d| n % d != 0)
    })
}

/// Bitset over degrees 0..=n of sums of factor degrees.
fn subset_degree_sums(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Factors a primitive squarefree `f` with positive leading coefficient,
/// degree at least one and nonzero constant term, into irreducibles over `Z`.
pub(crate) fn factor_primitive_squarefree<R: Rng>(f: &IntPoly, rng: &mut R) -> Vec<IntPoly> {
    let n = f.degree().expect("nonzero polynomial");
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.leading().unwrap().clone();

    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut admissible = vec![true; n + 1];
    let mut good = 0;
    for p in small_primes() {
        if good == PRIMES_TRIED {
            break;
        }
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::reduce(f, p);
        if !modp::is_squarefree(&fp, p) {
            continue;
        }
        good += 1;
        let facs = modp::factor_squarefree(&modp::monic(&fp, p), p, rng);
        let degs: Vec<usize> = facs.iter().map(|u| modp::deg(u).unwrap()).collect();
        for (a, b) in admissible.iter_mut().zip(subset_degree_sums(&degs, n)) {
            *a &= b;
        }
        if facs.len() == 1 || admissible[1..n].iter().all(|&a| !a) {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, modular) = best.expect("some good prime exists");

    // Coefficients of lc * (any factor scaled to leading coefficient lc) are
    // bounded by |lc| * 2^n * ||f||_2.
    let norm = f.norm_squared().sqrt() + BigInt::one();
    let bound = (&lc.abs() * &norm) << n;
    let target = bound * 2u32;
    let pb = BigInt::from(p);
    let mut steps = 0u32;
    let mut modulus = pb.clone();
    while modulus <= target {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let lifted = lift_tree(f.coeffs(), &modular, p, steps);
    recombine(f, lifted, &modulus, &admissible)
}

fn recombine(f: &IntPoly, mut lifted: Vec<ZmPoly>, m: &BigInt, admissible: &[bool]) -> Vec<IntPoly> {
    let half: BigInt = m / 2u32;
    let mut f = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let lc = f.leading().unwrap().clone();
        let lc_const = f.coeff(0) * &lc;
        let mut hit = None;
        for subset in Combinations::new(lifted.len(), size) {
            let d: usize = subset.iter().map(|&i| lifted[i].len() - 1).sum();
            if !admissible[d] {
                continue;
            }
            // Cheap constant-term filter before forming the product.
            let c0 = subset
                .iter()
                .fold(lc.clone(), |acc, &i| (acc * &lifted[i][0]).mod_floor(m));
            let c0 = symmetric(&c0, m, &half);
            if c0.is_zero() || !(&lc_const % &c0).is_zero() {
                continue;
            }
            let prod = subset
                .iter()
                .fold(vec![lc.clone()], |acc, &i| zm_mul(&acc, &lifted[i], m));
            let candidate =
                IntPoly::new(prod.iter().map(|c| symmetric(c, m, &half)).collect()).primitive_part();
            if let Some(q) = f.div_exact(&candidate) {
                hit = Some((subset, candidate, q));
                break;
            }
        }
        match hit {
            Some((subset, candidate, q)) => {
                found.push(candidate);
                f = q.primitive_part();
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        found.push(f);
    }
    found
}

/// Lexicographic k-subsets of 0..n.
struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            idx: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
