use std::hint::black_box;

use arithdeg::exec::{cyclotomic_batch, factor_batch, map_ordered, spectral_radius_batch, ExecMode};
use arithdeg::orbit::{torus_alpha_estimate, MonomialMap, TorusPoint};
use arithdeg::{IntMatrix, IntPoly};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> IntPoly {
    let mut c: Vec<i64> = (0..deg).map(|_| rng.random_range(-20..=20)).collect();
    c.push(1);
    IntPoly::from_i64s(&c)
}

/// Products of two or three random monic factors, so factorization has work to do.
fn corpus(n: usize) -> Vec<IntPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..n)
        .map(|_| {
            let k = rng.random_range(2..=3);
            (0..k).fold(IntPoly::one(), |acc, _| {
                let d = rng.random_range(1..=4);
                &acc * &random_poly(&mut rng, d)
            })
        })
        .collect()
}

fn bench_polys(c: &mut Criterion) {
    let polys = corpus(64);
    let tol = BigRational::new(BigInt::from(1), BigInt::from(10).pow(9));
    let mut g = c.benchmark_group("polynomials");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("factor", name), &polys, |b, p| {
            b.iter(|| black_box(factor_batch(mode, p, 42)))
        });
        g.bench_with_input(BenchmarkId::new("cyclotomic", name), &polys, |b, p| {
            let monic: Vec<IntPoly> = p.iter().filter(|f| f.coeff(0) != BigInt::from(0)).cloned().collect();
            b.iter(|| black_box(cyclotomic_batch(mode, &monic)))
        });
        g.bench_with_input(BenchmarkId::new("spectral_radius", name), &polys, |b, p| {
            b.iter(|| black_box(spectral_radius_batch(mode, p, &tol)))
        });
    }
    g.finish();
}

fn bench_orbits(c: &mut Criterion) {
    let maps: Vec<(MonomialMap, TorusPoint)> = [[2, 1, 1, 1], [3, 1, 1, 2], [2, 0, 0, 3], [1, 2, 3, 1]]
        .iter()
        .flat_map(|&[a, b, cc, d]| {
            let m = IntMatrix::from_i64_rows(&[&[a, b], &[cc, d]]).unwrap();
            [(2, 3), (5, 7)].map(|(x, y)| {
                (MonomialMap::homomorphism(m.clone()), TorusPoint::from_integers(&[x, y]).unwrap())
            })
        })
        .collect();
    let mut g = c.benchmark_group("torus_orbits");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new("alpha_n300", name), &maps, |b, jobs| {
            b.iter(|| black_box(map_ordered(mode, jobs, |(f, x)| torus_alpha_estimate(f, x, 300))))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_polys, bench_orbits);
criterion_main!(benches);
