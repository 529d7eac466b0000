//! Batch drivers. Every batch operation takes an [`ExecMode`]; with the
//! `parallel` feature disabled, [`ExecMode::Parallel`] runs sequentially.
//! Output order always matches input order.

use num_rational::BigRational;

use crate::polyfactor::{self, FactoredPolynomial, IntPoly, PolyError, RealEnclosure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when this build can actually run work on several threads.
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Order-preserving map over a slice.
pub fn map_ordered<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Runs `f` inside a pool of `workers` threads (parallel builds only).
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = workers;
    f()
}

pub fn factor_batch(
    mode: ExecMode,
    polys: &[IntPoly],
    seed: u64,
) -> Vec<Result<FactoredPolynomial, PolyError>> {
    map_ordered(mode, polys, |f| polyfactor::factor_over_q_seeded(f, seed))
}

pub fn spectral_radius_batch(
    mode: ExecMode,
    polys: &[IntPoly],
    tol: &BigRational,
) -> Vec<Result<RealEnclosure, PolyError>> {
    map_ordered(mode, polys, |f| polyfactor::spectral_radius(f, tol))
}

pub fn cyclotomic_batch(mode: ExecMode, polys: &[IntPoly]) -> Vec<Result<bool, PolyError>> {
    map_ordered(mode, polys, polyfactor::is_cyclotomic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let polys: Vec<IntPoly> = (2..40)
            .map(|k| IntPoly::from_i64s(&[-(k as i64), 0, 0, 1]))
            .collect();
        let a = factor_batch(ExecMode::Sequential, &polys, 1);
        let b = factor_batch(ExecMode::Parallel, &polys, 1);
        assert_eq!(a, b);
        for (f, r) in polys.iter().zip(&a) {
            assert_eq!(&r.as_ref().unwrap().expand(), f);
        }
    }

    #[test]
    fn worker_pool_runs_closure() {
        assert_eq!(with_workers(Some(2), || 7), 7);
        assert_eq!(with_workers(None, || 8), 8);
    }
}
