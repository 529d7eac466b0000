//! Dynamical degrees and arithmetic degrees of self-morphisms of
//! semi-abelian varieties, computed from lattice-level data, together with
//! exact-height orbit experiments that check the predictions on monomial
//! maps of tori and on elliptic curves over `Q`.
//!
//! Layout:
//! - [`linalg`]: exact integer matrices, characteristic and minimal polynomials.
//! - [`polyfactor`]: factorization over `Q`, cyclotomic detection, spectral radii.
//! - [`degree`]: the degree calculus on [`degree::SemiAbelianEndo`].
//! - [`orbit`]: torus and elliptic-curve orbits with exact heights.
//! - [`exec`]: sequential / data-parallel batch drivers.

pub mod degree;
pub mod exec;
pub mod linalg;
pub mod orbit;
pub mod polyfactor;

pub use degree::{DegreeOptions, DegreeReport, SemiAbelianEndo};
pub use linalg::IntMatrix;
pub use polyfactor::{IntPoly, RealEnclosure};
