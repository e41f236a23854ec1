//! Exact-arithmetic engine for polynomial first integrals of left-invariant
//! sub-Riemannian geodesic flows on Carnot groups.
//!
//! * [`exactpoly`]: rational phase-space polynomials and the Poisson bracket.
//! * [`carnot`]: graded nilpotent algebras, the built-in catalog, realizations.
//! * [`integrals`]: checks of claimed first integrals.
//! * [`sparserank`]: sparse integer matrices, rank over GF(p) and over Q.
//! * [`obstruct`]: prolongation of `{H, F} = 0` and the non-existence verdict.
//! * [`reduce`]: reduction to the planar system `x' = cos z, y' = sin z, z' = Q`.
//! * [`dynamics`]: Cash-Karp integration and Poincare sections of that system.

pub mod carnot;
pub(crate) mod dense;
pub mod dynamics;
pub mod exactpoly;
pub mod integrals;
pub mod obstruct;
pub mod reduce;
pub mod sparserank;
