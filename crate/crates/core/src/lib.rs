//! Exact tools for relations between modular q-series.
//!
//! - [`exactalg`]: rational polynomials, factorization over ℚ, resultants,
//!   linear algebra.
//! - [`ratfun`]: rational functions, composition, units, normal form.
//! - [`decomp`]: decompositions and complete chains under composition.
//! - [`qseries`]: truncated Laurent series with certified precision.
//! - [`relate`]: search for `s1(q^r) = f(s2(q))`.
//! - [`moongraph`]: catalogs, relation graphs, refinement, export.

pub mod decomp;
pub mod exactalg;
pub mod moongraph;
pub mod qseries;
pub mod ratfun;
pub mod relate;

pub use exactalg::{Poly, PolyOverPoly, Rational};
pub use ratfun::{MoebiusUnit, RatFun};
