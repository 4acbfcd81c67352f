//! Exact scalar and univariate polynomial arithmetic over the rationals.

use thiserror::Error;

pub mod factor;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod rational;
pub mod resultant;

pub use factor::{factor, Factorization};
pub use poly::{poly_gcd, poly_xgcd, squarefree_decomposition, Poly};
pub use rational::Rational;
pub use resultant::{resultant, PolyOverPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("zero polynomial input")]
    ZeroInput,
    #[error("polynomial is zero in the outer variable")]
    ZeroOuter,
}
