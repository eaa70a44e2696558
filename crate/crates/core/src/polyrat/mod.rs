//! Arbitrary-precision complex polynomials and rational functions.
//!
//! Polynomials are dense coefficient vectors in ascending degree order.
//! Everything except root finding is generic over [`Scalar`], so the same
//! code runs in rounded MPC arithmetic and in exact rational arithmetic.

mod exact;
mod poly;
mod rational;
mod roots;
mod scalar;

pub use exact::ExactComplex;
pub use poly::Polynomial;
pub use rational::RationalFunction;
pub use roots::{backward_error, partial_fractions, poly_roots, PoleTerm, MAX_ABERTH_ITERATIONS};
pub use scalar::{format_complex, format_real, parse_complex, ApComplex, ApReal, PrecisionContext, Scalar};
