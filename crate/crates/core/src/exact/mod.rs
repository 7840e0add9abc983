//! Exact arithmetic substrate: ℚ(i) scalars, sparse multivariate polynomials,
//! polynomial matrices, reduced rational functions and dense linear algebra.

pub mod linalg;
pub mod poly;
pub mod polymatrix;
pub mod ratfunc;
pub mod scalar;

pub use linalg::{Matrix, SpanSolver};
pub use poly::{monomials_up_to, Monomial, MultiPoly};
pub use polymatrix::PolyMatrix;
pub use ratfunc::{gcd, lcm, RatFunc};
pub use scalar::{format_rational, parse_rational, rat, rat_int, Field, GaussRational, Rational};
