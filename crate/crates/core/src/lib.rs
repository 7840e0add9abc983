//! Exact computation of polynomial infinitesimal CR-automorphisms of quadrics and
//! tube manifolds, birational maps in `q(z)⁻¹p(z)` form, and the projective
//! regularization through Plücker coordinates of isotropy subalgebras.

#![allow(clippy::needless_range_loop)]

pub mod birat;
pub mod cli;
pub mod error;
pub mod exact;
pub mod holsolver;
pub mod liestruct;
pub mod manifolds;
pub mod regularizer;
pub mod vfields;

pub use error::{Error, Result};
