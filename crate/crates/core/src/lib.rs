//! Spherical rectangles with angles (3/2, 1/2, 3/2, 1/2) half-turns.
//!
//! The developing map of such a quadrilateral, written in the upper
//! half-plane with corners at `-k, -1, 1, k`, is the exponential of a
//! Schwarz–Christoffel integral whose single free constant `c` (the
//! accessory parameter) is fixed by a one-dimensional equation. This crate
//! solves that equation, evaluates the developing map, computes conformal
//! moduli and the critical constants bounding the forbidden modulus
//! interval, and verifies the algebraic (Belyi) developing maps that occur
//! for rational angles.
//!
//! Module map:
//!
//! - [`elliptic`]: complete elliptic integrals by the AGM.
//! - [`quadrature`]: adaptive Gauss–Kronrod with endpoint singularity
//!   removal, and contour integrals along upper half-plane paths.
//! - [`accessory`]: the weight `g`, the regularized functional `F(k, c)`
//!   and the two accessory-parameter solvers.
//! - [`constants`]: `κ'_crit`, `k_crit`, `K_crit`, `Λ`, `b₁`.
//! - [`modulus`]: conformal modulus as a function of `k` and its inverse.
//! - [`developing`]: `L = log f`, the angle `α` and the boundary check.
//! - [`belyi`]: the dihedral invariant and the three algebraic examples.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accessory;
pub mod belyi;
pub mod constants;
pub mod developing;
pub mod elliptic;
mod error;
pub mod modulus;
mod poly;
pub mod quadrature;

pub use accessory::{AccessorySolution, Family, QuadParam, SolverOptions};
pub use constants::CriticalConstants;
pub use error::{Error, Result};
