//! Representation graphs and spectral measures for the finite reflection
//! subgroups of GL(2,Z): the Weyl groups of T^2, U(1)xSU(2), U(2),
//! SU(2)xSU(2), SO(4) and PSU(3).
//!
//! Exact work (orbit functions, characters, fusion, moments) is done on
//! Laurent polynomials with big-integer coefficients. Densities are checked
//! against those exact moments by quadrature.

pub mod checks;
pub mod cli;
pub mod d61;
pub mod elliptic;
pub mod error;
pub mod graphs;
pub mod groups;
pub mod jacobian;
pub mod laurent;
pub mod measures;
pub mod orbit;
pub mod precise;
pub mod quad;
pub mod seq;

pub use error::{Error, Result};
pub use groups::{FiniteSubgroup, GroupName, IntMatrix2, Weight};
pub use laurent::{LaurentPoly, TorusPoint};
