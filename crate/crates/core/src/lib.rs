//! Exact finite-field engine for representations of affine quivers: Hall
//! products over F_q, flag counts, strata of the representation space and the
//! monomial words attached to them, plus a symbolic model of U⁻.

pub mod error;
pub mod exec;
pub mod field;
pub mod mat;
pub mod ring;
pub mod quiver;
pub mod rep;
pub mod decompose;
pub mod catalog;
pub mod flags;
pub mod hall;
pub mod strata;
pub mod monomials;
pub mod uqminus;
pub mod checks;

pub use error::{Error, Result};
