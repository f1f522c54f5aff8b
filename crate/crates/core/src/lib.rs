//! Exact codimension growth, cocharacters and PI-exponent estimates for
//! finite-dimensional nonassociative algebras.

pub mod algebra;
pub mod altexpr;
pub mod cache;
pub mod characters;
pub mod cocharacter;
pub mod codim;
pub mod dd;
pub mod error;
pub mod exponent;
pub mod field;
pub mod linalg;
pub mod monomial;
pub mod partition;
pub mod perm;
pub mod phi;
pub mod tableau;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
