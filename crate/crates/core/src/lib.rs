//! Exact computations of invariants of singular spaces: virtual Poincaré
//! polynomials, weight spectral sequences, stringy Poincaré functions, the
//! singular elliptic genus, and flop-invariant characteristic numbers.

pub mod charnum;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod exactalg;
pub mod grothendieck;
pub mod stringy;
pub mod weightss;

pub use error::{Error, ErrorClass, Result};
