//! Binary Goppa codes with projective-linear symmetry and their cyclic
//! structure.

pub mod cyclic;
pub mod error;
pub mod gf2m;
pub mod goppa;
pub mod harness;
pub mod linbin;
pub mod poly;
pub mod projline;

pub use error::{Error, Result};
