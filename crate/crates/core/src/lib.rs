//! Modular symbols for `Gamma_0(n)` over `F_q[T]`: the Manin–Teitelbaum
//! presentation, Hecke operators and kernel elements of the Hecke algebra.

pub mod analysis;
pub mod cache;
pub mod error;
pub mod ffpoly;
pub mod hecke;
pub mod linalg;
pub mod paths;
pub mod projline;
pub mod symspace;

pub use error::{Error, Result};
