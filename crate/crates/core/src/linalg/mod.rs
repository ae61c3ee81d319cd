//! Exact linear algebra over `F_p`, `Q` and `Z`.

mod field;
mod matrix;
pub mod snf;

pub use field::{Field, PrimeField, Rationals};
pub use matrix::{
    add, identity, is_zero, kernel, mul, mul_vec, rank, rank_of_vectors, rref, scale, zero_matrix, Matrix,
};
