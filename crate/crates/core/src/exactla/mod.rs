//! Exact rational scalars, vectors and matrices, plus determinant tooling.

mod det;
mod matrix;
mod rational;

pub use det::{
    bareiss, det, hadamard_bound, max_subdet_all, max_subdet_of_size, square_submatrix_count,
    HadamardBound, SubdetOptions, SubdetResult, DEFAULT_SUBDET_BUDGET,
};
pub use matrix::{Matrix, Vector};
pub use rational::{common_denominator, Rational};
