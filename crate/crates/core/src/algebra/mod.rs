//! Exact integer and rational linear algebra.

mod matrix;
mod poly;
mod rational;

pub use matrix::{char_poly, frobenius_norm_sq, mat_mul, reduce_mod, IntMatrix, CHAR_POLY_MAX_DIM};
pub use poly::IntPolynomial;
pub use rational::RationalMatrix;

/// Generators of SL(2,Z) used throughout.
pub mod gens {
    use super::IntMatrix;

    /// `[[1,0],[1,1]]`
    pub fn l() -> IntMatrix {
        IntMatrix::from_array([[1, 0], [1, 1]])
    }
    /// `[[1,1],[0,1]]`
    pub fn u() -> IntMatrix {
        IntMatrix::from_array([[1, 1], [0, 1]])
    }
    pub fn l_inv() -> IntMatrix {
        IntMatrix::from_array([[1, 0], [-1, 1]])
    }
    pub fn u_inv() -> IntMatrix {
        IntMatrix::from_array([[1, -1], [0, 1]])
    }
    /// `[[0,-1],[1,0]]`, order 4.
    pub fn s() -> IntMatrix {
        IntMatrix::from_array([[0, -1], [1, 0]])
    }
    /// `[[1,1],[0,1]]`; the translation z ↦ z + 1.
    pub fn t() -> IntMatrix {
        u()
    }
}
