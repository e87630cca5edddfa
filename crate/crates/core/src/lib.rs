//! Exact-arithmetic experiments on generic phenomena in arithmetic groups:
//! norm-ball censuses of SL(2,Z), walks on recognizing automata,
//! equidistribution in finite quotients, characteristic-polynomial sieves,
//! sampling by norm, and Zariski-density probes.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod error;

pub use algebra::{IntMatrix, IntPolynomial, RationalMatrix};
pub use error::{Error, Result};
pub mod census;
pub mod genericity;
pub mod report;
pub mod quotients;
pub mod rng;
pub mod walk;
pub mod sieve;
pub mod h2;
pub mod zariski;
pub mod cli;
