//! Exact-arithmetic lattice sums over the Pascal triangle.
//!
//! The crate has four layers:
//!
//! - [`triangle`]: binomial coefficients with the extended zero convention,
//!   a shared append-only row cache, Fibonacci numbers, and powers of two.
//! - [`sums`]: direct evaluators for the classical additive sums (row sums,
//!   hockey stick, shallow diagonals) and for the vertical partial sum
//!   together with its alternated-diagonal counterpart and the six-periodic
//!   `{-1, 0, +1}` correction term that ties them together.
//! - [`dsl`]: a small expression language for stating such sums as text,
//!   with a parser, canonical printer, and exact evaluator.
//! - [`verify`]: range verification of identities, Pascal-recurrence
//!   checking with the `+1` correction on the line `n = 2k`, and a
//!   mechanical replay of the induction argument.
//!
//! Everything is exact: values are arbitrary-precision integers and no
//! floating point appears anywhere.

pub mod dsl;
pub mod sums;
pub mod triangle;
pub mod verify;

pub use num_bigint::BigInt;
pub use triangle::{fibonacci, pow2, CellIndex, TriangleCache, MAX_SUPPORTED_ROW};
