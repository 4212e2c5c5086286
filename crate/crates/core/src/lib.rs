//! Desk-scale re-execution of the modular-method elimination for
//! `(x − d)^5 + x^5 + (x + d)^5 = y^n` with `gcd(x, d) = 1`.
//!
//! * [`arith`]: exact integers, prime fields, resultants and norms.
//! * [`ec_fp`]: traces of Frobenius by point counting.
//! * [`frey`]: the four Frey–Hellegouarch models and the Kraus residue sieve.
//! * [`newforms`]: eigenvalue data files, validation and the remote adapter.
//! * [`elimination`]: exponent bound, congruence sieve, Kraus sieve.
//! * [`small_exponents`]: the n = 2, 3, 5 reductions.
//! * [`oracle`]: brute-force search and identity checks for the main equation.

pub mod arith;
pub mod config;
pub mod ec_fp;
pub mod elimination;
mod error;
pub mod frey;
pub mod newforms;
pub mod oracle;
pub mod small_exponents;

pub use error::{Error, Result};
