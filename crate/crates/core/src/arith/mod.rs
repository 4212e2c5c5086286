//! Exact arithmetic: prime fields, integer polynomials and resultants,
//! number-field norms, quotient rings `Z[θ]/(f)`, and the small
//! multivariate polynomial type used by the identity checks.

mod factor;
mod field;
mod mpoly;
mod numfield;
mod poly;
mod qring;

pub use factor::{factor_biguint, is_prime_u64, is_probable_prime, primes_up_to};
pub use field::{mod_sqrt, nth_power_residues, PrimeField};
pub use mpoly::MPoly;
pub use numfield::{nf_norm, CharPoly, NumberFieldElem};
pub use poly::{resultant, IntPoly, RESULTANT_DEGREE_CAP};
pub use qring::{qring_mul, square_class_test, QuotientRingElem, SquareClass};
