//! Hecke algebras at unramified primes, Plancherel and Sato-Tate measures,
//! Kloosterman sums at the cusp `∞`, and an equidistribution harness for
//! weighted Hecke eigenvalue counts over `Q` and real quadratic fields.

pub mod field;
pub mod hecke;
pub mod measures;
pub mod kloosterman;
pub mod equidist;
