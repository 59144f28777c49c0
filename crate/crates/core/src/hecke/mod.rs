//! The local Hecke algebra at primes not dividing the level, its Laurent
//! polynomial model, the coset decomposition of `Δ(𝔭^{2k})`, eigenvalue
//! parametrizations, and the global operators `T(𝔞²)`.

mod cosets;
mod global;
mod local;
mod satake;
mod spoly;

use thiserror::Error;

use crate::field::{FieldError, PrimeLabel};

pub use cosets::{
    brute_force_convolution, coset_representatives, hermite_form_2x2, left_equivalent_rational, ConvolutionTally, Mat2,
};
pub use global::{global_eigenvalue, GlobalHeckeOperator};
pub use local::{LocalHeckeElement, SymLaurentPoly};
pub use satake::{lambda_from_nu, nu_from_lambda, HeckeEigenvalue, Nu, SatakeParam};
pub use spoly::{s_poly, s_poly_for_norm, EvenPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeckeError {
    #[error("elements live in different local algebras ({0} vs {1})")]
    PrimeMismatch(PrimeLabel, PrimeLabel),
    #[error("no Hecke eigenvalue supplied for prime {0}")]
    MissingPrime(PrimeLabel),
    #[error("prime {0} has no known generator")]
    NoGenerator(PrimeLabel),
    #[error("prime {0} divides the level")]
    DividesLevel(PrimeLabel),
    #[error("{pairs} representative pairs exceed the limit {limit}")]
    SizeGuard { pairs: u64, limit: u64 },
    #[error("lambda = {lambda} outside [0, {max}]")]
    LambdaOutOfRange { lambda: f64, max: f64 },
    #[error("nu = {0} outside the canonical domain")]
    NuOutOfDomain(String),
    #[error("brute-force tally is not constant on the double coset of level {0}")]
    NonConstantMultiplicity(u32),
    #[error("exponent k must be at least 1")]
    ZeroExponent,
    #[error(transparent)]
    Field(#[from] FieldError),
}
