//! Conditioning of quasi-Vandermonde matrices for the maximal totally real
//! subfield of the 4p-th cyclotomic field.
//!
//! * [`intpoly`]: exact integer polynomials (cyclotomic, Chebyshev and the
//!   scaled families `R_i`, `R*_i`, `r*_i`).
//! * [`mpnum`]: MPFR-backed matrices, Frobenius norms and certified inversion.
//! * [`construct`]: node sets, Vandermonde builders, the `F·Q·C` / `P·U`
//!   factorization and every condition-number bound check.
//! * [`lwe`]: discrete Gaussian sampling, PLWE samples and the noise
//!   amplification experiment.

pub mod cli;
pub mod construct;
pub mod error;
pub mod intpoly;
pub mod lwe;
pub mod mpnum;
pub mod serde_util;

pub use error::{Error, Result};
