//! Configurable-precision scalars, dense matrices, Frobenius norms, and
//! residual-certified inversion.

mod invert;
mod matrix;
mod scalar;

pub use invert::{
    cond, cond_adaptive, default_target, gauss_jordan, invert, invert_adaptive, invert_adaptive_with,
    inversion_residual, pow2_neg,
    BoundCheck, BoundKind, CondReport, InverseResult, MAX_ESCALATIONS,
};
pub use matrix::{ComplexMatrix, PrecMatrix, RealMatrix};
pub use scalar::{Complex, Scalar};

/// Working precision used when nothing else is requested.
pub const DEFAULT_PRECISION: u32 = 256;

/// `π` at `prec` bits.
pub fn pi(prec: u32) -> rug::Float {
    rug::Float::with_val(prec, rug::float::Constant::Pi)
}
