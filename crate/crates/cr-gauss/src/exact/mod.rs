//! Exact complex-rational arithmetic: scalars, multivariate polynomials and
//! rational functions over the alphabet `(z_1..z_{n-1}, w, ζ_1..ζ_{n-1}, u)`.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so the whole layer is safe to share across threads.

mod complex;
pub mod poly;
mod rfunc;

pub use complex::ExactComplex;
pub use poly::{Expo, MPoly, ScalarOne, VarAlphabet};
pub use rfunc::RFunc;

pub use rug::Rational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,
    #[error("denominator vanishes at the origin")]
    DenominatorVanishes,
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("variable slot {0} out of range")]
    SlotOutOfRange(usize),
}

/// Scalar coefficients usable in [`MPoly`]: the exact field and the
/// arbitrary-precision floating field implement this.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn add_s(&self, rhs: &Self) -> Self;
    fn sub_s(&self, rhs: &Self) -> Self;
    fn mul_s(&self, rhs: &Self) -> Self;
    fn neg_s(&self) -> Self;
    fn conj_s(&self) -> Self;
    fn is_zero_s(&self) -> bool;
}
