//! Symbolic–numeric analysis of rational CR maps between Heisenberg
//! hypersurface models `∂H_n = { Im w = |z|² }`.
//!
//! The crate has two arithmetic layers:
//!
//! * an exact layer ([`exact`]) of complex-rational scalars, multivariate
//!   polynomials and rational functions, used for everything that must be
//!   decided exactly (CR validity, Gauss-map Jacobian ranks, degeneracy
//!   dimensions);
//! * an arbitrary-precision floating layer ([`bigfloat`]) used by the
//!   normalization pipeline, whose unitary steps leave the rational field.
//!
//! On top of those sit the geometric modules: hypersurface models and map
//! catalog ([`models`]), tangential CR operators and jets ([`calculus`]),
//! the five-step normalization pipeline ([`normalize`]), Gauss-map and
//! degeneracy rank analysis ([`rank`]), and the verdict/report harness
//! ([`harness`], [`report`]).

pub mod bigfloat;
pub mod exact;
pub mod linalg;
pub mod models;

pub use bigfloat::{BigComplex, BigFloat};
pub use exact::{ExactComplex, MPoly, RFunc, Rational, VarAlphabet};
pub use models::{CRMap, HPoint, HnAutomorphism, Model};
