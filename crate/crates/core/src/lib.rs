//! Rational inner functions between matrix balls, realized by unitary colligations.
//!
//! The crate implements a calculus of matrix-valued rational inner functions,
//! each represented by a finite unitary matrix (a colligation) whose
//! characteristic function it is.  On top of a small dense complex linear
//! algebra core it provides:
//!
//! - the matrix ball, its boundary strata, and the pseudo-unitary Möbius action
//!   ([`ballgeo`]);
//! - colligations, characteristic-function evaluation, and inner-function
//!   certification ([`colligation`]);
//! - the calculus of characteristic functions: direct sum, pointwise product,
//!   tensor product, composition, splitting, and boundary restriction
//!   ([`calculus`]);
//! - polynomial representations of the general linear group and their action on
//!   characteristic functions ([`repn`]).
//!
//! All numerics are dense, double precision, and tolerance-driven through
//! [`ToleranceConfig`]; all randomness flows through explicit seeds ([`sample`]).

pub mod ballgeo;
pub mod calculus;
pub mod colligation;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod repn;
pub mod sample;
pub mod tolerance;

pub use error::{Error, Result};
pub use matrix::{cx, kron, Complex64, ComplexMatrix};
pub use tolerance::ToleranceConfig;
