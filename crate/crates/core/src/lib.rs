//! Exact correspondence between nilpotent pre-Lie algebras and strongly
//! nilpotent braces.
//!
//! * [`flows`] builds the brace of a pre-Lie algebra (the group of flows).
//! * [`limits`] recovers the pre-Lie product from a brace as a scaling limit.
//! * [`free_expansion`] rewrites star expressions symbolically and builds the
//!   doubling matrix.
//! * [`bch`] checks `W(a)∘W(b) = W(C(a, b))` against the BCH series.
//!
//! All arithmetic is exact, over the rationals or a prime field.

pub mod bch;
pub mod brace;
pub mod check;
pub mod corpus;
pub mod error;
pub mod field;
pub mod flows;
pub mod format;
pub mod free_expansion;
pub mod limits;
pub mod linalg;
pub mod prelie;
pub mod sampling;

pub use brace::{ChainReport, GradedBrace, Lambda};
pub use check::{BraceLaw, CheckResult, Violation};
pub use error::{Error, Result};
pub use field::{Scalar, ScalarField};
pub use linalg::{Matrix, Subspace, Vector};
pub use prelie::PreLieAlgebra;
