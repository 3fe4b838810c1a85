//! Homology and cohomology of the spaces of configurations of `n` points in
//! `R^d` where no `k` points coincide.
//!
//! Cohomology classes are linear combinations of oriented k-forests modulo
//! 3-term and dual Jacobi relations; homology classes are bracket
//! expressions. The pairing between them, cup products, coproducts and the
//! operadic (co)actions are computed exactly, and Betti numbers come from a
//! closed-form generating series.

pub mod coaction;
pub mod error;
pub mod exact;
pub mod expr;
pub mod forest;
pub mod homology;
pub mod linalg;
pub mod plain;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use exact::{koszul_sign, FormalSum, Scalar};
pub use expr::BracketExpr;
pub use forest::{ForestVector, Item, KForest, Vertex};
