//! Polyvector fields, polydifferential operators, L-infinity structures and
//! the graph-weight machinery behind Kontsevich-style deformation quantization.
//!
//! Symbolic layers ([`tpoly`], [`dpoly`], [`linfinity`]) use exact rational
//! arithmetic. Graph weights ([`weights`]) are Monte Carlo estimates; they enter
//! symbolic expressions as formal [`scalar::WeightExpr`] symbols, so every
//! residual can be evaluated with propagated standard errors.

pub mod error;
pub mod scalar;
pub mod graded;
pub mod poly;
pub mod tpoly;
pub mod dpoly;
pub mod linfinity;
pub mod graphs;
pub mod weights;
pub mod formats;

pub use error::{Error, Result};
pub use scalar::{Coefficient, Rational, WeightExpr};
pub use poly::Polynomial;
pub use tpoly::MultiVector;
pub use dpoly::PolyDiffOperator;
pub use graphs::{AdmissibleGraph, Edge, Vertex};

