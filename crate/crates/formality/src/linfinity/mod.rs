//! L∞ algebras and morphisms through their Taylor coefficients.
//!
//! [`symbolic`] works in the symmetric coalgebra on abstract graded symbols
//! and checks the coalgebra identities of the extension formulas.
//! [`family`] evaluates the projected structure equations on concrete
//! elements. [`formality`] builds the graph-weight morphism from polyvector
//! fields to polydifferential operators, and [`series`] the formal power
//! series in `ħ` used for Maurer–Cartan elements and star products.

pub mod family;
pub mod formality;
pub mod series;
pub mod symbolic;

pub use family::{Graded, Taylor};
pub use series::FormalSeries;
