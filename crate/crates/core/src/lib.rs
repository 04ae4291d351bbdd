//! Numerical verification of three-dimensional Veronese webs, the Nijenhuis
//! operators behind them, and the integrable second-order PDEs they define.
//!
//! All differential quantities are computed pointwise by forward-mode
//! automatic differentiation to third order (see [`jets::Jet3`]), so residuals
//! are exact up to floating-point rounding.

pub mod backlund;
pub mod einstein_weyl;
pub mod error;
pub mod expr;
pub mod fields;
pub mod jets;
pub mod nijenhuis;
pub mod roots;
pub mod sampling;
pub mod solutions;
pub mod webs;

pub use error::{Error, Result};
pub use fields::{Chart, OneFormField, Point, ScalarField, VectorField};
pub use jets::Jet3;
