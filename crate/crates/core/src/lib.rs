//! The antisymmetric `GL⁺(2)`-homogeneous integral operator
//!
//! ```text
//! K f(x) = (1/π) ∫∫ f(y) / (x₁y₂ − x₂y₁) dy
//! ```
//!
//! on the plane, its polar form, and the circle operators it factors
//! through, with principal-value quadratures, norm-bound checks, and
//! property suites.

pub mod bounds;
pub mod circle_ops;
pub mod cli;
pub mod error;
pub mod funcspace;
pub mod output;
pub mod plane_ops;
pub mod pvquad;
pub mod verify;

pub use error::{Error, Result};
