//! Exact classification of symplectic transformations over odd prime fields
//! and the rationals as products of two involutions, two skew-involutions,
//! or an involution and a skew-involution.

pub mod budget;
pub mod classify;
pub mod error;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod scalars;
pub mod smallgroups;
pub mod symplectic;
pub mod verify;

pub use budget::{Budget, Tri};
pub use error::{Error, Result};
pub use poly::{Factorization, Poly};
pub use scalars::{Field, Scalar, SquareClass};
