//! Exact computation of torus-equivariant Chow-ring data for quiver moduli
//! spaces: tautological presentations from shuffle-product kernels,
//! torus-fixed-point classification through the universal abelian covering
//! quiver, localization-image generators at isolated fixed points, and the
//! GKM calculus for thin (toric) quiver moduli.
//!
//! All arithmetic is exact over the rationals; every operation is pure and
//! deterministic, so values can be shared freely across threads.

pub mod covering;
pub mod input;
pub mod linalg;
pub mod localization;
pub mod poly;
pub mod presentation;
pub mod quiver;
pub mod toric;

pub use poly::{Character, Monomial, Poly, Symbols, Var};
pub use quiver::{DimVector, Quiver, Stability};
