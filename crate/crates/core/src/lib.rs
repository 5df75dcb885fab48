//! Constructive resolvent-degree toolkit.
//!
//! * [`poly`]: exact and floating polynomial kernel.
//! * [`tschirnhaus`]: Tschirnhaus transformations and Bring–Hamilton towers.
//! * [`groups`]: permutation groups (Schreier–Sims, composition factors).
//! * [`rd_bounds`]: resolvent-degree upper-bound calculators.
//! * [`cubic_lines`]: the 27 lines on a smooth cubic surface.
//! * [`quartic_bitangents`]: the 28 bitangents of a smooth plane quartic.
//! * [`monodromy`]: numerical monodromy certificates and the Kontsevich recursion.

pub mod acceptance;
pub mod cubic_lines;
pub mod error;
pub mod groups;
pub mod homotopy;
pub mod linalg;
pub mod monodromy;
pub mod poly;
pub mod quartic_bitangents;
pub mod rd_bounds;
pub mod rng;
pub mod scalar;
pub mod tschirnhaus;

pub use error::{Error, Result};
pub use scalar::{Num, Rational, Scalar, C64};
