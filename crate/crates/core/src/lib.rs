//! Numerical checks for the essential spectrum of submanifolds of hyperbolic
//! space.
//!
//! The crate covers the Poincaré ball and half-space models, curvature of
//! immersed patches, ideal-boundary diagnostics, radial test functions and
//! their window estimates, cone Laplacians, finite-element Dirichlet spectra
//! of truncated surfaces, and Cheeger-type isoperimetric bounds.

pub mod boundary;
pub mod cone;
pub mod error;
pub mod hyperbolic;
pub mod isoperimetry;
pub mod mesh;
pub mod radial;
pub mod submanifold;

pub use error::{Error, Result};
