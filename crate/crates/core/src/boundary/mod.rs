//! Diagnostics at the ideal boundary in the half-space model: the distance
//! ratio `δ(p, r)/r`, the exclusion set `W`, barrier emptiness, and
//! tangent-cone estimation.

pub mod barrier;
pub mod cone;
pub mod curve;
pub mod delta;
pub mod surface;
pub mod wset;

pub use barrier::{barrier_check, BarrierReport};
pub use cone::{tangent_cone_estimate, ConeDirection, ScaleRecord, TangentConeEstimate};
pub use curve::{golden_min, BoundaryCurve};
pub use delta::{delta_ratio, delta_ratio_at, rho_gamma, DeltaReport, RhoGamma};
pub use surface::{hemisphere, spherical_cap, tilted_strip, vertical_strip, HalfSpaceSurface, PointCloud};
pub use wset::{c01_ratio_profile, membership_w, RatioProfile};
