//! Immersed patches of submanifolds of the ball, their curvature in the
//! Euclidean and hyperbolic metrics, and the asymptotic-minimality diagnostic.

pub mod curvature;
pub mod epsilon;
pub mod patch;

pub use curvature::{
    frame_data, mean_curvature, mean_curvature_in_frame, orthogonality_defect, second_fundamental_form,
    CurvatureReport, FrameData, MetricTag,
};
pub use epsilon::{epsilon_r, EpsilonProfile, EpsilonReport, Sampler};
pub use patch::{
    builtin_graphs, builtin_patch, bump_graph, cone_patch, graph_patch, orthogonal_cap, tilted_cap,
    totally_geodesic_disk, BumpHeight, BumpShape, ChartJet, DerivativeProvider, HeightJet, ImmersedPatch,
    ParamDomain, Smoothness,
};
