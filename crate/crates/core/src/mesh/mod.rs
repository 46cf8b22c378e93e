//! Finite-element spectra of meshed truncated submanifolds, the radial
//! Laplacian error term, and the Weyl residual of radial test functions on
//! the submanifold itself.

pub mod assembly;
pub mod eigen;
pub mod laplacian;
pub mod sparse;
pub mod spectrum;
pub mod triangulation;
pub mod weyl;

pub use assembly::{assemble, assemble_with, BoundaryCondition, DiscreteOperatorPair};
pub use eigen::{smallest_eigenpairs, EigenConfig, EigenSolution};
pub use laplacian::{
    band_vertices, radial_laplacian_error, radial_laplacian_error_at, LaplacianErrorReport, LaplacianErrorSample,
};
pub use sparse::{reverse_cuthill_mckee, CsrMatrix, SkylineLdl};
pub use spectrum::{
    cheeger_side_bound, dirichlet_bottom, dirichlet_bottom_with_bound, discretization_slack, BoundComparison,
    SpectrumReport,
};
pub use triangulation::{topological_boundary, HyperbolicMesh, LocalMetric, MeshMetric, MIN_METRIC_DET};
pub use weyl::{
    measure_sigma_diagnostics, sigma_weyl_residual, SigmaDiagnostics, SigmaMesh, SigmaWeylReport, SigmaWeylRow,
    DEVIATION_DECAY, DEVIATION_FLOOR, TRUNCATION_GUARD,
};
