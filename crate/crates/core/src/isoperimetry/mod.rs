//! Cheeger-constant checks on meshed annuli: isoperimetric ratios of
//! candidate domains, their lower bound from the ball profile, and the chain
//! to the Dirichlet spectrum.

pub mod candidates;
pub mod chain;
pub mod domain;

pub use candidates::{generate_candidates, CandidateFamily};
pub use chain::{
    check_theorem_tc, cheeger_to_lambda, AnnulusSpectrum, CheegerChain, CheegerLink, TheoremTcReport, RATIO_SLACK,
};
pub use domain::{domain_ratio, domain_ratio_with, Candidate, FacetTable, IsoperimetricSample};
