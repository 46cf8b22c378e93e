//! One-dimensional radial machinery: quadrature with the `sinh^{m−1}` weight,
//! the test profiles `ψ` and `υ_R`, mollification, and the isoperimetric
//! comparison function.

pub mod isoperimetric;
pub mod lemma;
pub mod profile;
pub mod quadrature;

pub use isoperimetric::{ball_cheeger, isoperimetric_profile, IsoperimetricProfile, ProfileValue};
pub use lemma::{
    empirical_c_star, lemma_est_sweep, mollification_budgets, mollify, profile_pieces, profile_rule, verify_lemma_est,
    window_integrals,
    BudgetCheck, LemmaEstReport, LemmaEstSweep, MollificationReport, QuadratureConfig, WindowIntegrals,
};
pub use profile::{
    epsilon_crossover, epsilon_dominant_term, epsilon_window, psi, psi_residual, window_jet, ClosureRadial,
    EpsilonTerm, Kernel, Psi, RadialFunction, RadialJet, RadialProfile, SpectralParams,
};
pub use quadrature::{gauss_legendre, QuadratureRule};
