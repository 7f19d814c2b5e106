//! `L_V`, `f`, `K_V`, the one-forms `ω_V` and `ρ̃_V`, and the comparison of
//! the original and corrected minimality identities.

mod compare;
mod identities;
mod omega;
mod operators;
mod rho;

pub use compare::{
    compare_theorems, identity_residuals_at, IdentityResiduals, MinimalityReport, PointRow,
    Verdict,
};
pub use identities::{
    grad_f_at, grad_term_at, grad_term_direct, grad_term_formula, lemma12_residual,
    lemma12_residual_from, GradTerm,
};
pub use omega::{
    nabla_k_at, omega_direct_at, omega_frame_at, omega_frame_from, omega_frame_trace,
    omega_from_nabla_k, OmegaDirect,
};
pub use operators::{operators_at, operators_of, OperatorsAtPoint};
pub use rho::{
    frame_curvature_with_v, rho_corrected_at, rho_expanded_at, rho_expanded_from,
    rho_on_frame, rho_original_at, rho_with_frame, second_sum, Variant,
};

#[cfg(test)]
mod tests;
