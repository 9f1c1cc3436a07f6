//! Lie algebroid presentations and the calculus on ∧•A and ∧•(TM ⊕ A).

pub mod cochain;
pub mod fixtures;
pub mod mixed;
pub mod multivector;
pub mod presentation;
pub mod schouten;

pub use cochain::{
    ce_coboundary_residual, d_a, lie_algebra_h1, subsets, Action, CoefficientModule, H1Report,
    ModuleAction, OneCochain,
};
pub use mixed::{
    b_pi, compat_identities, contract, contract_rho, d_rho, d_rho_pow, inv_star, inv_star_direct,
    Covector, MixedTensor,
};
pub use multivector::{Blade, Multivector};
pub use presentation::{validate_presentation, Presentation, PresentationReport};
pub use schouten::{schouten, schouten_fn};
