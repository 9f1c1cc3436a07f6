//! k-differentials, ρ-compatible tensors, exactness witnesses and the
//! exceptional degrees k = 0 and k = top + 1.

mod exceptional;
mod kdiff;
mod witness;

pub use exceptional::{
    ad_traces, classify_top_plus_one, h1_trivial_coeffs_bounded, PointVerdict, TopPlusOneReport,
    TruncatedH1,
};
pub use kdiff::{
    d_rho_tau, exact_differential, rho_compat_check, validate_k_differential, DiffKey, KDiffReport,
    KDifferential, RhoTensor, Slot,
};
pub use witness::{
    equivalence_witness, exactness_witness, reduced_space_bounded, reduced_space_point_base,
    section_basis, valid_differential_basis, TruncatedReduced,
};

/// Degree bound used when none is given: input degree + 2.
pub fn default_bound(input_degree: u32) -> u32 {
    input_degree + 2
}
