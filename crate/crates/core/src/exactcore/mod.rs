//! Exact rational scalars, sparse multivariate polynomials and dense linear algebra.

pub mod linalg;
pub mod poly;

pub use linalg::{
    combine_sparse, kernel_sparse, quotient_basis, quotient_dimension, solve_linear, solve_sparse,
    Flattener, RationalMatrix,
};
pub use poly::{default_names, Monomial, Poly};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("B_NOT_SUBSPACE: column {column} of B lies outside span(Z)")]
    BNotSubspace { column: usize },
}

pub fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
