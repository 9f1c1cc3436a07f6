//! Exact symbolic calculus for Lie algebroids with polynomial structure data.

pub mod algebroid;
pub mod check;
pub mod cli;
pub mod deform;
pub mod differentials;
pub mod error;
pub mod exactcore;
pub mod jet;
pub mod jetgroup;
pub mod random;
pub mod transitive;

pub use error::{Error, Result};
