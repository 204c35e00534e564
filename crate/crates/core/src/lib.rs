//! Exact computations with ADHM data for classical groups.

pub mod adhm;
pub mod current;
pub mod error;
pub mod exec;
pub mod factorization;
pub mod forms;
pub mod hilbert;
pub mod linalg;
pub mod nilpotent;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::Mat;
pub use scalar::{Field, Scalar};
