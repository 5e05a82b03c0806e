//! Exact linear algebra for relations among totally odd depth-graded multiple
//! zeta values.

pub mod error;
pub mod index;
pub mod linalg;
pub mod matrices;
pub mod period;
pub mod poly;
pub mod report;
pub mod series;
pub mod store;
pub mod suite;

pub use error::{Error, Result};
