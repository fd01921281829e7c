//! Flag manifolds over semifields: exact arithmetic in tropical and
//! rational-function semifields, canonical-basis representation data,
//! monoid actions, cell parametrizations, and diagram folding.

pub mod cells;
pub mod error;
pub mod folding;
pub mod lambda_indep;
pub mod linalg;
pub mod poly;
pub mod repdata;
pub mod rootdata;
pub mod semifield;
pub mod vk;

pub use error::{Error, Result};
