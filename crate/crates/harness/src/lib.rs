//! Matrix generation and corpus tooling built on `wradius-core`.

pub mod analyze;
pub mod corpus;
pub mod error;
pub mod export;
pub mod generate;
pub mod io;
pub mod search;

pub use error::{HarnessError, Result};
