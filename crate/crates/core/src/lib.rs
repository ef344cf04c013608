pub mod actions;
pub mod cli;
pub mod error;
pub mod functions;
pub mod group;
pub mod harmonic;
pub mod linalg;
pub mod random;
pub mod report;
pub mod support;

pub use error::{Error, Result};
