//! Model-file language and command driver on top of `levi_core`.

pub mod commands;
pub mod dsl;
pub mod error;
pub mod model;
pub mod report;

pub use error::{CliError, CliResult};
