pub mod enumerate;
pub mod error;
pub mod flag;
pub mod kernel;
pub mod laws;
pub mod levi;
pub mod operator;
pub mod oracle;
pub mod pattern;
pub mod random;
pub mod settings;
pub mod space;
pub mod subspace;

pub use error::{Error, Result};
