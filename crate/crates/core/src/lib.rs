pub mod algebra_maps;
pub mod cli;
pub mod config;
pub mod diagrams;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod spaces;
pub mod wheeling;

pub use config::Limits;
pub use error::{Error, Result};
