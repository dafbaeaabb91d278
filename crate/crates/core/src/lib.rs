pub mod cli;
pub mod error;
pub mod laplace;
pub mod specfun;
pub mod table;
pub mod time_domain;
pub mod validation;
pub mod waves;
pub mod womersley;

pub use error::{Error, Result};
