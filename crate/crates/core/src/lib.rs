pub mod bott;
pub mod cli;
pub mod error;
pub mod estimates;
pub mod index;
pub mod sympath;
pub mod toric;

pub use error::{Error, Result};
