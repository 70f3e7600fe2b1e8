pub mod algebra;
pub mod checks;
pub mod connection;
pub mod error;
pub mod henaut;
pub mod pipeline;
pub mod prolong;
pub mod web;

pub use error::{Error, Result};
