pub mod cli;
pub mod embedding;
pub mod error;
pub mod framelets;
pub mod graphs;
pub mod hierarchy;
pub mod io;
pub mod verify;

pub use error::{Error, Result};
