pub mod acceptance;
pub mod bump;
pub mod cli;
pub mod config;
pub mod decomp;
pub mod error;
pub mod johnsolve;
pub mod lcfunc;
pub mod linalg;
pub mod lp;
pub mod polar;
pub mod position;
pub mod quadrature;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
