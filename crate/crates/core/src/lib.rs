pub mod cli;
pub mod closedform;
pub mod densitylab;
pub mod error;
pub mod measures;
pub mod molecules;
pub mod quadrature;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
