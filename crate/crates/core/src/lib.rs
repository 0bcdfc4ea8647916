pub mod cli;
pub mod deform;
pub mod divpow;
pub mod error;
pub mod finring;
pub mod fpalg;
pub mod projspace;
pub mod report;
pub mod witt;
pub mod wittrec;
pub mod zpn_linalg;
pub mod zpnalg;

pub use error::{Error, Result};
