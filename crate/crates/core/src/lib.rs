pub mod code;
pub mod coordring;
pub mod curve;
pub mod decoder;
pub mod error;
pub mod gf;
pub mod harness;

pub use error::{Error, Result};
