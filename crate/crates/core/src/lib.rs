//! Semi-quantitative group testing: test matrices, exhaustive property
//! checkers, explicit and random constructions, decoders and capacity bounds.

pub mod combin;
pub mod capacity;
pub mod cli;
pub mod construct;
pub mod decode;
pub mod error;
pub mod model;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
