//! Syndrome coding with locked ("wet") positions over GF(2).
pub mod analysis;
pub mod cli;
pub mod codes;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod stego;
pub use error::{Error, Result};
