//! Random elements of the disk's isometry group, random isometric arcs, and
//! discreteness tests for the groups they generate.

pub mod acceptance;
pub mod analytic;
pub mod arcs;
pub mod discreteness;
pub mod error;
pub mod experiments;
pub mod io;
pub mod mobius;
pub mod sampling;

pub use error::{Error, Result};
