//! isodef: an exact-arithmetic workbench for deformation theory of Fuchsian
//! differential modules on the punctured projective line.
//!
//! Everything is computed over Q with deterministic pivoting, so identical
//! inputs produce byte-identical reports.

pub mod algebra;
pub mod artin;
pub mod cohomology;
pub mod commands;
pub mod connection;
pub mod corpus;
pub mod deform;
pub mod dgla;
pub mod problem;
pub mod report;
pub mod rigidity;
pub mod selftest;
pub mod errors;

pub use errors::{Error, Result};
