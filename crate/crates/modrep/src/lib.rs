//! A workbench for computational modular representation theory: exact linear
//! algebra over GF(p^n), finite groups as Cayley tables, kG-module calculus,
//! block decompositions, rank-variety lines, and stable-category ext-blocks.

pub mod error;
pub mod extblocks;
pub mod ffla;
pub mod groups;
pub mod blocks;
pub mod rep;
pub mod report;
pub mod scenario;
pub mod varieties;

pub use error::{Error, Result};
