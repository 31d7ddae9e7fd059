//! Ordinals below epsilon-zero seen through their covering graphs: fundamental
//! sequences, degree words, higher-order stack encodings and a small monadic
//! second-order model checker for finite prefixes.

pub mod covering_graph;
pub mod degree_word;
pub mod error;
pub mod fundamental;
pub mod hopda;
pub mod mso;
pub mod ordinal;
pub mod strict_sets;
pub mod syntax;
pub mod treegraph;
pub mod verify;

pub use error::{Error, Result};
pub use ordinal::Ordinal;
