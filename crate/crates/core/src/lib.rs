//! Generalized Fibonacci cubes `Q_d(f)`: the subgraphs of the hypercube
//! `Q_d` induced on the length-`d` binary strings that avoid a factor `f`.
//!
//! The crate builds these graphs, computes the string invariants that govern
//! them (autocorrelation polynomial, block count), decides isomorphism with
//! its own canonical labeling engine, realizes explicit isomorphisms between
//! cubes, and exhaustively checks structural claims about them.

pub mod counting;
pub mod cube;
mod error;
pub mod exec;
pub mod graph;
pub mod harness;
pub mod iso;
pub mod theorems;
pub mod words;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::Graph;
pub use words::Word;
