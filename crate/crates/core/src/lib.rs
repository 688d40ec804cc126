//! Degree sequences with S3-connected realizations.
//!
//! A graph is S3-connected when every zero-sum Z3 boundary function admits a
//! strongly connected orientation whose out-minus-in degree matches the
//! boundary at each vertex modulo 3. This crate decides whether a degree
//! sequence has a simple S3-connected realization (it does exactly when the
//! minimum degree is at least 4 and the degree sum is at least 6n-4),
//! constructs such a realization, and emits a machine-checkable certificate
//! whose leaves are exhaustively oracle-verified kernel graphs.
//!
//! Module map:
//! - [`sequences`]: degree-sequence type, graphicality tests, transforms
//! - [`graph`]: loopless multigraph plus every transformation the
//!   construction uses (lifting, contraction, join, closure, ...)
//! - [`oracles`]: brute-force orientation enumeration ground truth
//! - [`atlas`]: hard-coded kernel graphs with their lifting scripts
//! - [`certificates`]: certificate schema and structural verifier
//! - [`realize`]: the inductive construction
//! - [`cli`]: command-line surface

pub mod atlas;
pub mod certificates;
pub mod cli;
pub mod graph;
pub mod oracles;
pub mod realize;
pub mod sequences;

pub use graph::MultiGraph;
pub use sequences::DegreeSequence;
