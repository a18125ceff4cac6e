//! Euclidean Steiner trees of regular simplices.
//!
//! The crate is organized around the pipeline: combinatorial tree topologies
//! ([`topology`]), the relatively minimal tree for a fixed topology and exact
//! search over all full topologies ([`solver`]), explicit doubling/split
//! constructions for regular simplices ([`construct`]), executable checkers
//! for the structural necessary conditions of optimality ([`verify`]), and
//! graph embeddings with the vertex-cover reduction instances ([`embed`]).
//! [`geometry`] holds the dimension-generic primitives everything else is
//! built on; [`io`] holds the file formats used by the CLI.

#![forbid(unsafe_code)]

pub mod construct;
pub mod embed;
pub mod error;
pub mod geometry;
pub mod io;
pub mod solver;
pub mod topology;
pub mod verify;

pub use construct::{CandidateTree, RatioSequence};
pub use embed::Graph;
pub use error::{Error, Result};
pub use geometry::{FermatResult, Point};
pub use solver::{SolveReport, SteinerTree};
pub use topology::{Node, Topology};
pub use verify::VerificationReport;
