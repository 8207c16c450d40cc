//! Rooted layered graphs in spherical coordinates: symmetry checks, Jacobi
//! decompositions of the adjacency matrix and Laplacians, and spectral
//! analysis of the resulting Jacobi matrices.

pub mod automorphism;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod intmat;
pub mod jacobi;
pub mod lgf;
pub mod operator;
pub mod paths;
pub mod sequence;

pub use error::{Error, Result};
pub use graph::{build_antitree, build_tree_complete_spheres, LayeredGraph, LayeredGraphBuilder, VertexId};
pub use operator::{compress_operator, OperatorKind};
pub use sequence::SequenceSpec;
