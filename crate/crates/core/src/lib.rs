//! Truncated higher-rank graphs, the delay construction, Toeplitz–Cuntz–Krieger
//! families on truncated Fock space, and the completely positive maps built
//! from the `κ` matrices.

pub mod axioms;
pub mod cp;
pub mod degree;
pub mod delay;
pub mod digraph;
pub mod error;
pub mod fock;
pub mod graph;
pub mod input;
pub mod product;
pub mod report;
pub mod skeleton;

pub use axioms::verify_axioms;
pub use degree::Degree;
pub use delay::{bracket, delay, delayed_min_check, graph_delay, tail, DelayedDigraph, DelayedGraph};
pub use digraph::{path_category, DirectedGraph};
pub use error::{KGraphError, Result};
pub use fock::{FockSpace, SparseOperator};
pub use input::GraphSource;
pub use graph::{GraphBuilder, Morph, PathSpec, TruncatedKGraph};
pub use product::cartesian_product;
pub use report::AxiomReport;
pub use skeleton::{build_2graph, Skeleton2};
