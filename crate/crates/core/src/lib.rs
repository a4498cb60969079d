//! Causal flows for geometries of the one-way measurement model.
//!
//! - [`graph`]: graphs, geometries `(G, I, O)` and digraphs.
//! - [`flow`]: flow verification, the influencing digraph, path covers and
//!   flow search with an exhaustive oracle.
//! - [`extremal`]: the edge bound `Γ(n, k)` and the graphs that meet it.
//! - [`sim`]: statevector check that a flow yields a unitary embedding.
//! - [`io`]: JSON geometry and flow files.
//! - [`cli`]: the `flowscope` command line.

pub mod cli;
pub mod extremal;
pub mod flow;
pub mod graph;
pub mod io;
pub mod sim;
pub mod topo;

pub use extremal::{gamma, generate_extremal, ExtremalPartition};
pub use flow::{
    brute_force_flow, find_causal_flow, verify_flow, CausalFlow, FlowCheck, FlowOutcome,
    PathCover, SearchConfig, SuccessorFunction,
};
pub use graph::{Digraph, Geometry, Graph, Vertex};
