//! Exact coalition and restrained-dominating coalition numbers of small
//! graphs, with certificates that can be checked independently.
//!
//! * [`graph`]: bitset graphs on at most 64 vertices and graph6 I/O.
//! * [`domination`]: dominating and restrained dominating sets.
//! * [`coalition`]: partitions, verification, coalition graphs, solvers.
//! * [`families`]: paths, cycles, stars, complete (bipartite) graphs, trees.
//! * [`survey`]: corpus sweeps, distribution tables, DOT export.

pub mod coalition;
pub mod domination;
pub mod families;
pub mod graph;
pub mod survey;

pub use coalition::{
    coalition_graph, is_coalition, max_coalition_number, naive_max_oracle, verify_partition,
    CoalitionCertificate, Partition, SolveResult, SolveStatus, SolverConfig,
};
pub use domination::DominationKind;
pub use graph::{Graph, VertexSet};
