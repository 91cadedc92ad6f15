//! Null decomposition of C₄ₖ-free bipartite graphs.
//!
//! A graph is certified bipartite with no cycle of length divisible by
//! four, a maximum matching is found, and alternating reachability from
//! the unsaturated vertices splits the vertex set into `Supp`, `Core` and
//! `Npart`. Rank, nullity, matching number, independence number, inertia
//! and the numbers of maximum matchings and maximum independent sets all
//! follow from that split. Exact rational linear algebra and brute-force
//! oracles are provided for cross-checking.

pub mod decomposition;
pub mod generator;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod matching;
pub mod null_basis;
pub mod oracles;
pub mod validate;

pub use decomposition::{analysis_report, AnalysisOptions, AnalysisReport, NullDecomposition};
pub use graph::{Graph, Vertex, VertexSet};
pub use matching::Matching;
