//! Extra-tight trails and tours in d-uniform hypergraphs.
//!
//! A d-uniform trail here is a vertex sequence, not an edge sequence: each
//! window of d+1 consecutive entries covers the d-sets obtained by dropping
//! one of its last d entries, and the trail is valid when all covered edges
//! are distinct and belong to the host graph.

pub mod complex;
pub mod divisibility;
pub mod hypergraph;
mod lp;
pub mod randwalk;
pub mod search;
pub mod surgery;
pub mod trails;

pub use complex::{hs_bound, DualShape, ExtremalCertificate, FacetFamily};
pub use hypergraph::{DGraph, Edge, GraphError, Vertex};
pub use randwalk::{
    DecompMethod, FractionalDecomp, PackingReport, RandwalkError, StationarityReport, WalkState,
};
pub use search::{SearchBudget, SearchError, SearchMode, SearchReport};
pub use surgery::{SurgeryError, TurnPlan};
pub use trails::{CoverageReport, TrailError, VertexSeq};
