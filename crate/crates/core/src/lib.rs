//! Vertex-disjoint long-cycle packing.
//!
//! The pipeline reduces a graph to a minimal minor (every vertex deletion or
//! edge contraction lowers the average degree), runs a lexicographic local
//! search over collections of short cycles on that minor, and lifts the
//! resulting cycles back to the input graph through the recorded branch sets.
//!
//! Supporting modules provide the rerouting path searches the local search
//! relies on, an exact enumeration of the integer feasibility systems behind
//! one of those searches, extremal graph generators and a brute-force
//! packing oracle for small graphs.

pub mod collection;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod ineq;
pub mod lemma_suite;
pub mod lemmas;
pub mod minimal;
pub mod oracle;

pub use collection::{Cycle, CycleCollection, Potential, ValidationReport};
pub use engine::{
    find_move, pack, pack_with_minimalization, verify_certificate, AppliedMove, Move, MoveKind,
    PackConfig, PackOutcome, PackResult, PackingCertificate, StuckDiagnostics, TraceEntry,
};
pub use error::{Error, Result};
pub use graph::{Graph, GraphStats, Rational, VertexId};
pub use minimal::{lift_packing, minimalize, ContractionHistory, HistoryStep, MinimalizeResult};
pub use oracle::{exact_pack, OracleBudget, OracleOutcome};
