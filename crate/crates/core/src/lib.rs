//! Exact decision procedures for Kochen-Specker contextuality of finite ray sets.
//!
//! Rays are stored with exact radical components, so orthogonality and
//! proportionality are decided without rounding. A ray set can be closed
//! under orthogonal completion, turned into an orthogonality graph, and
//! tested three ways: KS-colourability, proper 3-colourability, and
//! existence of a context connection with trivial holonomy.

pub mod connection;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod radical;
pub mod ray;
pub mod rayfile;
pub mod report;
pub mod solve;

pub use connection::{
    cocycle_check, connection_from_labeling, connection_search, labeling_from_connection,
    verify_holonomy, Bijection, Connection, ContextCycle, HolonomyResult,
};
pub use corpus::{corpus_get, CorpusEntry};
pub use error::{Error, Result};
pub use graph::{ContextPoset, GraphStats, OrthoGraph};
pub use radical::{RadScalar, Rational};
pub use ray::{Ray, RaySet};
pub use rayfile::{export_rayfile, parse_rayfile, read_rayfile};
pub use report::{run_pipeline, PipelineOptions, Report};
pub use solve::{
    brute_force_3c, brute_force_ks, check_witness, ks_colorable, three_colorable, KsColoring,
    Label, Labeling, SearchOptions, Status, Verdict,
};
