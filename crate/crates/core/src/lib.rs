//! Bipartite `K_{s,t}` saturation: graphs, biclique detection, constructions,
//! closed-form bounds, the core/shell decomposition and exhaustive search.

pub mod biclique;
pub mod bounds;
pub mod canon;
pub mod cli;
pub mod constructions;
pub mod decomposition;
pub mod error;
pub mod graph;
pub mod search;

pub use biclique::{
    closure, contains_biclique, creates_copy, find_copy, greedy_saturate, is_free, is_saturated,
    is_weakly_saturated, weak_saturation, Orientation, SatParams, Verdict, WitnessBiclique,
};
pub use canon::{canonical_form, CanonicalForm, SideMode};
pub use error::{Error, Result};
pub use graph::BipartiteGraph;
