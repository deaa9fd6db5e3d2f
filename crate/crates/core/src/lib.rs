//! Upper bounds for the graph edit distance by local search.
//!
//! The crate provides the K-REFINE, IPFP, BP-BEAM and IBP-BEAM local
//! searches, a parallel multi-start driver with the RANDPOST warm-start
//! loop, an exact brute-force oracle for small graphs, and the file formats
//! and experiment harness used by the `ged` binary.

pub mod beam;
pub mod error;
pub mod exact;
pub mod io;
pub mod ipfp;
pub mod lsape;
pub mod model;
pub mod multistart;
pub mod refine;
pub mod seeds;
pub mod swap;

pub use error::{GedError, Result};
pub use model::{
    edit_path_cost, induced_cost, permute_graph, validate_node_map, Assignment, EditCostModel,
    LabeledGraph, NodeMap,
};
pub use refine::{k_refine, CostMode, RefineConfig};
pub use swap::{enumerate_swaps, swap_apply, swap_cost_localized, swap_cost_naive, SwapCycle};
pub use beam::{bp_beam, ibp_beam, OrderedNodeMap};
pub use exact::{enumerate_node_maps, exact_ged};
pub use ipfp::{ipfp, IpfpConfig};
pub use lsape::{lsape_solve, ExtendedCostMatrix};
pub use multistart::{
    generate_initial_maps, randpost, sample_node_maps, update_scores, InitStrategy, LocalSearch,
    MultistartConfig, ScoresMatrix,
};
