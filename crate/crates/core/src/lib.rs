//! Algorithms on measure graphs: finite simple graphs whose vertices carry a
//! positive mass.
//!
//! The crate revolves around separating sets for a pair of terminal vertices.
//! For a vertex set `A` and terminals `v, w`, every `v`-`w` path is scored by
//! how many distinct vertices of `A` it visits; the minimum over all paths is
//! the *discrete width* of `A`, and `mass(A) / width` is its *separating
//! ratio*. On top of these two quantities the crate provides
//!
//! * position functions and the fibration of a separating set into
//!   width-one layers ([`separation`]),
//! * slim separating sets and slimming of arbitrary separating sets
//!   ([`separation`]),
//! * minimum-mass vertex cuts via max-flow and path pencils extracted from
//!   flows ([`mincut`]),
//! * the vertex `p`-modulus of the connecting path family, solved by
//!   cutting planes with dual multipliers, and pencils extracted from the
//!   duals ([`modulus`]),
//! * brute-force reference implementations of all of the above for small
//!   graphs ([`oracle`]),
//! * discretization of metric point clouds into measure graphs, with
//!   optional Riesz-kernel vertex weights ([`net`]).
//!
//! Everything is deterministic: equal inputs produce bit-equal outputs. The
//! crate is `no_std` (with `alloc`) so it can be embedded in other tooling;
//! file formats and a command line live in the companion `sepgraph-cli`
//! crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod graph;
pub mod mincut;
pub mod modulus;
pub mod net;
pub mod oracle;
pub mod separation;

pub use graph::{
    connected_component, has_path, path_intersection_count, ExtendedCount, GraphError, GraphPath,
    MeasureGraph, TerminalPair, VertexSet,
};
pub use mincut::{min_vertex_cut, pencil_from_flow, CutResult, PathPencil, PencilError};
pub use modulus::{
    modulus_p, pencil_from_duals, pencil_ratio, shortest_rho_path, Density, ModulusError,
    ModulusResult,
};
pub use net::{
    build_net, estimate_doubling, nearest_net_vertex, net_experiment, riesz_weights, transfer_set,
    ExperimentRow, NetError, NetGraph, PointCloud, RieszWeights, Weighting,
};
pub use oracle::{
    brute_min_separating_mass, brute_min_sr, brute_modulus, brute_position, brute_slim_conditions,
    brute_width, enumerate_simple_paths, OracleError, PathCatalog, SlimOracle,
};
pub use separation::{
    disc_sr, disc_width, fibrate, is_separating, is_slim, position_field, slimify, Fibration,
    PositionField, RatioValue, SeparationError, SlimCheck,
};
