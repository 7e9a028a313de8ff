//! Permutation routing on cycles and paths.
//!
//! Pebble `i` starts on vertex `π(i)` and must reach `v_i`; each round swaps
//! the pebbles on the edges of one matching. The crate provides the spin and
//! order calculus for cycles, odd-even routing, the extremal-window
//! strategies, and an exact breadth-first solver for small `n`.

pub mod cycle;
pub mod disbursement;
pub mod error;
pub mod extremal;
pub mod order;
pub mod router;
pub mod solver;
pub mod suite;

pub use cycle::{apply_matching, d_plus, Matching, Permutation, Placement, Topology, TopologyKind};
pub use disbursement::{
    base_spins, enumerate_minimized, flip, minimize, spin_lower_bound, step_spins, validate, SpinState,
};
pub use error::{Error, Result};
pub use extremal::{block_decompose, classify_extremal, BlockDecomposition, ExtremalClass, ExtremalKind};
pub use order::{compare, window, OrderVerdict, WindowDecomposition};
pub use router::{analyze_trace, route_extremal, route_odd_even, verify_schedule, RoutingTrace, TraceAnalysis, TraceFile};
pub use solver::{bfs_table, exact_rt, DistanceTable};
