//! Exact routing numbers by breadth-first search over placements.
//!
//! Moves are matchings, which are involutions, so the BFS distance from the
//! identity to a placement equals its routing number.

mod matchings;
mod rank;
mod table;

pub use matchings::{enumerate_matchings, MatchingSet, MAX_MATCHING_N};
pub use rank::{factorial, rank, rank_permutation, unrank, unrank_permutation};
pub use table::{
    bfs_table, bfs_table_sequential, bfs_table_with_limit, exact_rt, extremal_census, load_or_build,
    Census, DistanceTable, ExactRoute, DEFAULT_MAX_N, OVERRIDE_MAX_N,
};
