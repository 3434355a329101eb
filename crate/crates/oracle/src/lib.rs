//! Generators of median graphs and exhaustive reference implementations
//! for every fast algorithm of `median-core`.
//!
//! Everything here trades speed for obviousness: medians come from
//! all-pairs distances, Θ from enumerating squares, geometric medians
//! from enumerating candidate points. Each routine that can blow up takes
//! an explicit cap.

pub mod brute;
pub mod es;
pub mod gen;
pub mod geometric;
pub mod verify;

pub use brute::{
    brute_median, brute_median_with, brute_wiener, brute_wiener_with, majority_rule_intersection,
    BruteMedian,
};
pub use gen::{generate, GeneratorKind};
pub use verify::{apsp_bfs, brute_theta, is_lexbfs_order, verify_median_graph, Apsp, MedianCheck};
