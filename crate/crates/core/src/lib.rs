//! Linear-time algorithms for median graphs.
//!
//! The crate computes Θ-classes with LexBFS, weights of all halfspaces by
//! peripheral peeling, and from those the weighted median set (majority
//! rule), a diametral pair of it, the Wiener index and the distance matrix.
//! The same machinery solves the median problem for points of the `ℓ1`
//! cube complex of a median graph and for configurations of event
//! structures.
//!
//! ```
//! use median_core::{graph::{load_graph, WeightFn}, median, theta};
//!
//! let g = load_graph("4 4\n0 1\n0 2\n1 3\n2 3").unwrap();
//! let tp = theta::theta_classes_lexbfs(&g, 0).unwrap();
//! let w = WeightFn::uniform(g.n());
//! let hw = median::halfspace_weights(&g, &w, &tp).unwrap();
//! assert_eq!(median::wiener_index(&hw).to_string(), "8");
//! ```

pub mod complex;
pub mod error;
pub mod events;
pub mod graph;
pub mod median;
pub mod rational;
pub mod theta;

#[cfg(test)]
mod testgraphs;

pub use error::{Error, Result};
pub use graph::{load_graph, load_weights, Graph, WeightFn};
pub use rational::Rational;
