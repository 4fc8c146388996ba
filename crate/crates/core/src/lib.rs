//! Maximum flow in directed planar graphs with many sources and sinks.
//!
//! Graphs are combinatorial embeddings ([`planar::PlanarGraph`]): every
//! undirected edge `e` has darts `2e` and `2e + 1`, and each vertex lists
//! its darts counter-clockwise. Capacities are per dart, flows per edge.
//!
//! The main entry point is [`solver::solve`]. It splits the terminals with
//! a cycle separator, solves the side-to-side subproblem with
//! [`side_to_side`], removes the resulting cut, and recurses into the
//! components. [`verify`] certifies results independently.
//!
//! ```
//! use planar_flow::generate::{gen_grid, CapacityDist, GridSpec, Layout};
//! use planar_flow::{solve, verify};
//!
//! let net = gen_grid::<i64>(&GridSpec {
//!     k: 8,
//!     capacity: CapacityDist::Uniform { lo: 0, hi: 9 },
//!     layout: Layout::OppositeSides,
//!     sources: 4,
//!     sinks: 4,
//!     seed: 7,
//! });
//! let sol = solve(&net).unwrap();
//! verify::check_flow(&net, &sol.flow).unwrap();
//! verify::check_max(&net, &sol.flow).unwrap();
//! assert_eq!(sol.value, verify::reference_value(&net));
//! ```

pub mod engines;
pub mod flow_base;
pub mod generate;
pub mod io;
pub mod planar;
pub mod scalar;
pub mod segment;
pub mod separator;
pub mod side_to_side;
pub mod solver;
pub mod verify;

pub use planar::PlanarGraph;
pub use scalar::Scalar;
pub use solver::{solve, Solution, Solver, SolverConfig};

/// Network with 64-bit capacities, the default for files and tools.
pub type Network = flow_base::FlowNetwork<i64>;
pub type Flow = flow_base::Pseudoflow<i64>;
pub type Caps = flow_base::Capacities<i64>;
