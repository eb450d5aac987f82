//! Steiner tree approximation algorithms.
//!
//! Classic 2-approximations, greedy contraction over k-restricted full
//! components (with loss contraction), a hypergraphic LP relaxation with
//! iterative rounding, an exact Dreyfus–Wagner solver, SteinLib STP I/O
//! and a benchmark harness.

pub mod budget;
pub mod graph;
pub mod numeric;
pub mod stp;
pub mod two_approx;
pub mod components;
pub mod exact;
pub mod gcf;
pub mod lp;
pub mod generator;
pub mod bench;
