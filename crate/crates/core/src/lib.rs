//! Entanglement measures for bipartite qudit states.
//!
//! The crate computes the closed-form I-tangle of rank-2 density operators
//! together with the machinery around it: the universal state inverter,
//! Wootters' two-qubit concurrence, optimal two-term decompositions, an
//! entanglement-of-formation bound for qubit-qudit systems, and independent
//! brute-force convex-roof minimizers used to verify the closed form.

pub mod error;
pub mod inverter;
pub mod linalg;
pub mod states;
pub mod wootters;

pub use error::{Error, Result};
