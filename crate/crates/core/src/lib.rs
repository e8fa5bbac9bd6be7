//! Spinal graphs and the volume, gradient and return-probability tools
//! used to study Nash-type inequalities on them.
//!
//! A spinal graph is a connected graph `G` with a spine `Σ ⊂ V(G)` and a
//! projection `π: V(G) → Σ` fixing `Σ`, such that every path between
//! vertices with different projections passes through both projections in
//! order. The [`spinal`] module validates and manipulates them,
//! [`generators`] builds the standard families, [`analysis`] measures
//! dimensions and Nash-type ratios, and [`walk`] computes return
//! probabilities of the simple random walk.

// Parameter checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod generators;
pub mod graph;
pub mod io;
pub mod spinal;
pub mod volume;
pub mod walk;
