//! Core library for classifying measurement-based quantum computations on
//! open graphs.
//!
//! An *open graph* is a simple undirected graph together with designated
//! input and output vertex sets. Depending on its shape, the measurement
//! computation it carries is uniformly strongly deterministic (certified by a
//! gflow), uniformly equiprobable (no internal set), or uniformly
//! constant-probability (no strongly internal set). This crate finds the
//! certificates for all three classes, searches input/output placements on
//! bare graphs, and cross-checks every combinatorial verdict against an exact
//! dense state-vector simulator.
//!
//! The crate is `no_std` (with `alloc`); all file and terminal handling lives
//! in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chooser;
pub mod classify;
pub mod error;
pub mod flow;
pub mod gf2;
pub mod graph;
pub mod sim;

pub use error::Error;
pub use graph::{OpenGraph, VertexSet};

/// Hard upper bound on vertex count (vertex sets are one machine word).
pub const MAX_VERTICES: usize = 64;

/// Default cap on `2^k`-style subset enumerations (`k` ≤ this).
pub const DEFAULT_ENUM_CAP: usize = 24;

/// Hard cap on simulator qubit count.
pub const MAX_SIM_QUBITS: usize = 20;

/// Cap on brute-force automorphism search.
pub const MAX_AUT_VERTICES: usize = 10;

/// Seed used by the sampling checks when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;
