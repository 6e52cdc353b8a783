//! Locally balanced edge-colourings of complete graphs.
//!
//! The crate builds the extremal colourings (the `P_k` family, split
//! colourings, alternating multicolour cycles), counts the small coloured
//! subgraphs that force unavoidable patterns, extracts homogeneous blow-ups
//! from dense pattern-copy hypergraphs, and checks the associated bounds with
//! exhaustive oracles at desk scale.

pub mod bitset;
pub mod blowup;
pub mod census;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod io;
pub mod multicolour;
pub mod patterns;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{balance_profile, is_locally_balanced, BalanceProfile, Colour, ColouredCompleteGraph, Rational, BLUE, GREEN, RED};
