//! Generator and history epsilon-machines.
//!
//! A generator epsilon-machine is an irreducible, unifilar hidden Markov
//! model whose states are probabilistically distinct. The history
//! epsilon-machine of a process has one state per class of pasts that
//! predict the same future. This crate builds both, checks the axioms,
//! tracks observer synchronization and decides when two machines are the
//! same up to relabeling.

pub mod axioms;
pub mod error;
pub mod examples;
pub mod format;
pub mod graph;
pub mod isomorphism;
pub mod linalg;
pub mod machine;
pub mod minimize;
pub mod mixed_state;
pub mod par;
pub mod random;
pub mod reconstruct;
pub mod simulate;
pub mod topology;

pub use axioms::{AxiomReport, StatePartition};
pub use error::{Error, Result};
pub use machine::{Alphabet, Edge, Machine, State, StationaryDistribution, Symbol};
