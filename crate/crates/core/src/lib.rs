//! Round-based simulator for two leaderless consensus building blocks,
//! Fast Probabilistic Consensus (FPC) and Cellular Consensus (CC), on grid,
//! torus and Watts-Strogatz networks with Cautious, Semi-Cautious and
//! Berserk adversaries.
//!
//! Everything is deterministic given a seed. The [`experiments`] module
//! sweeps parameter grids and writes convergence-rate tables as CSV.

pub mod adversary;
pub mod cc;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod fpc;
pub mod opinion;
pub mod rng;
pub mod topology;

pub use adversary::{AdversaryKind, AdversarySpec};
pub use cc::CcParams;
pub use engine::{convergence_rate, run, ConsensusScope, Protocol, RateEstimate, RunResult, RunSpec};
pub use error::{Error, Result};
pub use experiments::{figure_preset, run_sweep, write_csv, SweepResult, SweepSpec};
pub use fpc::{DeadEndWalk, FpcParams};
pub use opinion::Opinion;
pub use topology::{Graph, TopologyKind, TopologySpec};
