//! Core domain types: vertices, edges, canonical 4-cycles, cycle systems,
//! permutations, trades, and trade paths.

mod cycle;
mod perm;
mod system;
mod trade;

pub use cycle::{cycle_count, pair_count, Edge, FourCycle, Vertex};
pub use perm::{for_each_permutation, Permutation, Relabel};
pub use system::CycleSystem;
pub use trade::{Bitrade, MuWayTrade, PathStep, TradePath};
