//! Exact combinatorics of 4-cycle systems of complete graphs.
//!
//! A 4-cycle system of order n (a 4-CS(n), existing exactly when
//! n = 1 mod 8) is a partition of the edges of `K_n` into 4-cycles. This
//! crate enumerates them, detects and classifies the 4-cycle trades of
//! volume 2 (double-diamonds) and 3 that move between systems, verifies
//! that all 4-CS(9) are connected under those moves (both by exhaustive
//! search and by an explicit path-construction engine), and computes exact
//! ranks and kernels of the pair inclusion matrix of edges against
//! candidate cycles.
//!
//! All arithmetic on the linear-algebra side is exact (integer / rational);
//! nothing here uses floating point.

pub mod algebra;
pub mod configs;
pub mod connectivity;
pub mod decompose;
mod error;
pub mod graphs;
pub mod io;
pub mod model;
pub mod tables;
pub mod trades;

pub use configs::TradeConfig;
pub use error::{Error, Result};
pub use model::{
    cycle_count, pair_count, Bitrade, CycleSystem, Edge, FourCycle, MuWayTrade, PathStep,
    Permutation, Relabel, TradePath, Vertex,
};

/// Worker cap from `FOURCYCLE_THREADS` (0 or unset = one per available
/// CPU). Parallel sections never exceed this; results are identical for
/// any value.
pub fn worker_count() -> usize {
    let auto = || {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    };
    match std::env::var("FOURCYCLE_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => auto(),
            Ok(k) => k,
        },
        Err(_) => auto(),
    }
}
