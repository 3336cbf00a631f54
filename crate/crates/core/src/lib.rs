//! Core algorithms for suppressing limited-precision errors in Ising
//! Hamiltonians by running several copies of a problem joined with weak
//! anti-ferromagnetic links.
//!
//! Everything here is `no_std` with `alloc`: instance generation, the
//! precision grid and error models, the linked-copy construction, exact
//! ground-state search, exponential fits of the broken fraction, and the
//! continuous-time quantum walk. File formats, the command line and the
//! parallel experiment runner live in the `copylink` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod experiments;
pub mod fitting;
pub mod ground;
pub mod instances;
pub mod precision;
pub mod qwalk;
pub mod replication;
pub mod seed;
pub mod spin;

pub use error::{Error, Result};
pub use ground::{
    branch_and_bound_ground, brute_force_ground, verdict, CorrectnessVerdict, GroundStateResult,
};
pub use instances::{Family, Graph, IsingInstance};
pub use precision::{ErrorKind, ErrorModel, PrecisionGrid};
pub use replication::{build_linked, extract_copy, jf_min, CopyTopology, LinkedSystem};
pub use spin::SpinConfiguration;

/// Absolute energy tolerance used to group degenerate ground states.
pub const DEFAULT_DEG_TOL: f64 = 1e-9;
