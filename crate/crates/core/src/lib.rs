//! Spin market model on small lattices: synchronous heat-bath dynamics,
//! ordered-phase extraction and the statistics used to characterise the
//! transitions between the ordered and disordered phases.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the
//! experiment runner and the command line live in the `spinmarket` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub use error::{Error, Result};

pub mod dynamics;
pub mod network;
pub mod phase;
pub mod rng;
pub mod stats;

pub use dynamics::{ModelParams, SpinState, Trajectory};
pub use network::Network;
pub use phase::{OrderedInterval, PhaseStats};
