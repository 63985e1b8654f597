//! Numerical core for deciding on which length scale a quantum chain in a
//! global thermal state still admits a local temperature.
//!
//! The chain is cut into `N_G` groups of `n` sites. Each group is solved in
//! isolation, the inter-group bonds are treated through their first two
//! moments in product states, and two conditions (a positivity condition on
//! the energy window and a linearity condition on the interaction terms)
//! decide whether every group is approximately canonical. Scanning `n` gives
//! the minimal group size `n_min`.
//!
//! The [`oracle`] module carries a dense, brute-force path for small spin
//! chains that the closed forms elsewhere are checked against.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod chain;
pub mod criteria;
mod error;
pub mod moments;
pub mod numerics;
pub mod operators;
pub mod oracle;
pub mod spectra;

pub use chain::{build_chain, partition, ChainSpec, HarmonicParams, IsingParams, ModelParams};
pub use criteria::{
    energy_window, minimal_group_size, AccuracyParams, CriteriaReport, EnergyWindow,
    GroupTreatment, NminReport,
};
pub use error::{Error, Result};
