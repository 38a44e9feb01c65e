//! Quantum witness evaluation for finite-dimensional systems.
//!
//! The witness compares the probability of a final projective outcome with
//! and without an earlier, unread ("blind") projective measurement. Under
//! macroscopic realism it vanishes; quantum mechanically it is bounded by
//! `1 - 1/M` for `M` blind outcomes and by the trace distance between the
//! measured and unmeasured states.

pub mod checks;
pub mod cli;
pub mod error;
pub mod models;
pub mod optimize;
pub mod qcore;
pub mod witness;

pub use error::{Error, Result};
