//! Rate-leakage regions of state-dependent broadcast channels with
//! noncausal state knowledge at the encoder.
//!
//! * [`prob`]: exact finite-alphabet distributions and information measures.
//! * [`region`]: inner/outer bounds, binning budget, zero-rate region and
//!   frontier search for discrete channels.
//! * [`gaussian`]: closed-form scalar Gaussian region and its sweep.
//! * [`gaussverify`]: log-determinant verification of the Gaussian region.
//! * [`io`]: channel-spec files and CSV emission.

pub mod error;
pub mod prob;
pub mod region;
pub mod gaussian;
pub mod gaussverify;
pub mod io;

pub use error::{Error, Result};
