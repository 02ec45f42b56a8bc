//! Joint estimation of channel transmittance and noise photon statistics from
//! a photon-number-resolving detector operated at several efficiencies.

pub mod channel;
pub mod error;
pub mod io;
pub mod metrics;
pub mod reconstruct;
pub mod sim;

pub use error::{Error, Result};
