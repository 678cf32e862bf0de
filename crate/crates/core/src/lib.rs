//! Exact diagonalization of Heisenberg spin graphs and two-spin
//! entanglement of their thermal, ground, and field-polarized states.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod graph;
pub mod hilbert;
pub mod rdm;
pub mod spectra;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{SpinGraph, XmgParams};
pub use rdm::{TwoQubitRDM, XStateRDM};
pub use spectra::{MixedStateSpec, SectorSpectrum, Spectrum};
