//! Cavity-QED toolkit for two atoms interacting consecutively with one field mode.
//!
//! * [`hilbert`]: dense states, density matrices, Fock-space constructors, eigensolver
//! * [`dynamics`]: exact Jaynes–Cummings propagation and the photon-loss master equation
//! * [`semiclassics`]: closed-form large-|α| wave-packet model and its dephased variant
//! * [`entanglement`]: purity, entropy, concurrence, entanglement of formation, negativity
//! * [`wigner`]: Wigner maps of field states and peak counting
//! * [`sweep`]: γ grids, curve extrema and parallel sweeps

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod exec;
pub mod hilbert;
pub mod semiclassics;
pub mod sweep;
pub mod wigner;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;
