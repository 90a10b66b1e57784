//! Simulation toolkit for networks of optical cavities in the
//! Tavis-Cummings-Hubbard model.
//!
//! * [`hilbert`]: excitation-sector bases of photons and two-level atoms.
//! * [`hamiltonian`]: TC/TCH/JC operators, photon hops, Gaussian pulses.
//! * [`evolution`]: exact, pulsed and decaying propagation.
//! * [`gate`]: the coCSign gate on asynchronous atomic excitations.
//! * [`walk`]: single-photon quantum walk imitating a free massive particle.
//! * [`dark`]: singlet/dark atomic states and their optical selection.
//! * [`report`]: tabular experiment output.
//!
//! Everything is generic over the real scalar type; the aliases below fix it
//! to `f64`, which is what the experiments use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dark;
pub mod error;
pub mod evolution;
pub mod gate;
pub mod hamiltonian;
pub mod hilbert;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod walk;

pub use error::{Error, Result};
pub use scalar::Real;

pub type NetworkConfig = hilbert::NetworkConfig<f64>;
pub type HilbertSpace = hilbert::HilbertSpace<f64>;
pub type OperatorMatrix = hamiltonian::OperatorMatrix<f64>;
pub type HopSpec = hamiltonian::HopSpec<f64>;
pub type GaussianPulse = hamiltonian::GaussianPulse<f64>;
pub type StateVector = evolution::StateVector<f64>;
pub type EvolutionSettings = evolution::EvolutionSettings<f64>;
pub type GateConfig = gate::GateConfig<f64>;
pub type TwoQubitState = gate::TwoQubitState<f64>;
pub type WalkConfig = walk::WalkConfig<f64>;
pub type AtomicState = dark::AtomicState<f64>;
pub type DecayConfig = dark::DecayConfig<f64>;
pub type EmissionReport = dark::EmissionReport<f64>;
pub type Complex64 = nalgebra::Complex<f64>;
