//! Entropy, microscopic and energy diagnostics around the rarefaction wave.

pub mod energy;
pub mod entropy;
pub mod micro;

pub use energy::{energy_functional, micro_gram, EnergyReport, ENERGY_LABEL};
pub use entropy::{choose_global_maxwellian, entropy_s, psi, relative_entropy, sandwich_constant, GlobalMaxwellianChoice};
pub use micro::{chapman_enskog_g, compute_pi, gbar, weighted_norm, RemainderInput, RemainderReport};
