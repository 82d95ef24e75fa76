//! Planar 3-rarefaction waves: Burgers fans, the smoothed profile and its
//! measured decay.

pub mod burgers;
pub mod decay;
pub mod gas;
pub mod profile;

pub use burgers::{burgers_fan, kq_constant, BurgersPoint, SmoothBurgers};
pub use decay::{log_times, verify_decay, DecayOptions, DecayReport, DecaySeries};
pub use gas::{eigen_lambda, riemann_invariants, sound_speed};
pub use profile::{wave_strength, ProfilePoint, RarefactionConfig, WaveProfile};
