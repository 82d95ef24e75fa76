//! Numerical core for hard-sphere kinetic theory around planar 3-rarefaction waves.
//!
//! Velocity grids, Maxwellians and projections, the collision operator in
//! bilinear and Grad form, transport coefficients, smooth rarefaction
//! profiles, a 1D Navier–Stokes solver and entropy/energy diagnostics.
//!
//! The crate is `no_std` and needs only `alloc`. Work that can run in
//! parallel goes through [`exec::Executor`]; the default [`exec::Serial`]
//! runs everything on the calling thread.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod collision;
pub mod consts;
pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod fluid;
pub mod linalg;
pub mod maxwellian;
pub mod num;
pub mod quad;
pub mod rarefaction;
pub mod vec3;
pub mod velocity_grid;

pub use error::{Error, Result};
pub use maxwellian::{DistributionSnapshot, FluidState};
pub use velocity_grid::VelocityGrid;
