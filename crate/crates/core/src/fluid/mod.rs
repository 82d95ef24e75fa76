//! Compressible Navier–Stokes on a line (optionally a thin torus across it),
//! started from a perturbed rarefaction profile.

pub mod experiment;
pub mod field;
pub mod grid;
pub mod rhs;
pub mod step;
pub mod transport;

pub use experiment::{
    initial_field, perturbation, profile_on_line, run_stability_experiment, ExperimentReport, ExperimentSetup,
    PerturbationField, PerturbationNorms, PerturbationSpec, SeriesRow,
};
pub use field::{primitive_of, to_conserved, to_primitive, Conserved, FluidField, Primitive};
pub use grid::SpatialGrid;
pub use rhs::{ns_rhs, primitive_rate, Boundary, Rate};
pub use step::{max_stable_dt, step, StepLimits};
pub use transport::{TransportAt, TransportTable};
