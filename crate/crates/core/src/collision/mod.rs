//! Hard-sphere collision operator: kernels, Grad form, bilinear form,
//! inversion, dissipation and transport coefficients.

pub mod angular;
pub mod bilinear;
pub mod bounds;
pub mod checks;
pub mod dissipation;
pub mod inverse;
pub mod kernels;
pub mod linearized;
pub mod transport;

pub use angular::AngularQuadrature;
pub use bilinear::{loss_scale, quadratic_q, quadratic_q_many, quadratic_q_self, BilinearOptions};
pub use bounds::{estimate_q_bound, QBoundReport};
pub use checks::{conservation_defect, cross_validation_errors, dissipation_form, null_space_residuals, nu_dual_norm, nu_norm};
pub use dissipation::{dissipation_constant, DissipationOptions, DissipationReport};
pub use inverse::{invert_lm, SolveOptions, SolveReport};
pub use kernels::{collision_frequency, kernel_k1, kernel_k2};
pub use linearized::{assemble_linearized, AssemblyOptions, AssemblyReport, KernelStorage, LinearizedOperator};
pub use transport::{transport_coefficients, transport_table, FieldGradients, TransportCoefficients, TransportOptions};
