//! Streaming source `v·∇ₓM` and Chapman–Enskog transport coefficients.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::inverse::{invert_lm, SolveOptions, SolveReport};
use super::linearized::{assemble_linearized, AssemblyOptions, LinearizedOperator};
use crate::consts::R_GAS;
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::maxwellian::{DistributionSnapshot, FluidState};
use crate::num::sqrt;
use crate::vec3::{norm2, sub, Vec3};
use crate::velocity_grid::VelocityGrid;

/// Spatial gradients of the fluid variables at one point.
/// `du[i][j]` is `∂u_i/∂x_j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldGradients {
    pub drho: Vec3,
    pub du: [[f64; 3]; 3],
    pub dtheta: Vec3,
}

/// `v·∇ₓM` for the Maxwellian of `state` with the given gradients.
pub fn streaming_source(state: &FluidState, grid: &Arc<VelocityGrid>, grads: &FieldGradients) -> DistributionSnapshot {
    let rho = state.rho();
    let theta = state.theta();
    let rt = state.r_theta();
    let u = state.u();
    DistributionSnapshot::from_fn(grid.clone(), |v| {
        let c = sub(v, u);
        let cc = norm2(c);
        let thermal = cc / (2.0 * rt * theta) - 1.5 / theta;
        let mut total = 0.0;
        for j in 0..3 {
            let mut log_d = grads.drho[j] / rho + grads.dtheta[j] * thermal;
            for i in 0..3 {
                log_d += c[i] * grads.du[i][j] / rt;
            }
            total += v[j] * log_d;
        }
        total * state.maxwellian(v)
    })
}

/// `−∫ v_i v_j G dv`.
pub fn stress_moment(g: &DistributionSnapshot, i: usize, j: usize) -> f64 {
    let grid = g.grid();
    -grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(g.values())
        .map(|((v, w), g)| w * v[i] * v[j] * g)
        .sum::<f64>()
}

/// `∫ ½|v|² v_j G dv`.
pub fn heat_flux_moment(g: &DistributionSnapshot, j: usize) -> f64 {
    let grid = g.grid();
    grid.nodes()
        .iter()
        .zip(grid.weights())
        .zip(g.values())
        .map(|((v, w), g)| w * 0.5 * norm2(*v) * v[j] * g)
        .sum::<f64>()
}

/// `L⁻¹ P₁(v·∇ₓM)`.
pub fn chapman_enskog_response(
    op: &LinearizedOperator,
    grads: &FieldGradients,
    solve: &SolveOptions,
    exec: &dyn Executor,
) -> Result<(DistributionSnapshot, SolveReport)> {
    let src = streaming_source(op.state(), op.grid(), grads);
    let micro = op.basis().project_p1(&src)?;
    invert_lm(op, &micro, solve, exec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    pub n_per_axis: usize,
    /// Grid half-width in thermal widths `√(Rθ)`.
    pub bound_widths: f64,
    pub assembly: AssemblyOptions,
    pub solve: SolveOptions,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            n_per_axis: 16,
            bound_widths: 8.0,
            assembly: AssemblyOptions::default(),
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportCoefficients {
    pub theta: f64,
    pub mu: f64,
    pub kappa: f64,
    pub shear_solve: SolveReport,
    pub heat_solve: SolveReport,
}

/// Viscosity and heat conductivity at temperature `theta` and density `rho`.
///
/// The velocity grid is scaled with the thermal width, so the discrete
/// problem at different temperatures differs only by a velocity rescaling.
pub fn transport_coefficients(
    theta: f64,
    rho: f64,
    opts: &TransportOptions,
    exec: &dyn Executor,
) -> Result<TransportCoefficients> {
    let state = FluidState::new(rho, [0.0; 3], theta)?;
    if !(opts.bound_widths > 0.0) {
        return Err(invalid("grid bound must be positive"));
    }
    let grid = Arc::new(VelocityGrid::new(opts.n_per_axis, opts.bound_widths * sqrt(R_GAS * theta))?);
    let op = assemble_linearized(&state, &grid, &opts.assembly, exec)?;
    let mut shear = FieldGradients::default();
    shear.du[1][0] = 1.0;
    let (g_shear, shear_solve) = chapman_enskog_response(&op, &shear, &opts.solve, exec)?;
    let mu = stress_moment(&g_shear, 0, 1);
    let mut heat = FieldGradients::default();
    heat.dtheta[0] = 1.0;
    let (g_heat, heat_solve) = chapman_enskog_response(&op, &heat, &opts.solve, exec)?;
    let kappa = -heat_flux_moment(&g_heat, 0);
    Ok(TransportCoefficients { theta, mu, kappa, shear_solve, heat_solve })
}

/// Evenly spaced table over `[lo, hi]`.
pub fn transport_table(
    lo: f64,
    hi: f64,
    steps: usize,
    rho: f64,
    opts: &TransportOptions,
    exec: &dyn Executor,
) -> Result<Vec<TransportCoefficients>> {
    if steps == 0 || !(lo > 0.0) || hi < lo {
        return Err(invalid("temperature range must be positive and non-empty"));
    }
    if steps == 1 && hi != lo {
        return Err(invalid("a range with distinct ends needs at least two steps"));
    }
    (0..steps)
        .map(|i| {
            let theta = if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 };
            transport_coefficients(theta, rho, opts, exec)
        })
        .collect()
}
