//! Microscopic diagnostics: the leading Chapman–Enskog term, the profile
//! correction `Ḡ`, and the kinetic remainder `Π`.

use crate::collision::angular::AngularQuadrature;
use crate::collision::bilinear::{quadratic_q_self, BilinearOptions};
use crate::collision::inverse::{invert_lm, SolveOptions, SolveReport};
use crate::collision::linearized::LinearizedOperator;
use crate::collision::transport::{chapman_enskog_response, FieldGradients};
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::maxwellian::{DistributionSnapshot, FluidState};
use crate::num::sqrt;
use crate::vec3::{norm2, sub};

/// `‖g‖` in `L²_v(1/√M*)`, i.e. `(∫ g²/M* dv)^{1/2}`.
pub fn weighted_norm(g: &DistributionSnapshot, m_star: &FluidState) -> f64 {
    let grid = g.grid();
    let mut s = 0.0;
    for ((v, w), x) in grid.nodes().iter().zip(grid.weights()).zip(g.values()) {
        let m = m_star.maxwellian(*v);
        if m > 0.0 {
            s += w * x * x / m;
        }
    }
    sqrt(s)
}

/// `L_M⁻¹ P₁(v·∇ₓM)` at the operator's state.
pub fn chapman_enskog_g(
    op: &LinearizedOperator,
    grads: &FieldGradients,
    solve: &SolveOptions,
    exec: &dyn Executor,
) -> Result<(DistributionSnapshot, SolveReport)> {
    chapman_enskog_response(op, grads, solve, exec)
}

/// `Ḡ = (3/2θ) L_M⁻¹ P₁[v₁(v₁ u₁ₓ + |v−u|²/(2θ) θₓ) M]` for the planar gradients
/// `u1x = ū₁ₓ₁`, `theta_x = θ̄ₓ₁`.
pub fn gbar(
    op: &LinearizedOperator,
    u1x: f64,
    theta_x: f64,
    solve: &SolveOptions,
    exec: &dyn Executor,
) -> Result<(DistributionSnapshot, SolveReport)> {
    let state = op.state();
    let theta = state.theta();
    let u = state.u();
    let src = DistributionSnapshot::from_fn(op.grid().clone(), |v| {
        let c2 = norm2(sub(v, u));
        v[0] * (v[0] * u1x + c2 / (2.0 * theta) * theta_x) * state.maxwellian(v)
    });
    let micro = op.basis().project_p1(&src)?;
    let (g, rep) = invert_lm(op, &micro, solve, exec)?;
    Ok((g.scaled(1.5 / theta), rep))
}

/// Inputs for the remainder `Π = L_M⁻¹[G_t + P₁(v·∇ₓG) − Q(G,G)]`.
pub struct RemainderInput<'a> {
    pub before: &'a DistributionSnapshot,
    pub now: &'a DistributionSnapshot,
    pub after: &'a DistributionSnapshot,
    pub dt: f64,
    /// `∂G/∂x_j` for `j = 1, 2, 3`.
    pub gradients: [&'a DistributionSnapshot; 3],
}

#[derive(Debug, Clone)]
pub struct RemainderReport {
    pub pi: DistributionSnapshot,
    /// `‖Π‖` in `L²_v(1/√M)` with `M` the operator's Maxwellian.
    pub norm: f64,
    pub solve: SolveReport,
}

pub fn compute_pi(
    op: &LinearizedOperator,
    input: &RemainderInput<'_>,
    angular: &AngularQuadrature,
    bilinear: &BilinearOptions,
    solve: &SolveOptions,
    exec: &dyn Executor,
) -> Result<RemainderReport> {
    if !(input.dt > 0.0) {
        return Err(invalid("time step must be positive"));
    }
    for g in [input.before, input.after, input.gradients[0], input.gradients[1], input.gradients[2]] {
        input.now.check_same_grid(g)?;
    }
    if !input.now.grid().same_as(op.grid()) {
        return Err(crate::error::Error::GridMismatch);
    }
    let grid = op.grid().clone();
    let q = quadratic_q_self(input.now, angular, bilinear, exec)?;
    let mut bracket = alloc::vec![0.0; grid.len()];
    for (k, v) in grid.nodes().iter().enumerate() {
        let gt = (input.after.values()[k] - input.before.values()[k]) / (2.0 * input.dt);
        let stream: f64 = (0..3).map(|j| v[j] * input.gradients[j].values()[k]).sum();
        bracket[k] = gt + stream - q.values()[k];
    }
    let bracket = op.basis().project_p1(&DistributionSnapshot::new(grid, bracket)?)?;
    let (pi, rep) = invert_lm(op, &bracket, solve, exec)?;
    let norm = weighted_norm(&pi, op.state());
    Ok(RemainderReport { pi, norm, solve: rep })
}
