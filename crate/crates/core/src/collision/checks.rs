//! Measured defects of the discrete collision operator: conservation,
//! null space, dissipation sign and Grad/bilinear agreement.

use alloc::vec::Vec;

use super::angular::AngularQuadrature;
use super::bilinear::{loss_scale, quadratic_q_many, quadratic_q_self, BilinearOptions};
use super::linearized::LinearizedOperator;
use crate::error::Result;
use crate::exec::Executor;
use crate::maxwellian::{moments, DistributionSnapshot};
use crate::num::sqrt;

/// `‖g‖_ν = (∫ ν g²/M)^½` with the operator's Maxwellian.
pub fn nu_norm(op: &LinearizedOperator, g: &DistributionSnapshot) -> f64 {
    weighted(op, g, true)
}

/// `(∫ h²/(νM))^½`, the norm dual to `‖·‖_ν`.
pub fn nu_dual_norm(op: &LinearizedOperator, h: &DistributionSnapshot) -> f64 {
    weighted(op, h, false)
}

fn weighted(op: &LinearizedOperator, g: &DistributionSnapshot, primal: bool) -> f64 {
    let w = op.grid().weights();
    let m = op.maxwellian().values();
    let nu = op.nu();
    let s: f64 = (0..w.len())
        .filter(|&k| m[k] > 0.0)
        .map(|k| {
            let g2 = g.values()[k] * g.values()[k] / m[k];
            w[k] * if primal { nu[k] * g2 } else { g2 / nu[k] }
        })
        .sum();
    sqrt(s)
}

/// `‖L χ_j‖ / ‖χ_j‖_ν` for the five collision invariants.
pub fn null_space_residuals(op: &LinearizedOperator, exec: &dyn Executor) -> Result<[f64; 5]> {
    let mut out = [0.0; 5];
    for (j, chi) in op.basis().chi().iter().enumerate() {
        let l = op.apply(chi, exec)?;
        out[j] = nu_dual_norm(op, &l) / nu_norm(op, chi);
    }
    Ok(out)
}

/// `⟨P₁g, L P₁g⟩_{1/M}` and the same divided by `‖P₁g‖²_ν`.
pub fn dissipation_form(op: &LinearizedOperator, g: &DistributionSnapshot, exec: &dyn Executor) -> Result<(f64, f64)> {
    let p = op.basis().project_p1(g)?;
    let lp = op.apply(&p, exec)?;
    let w = op.grid().weights();
    let m = op.maxwellian().values();
    let form: f64 = (0..w.len()).filter(|&k| m[k] > 0.0).map(|k| w[k] * p.values()[k] * lp.values()[k] / m[k]).sum();
    let n = nu_norm(op, &p);
    Ok((form, form / (n * n)))
}

/// `‖L g − 2Q(M, g)‖ / ‖g‖_ν` for each `g`, with `Q` from direct quadrature.
pub fn cross_validation_errors(
    op: &LinearizedOperator,
    gs: &[DistributionSnapshot],
    angular: &AngularQuadrature,
    exec: &dyn Executor,
) -> Result<Vec<f64>> {
    let opts = BilinearOptions::new(*op.state());
    let qs = quadratic_q_many(op.maxwellian(), gs, angular, &opts, exec)?;
    gs.iter()
        .zip(&qs)
        .map(|(g, q)| {
            let lg = op.apply(g, exec)?;
            let diff = lg.add_scaled(q, -2.0)?;
            Ok(nu_dual_norm(op, &diff) / nu_norm(op, g))
        })
        .collect()
}

/// `|∫ ξ_i Q(f,f)|` relative to the same moment of `|loss|`, for
/// `ξ = 1, v₁, v₂, v₃, |v|²/2`.
pub fn conservation_defect(
    f: &DistributionSnapshot,
    angular: &AngularQuadrature,
    opts: &BilinearOptions,
    exec: &dyn Executor,
) -> Result<[f64; 5]> {
    let q = quadratic_q_self(f, angular, opts, exec)?;
    let m = moments(&q);
    let raw = [m.rho, m.momentum[0], m.momentum[1], m.momentum[2], m.energy];
    let scale = loss_scale(f, opts);
    Ok(core::array::from_fn(|i| if scale[i] > 0.0 { raw[i].abs() / scale[i] } else { raw[i].abs() }))
}
