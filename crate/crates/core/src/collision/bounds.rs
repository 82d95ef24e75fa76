//! Both sides of the weighted bilinear estimate for `Q`.

use super::angular::AngularQuadrature;
use super::bilinear::{quadratic_q, BilinearOptions};
use super::kernels::collision_frequency;
use crate::error::Result;
use crate::exec::Executor;
use crate::maxwellian::{DistributionSnapshot, FluidState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBoundReport {
    /// `∫ ν⁻¹ Q(f,g)² / M̃`.
    pub lhs: f64,
    /// `∫ν f²/M̃ · ∫g²/M̃ + ∫f²/M̃ · ∫ν g²/M̃`.
    pub rhs: f64,
    /// `lhs / rhs`, or 0 when both sides vanish.
    pub ratio: f64,
}

/// Evaluates the estimate for one pair under the weight `reference`.
/// `ν` is the collision frequency of `reference`.
pub fn estimate_q_bound(
    f: &DistributionSnapshot,
    g: &DistributionSnapshot,
    reference: &FluidState,
    angular: &AngularQuadrature,
    opts: &BilinearOptions,
    exec: &dyn Executor,
) -> Result<QBoundReport> {
    f.check_same_grid(g)?;
    let grid = f.grid();
    let q = quadratic_q(f, g, angular, opts, exec)?;
    let (mut lhs, mut nf, mut f2, mut ng, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (k, (&v, &w)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
        let m = reference.maxwellian(v);
        if !(m > 0.0) {
            continue;
        }
        let nu = collision_frequency(reference, v);
        let (fv, gv, qv) = (f.values()[k], g.values()[k], q.values()[k]);
        lhs += w * qv * qv / (nu * m);
        nf += w * nu * fv * fv / m;
        f2 += w * fv * fv / m;
        ng += w * nu * gv * gv / m;
        g2 += w * gv * gv / m;
    }
    let rhs = nf * g2 + f2 * ng;
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok(QBoundReport { lhs, rhs, ratio })
}
