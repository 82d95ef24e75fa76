//! Coercivity constant of the linearized operator on the microscopic subspace.

use alloc::vec::Vec;

use super::linearized::LinearizedOperator;
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::linalg::lanczos_extremes;
use crate::maxwellian::FluidState;
use crate::num::sqrt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationOptions {
    pub max_steps: usize,
    /// Relative change of the smallest Ritz value accepted as converged.
    pub tol: f64,
}

impl Default for DissipationOptions {
    fn default() -> Self {
        DissipationOptions { max_steps: 300, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationReport {
    /// Largest `σ` with `−⟨g, L g⟩_{M*} ≥ σ ⟨ν g, g⟩_{M*}` on the subspace.
    pub sigma: f64,
    /// Largest eigenvalue of the same pencil, for reference.
    pub upper: f64,
    pub steps: usize,
    pub last_change: f64,
}

/// Smallest eigenvalue of the pencil `(−L, ν)` under the weight `1/M*`,
/// restricted to `g ⊥ χ_j`. Only the symmetric part of the discrete
/// operator enters the quadratic form.
pub fn dissipation_constant(
    op: &LinearizedOperator,
    weight: &FluidState,
    opts: &DissipationOptions,
    exec: &dyn Executor,
) -> Result<DissipationReport> {
    let grid = op.grid();
    let n = grid.len();
    let w = grid.weights();
    let sq = op.sqrt_maxwellian();
    let nu = op.nu();
    let mstar: Vec<f64> = grid.nodes().iter().map(|&v| weight.maxwellian(v)).collect();
    if mstar.iter().any(|m| !(*m > 0.0)) {
        return Err(invalid("weight Maxwellian underflows on the grid"));
    }
    let omega: Vec<f64> = w.iter().zip(&mstar).map(|(w, m)| w / m).collect();
    let t: Vec<f64> = omega.iter().zip(nu).map(|(o, n)| sqrt(o * n)).collect();

    // Constraint vectors in x = T g coordinates, orthonormalized.
    let mut cons: Vec<Vec<f64>> = Vec::new();
    for chi in op.basis().chi() {
        let m = op.maxwellian().values();
        let mut a: Vec<f64> = (0..n).map(|k| w[k] * chi.values()[k] / (m[k] * t[k])).collect();
        for _ in 0..2 {
            for q in &cons {
                let c: f64 = a.iter().zip(q).map(|(a, q)| a * q).sum();
                a.iter_mut().zip(q).for_each(|(a, q)| *a -= c * q);
            }
        }
        let nrm = sqrt(a.iter().map(|a| a * a).sum::<f64>());
        a.iter_mut().for_each(|a| *a /= nrm);
        cons.push(a);
    }
    let project = |x: &mut [f64]| {
        for q in &cons {
            let c: f64 = x.iter().zip(q).map(|(a, q)| a * q).sum();
            x.iter_mut().zip(q).for_each(|(x, q)| *x -= c * q);
        }
    };

    let mut phi = alloc::vec![0.0; n];
    let mut a_phi = alloc::vec![0.0; n];
    let mut psi = alloc::vec![0.0; n];
    let mut at_psi = alloc::vec![0.0; n];
    let mut apply = |x: &[f64], out: &mut [f64]| {
        // G x = −T⁻¹ Ω S A S⁻¹ T⁻¹ x
        for k in 0..n {
            phi[k] = x[k] / (t[k] * sq[k]);
        }
        op.apply_phi(&phi, &mut a_phi, exec).expect("sizes checked");
        // Gᵀ x = −T⁻¹ S⁻¹ Aᵀ S Ω T⁻¹ x
        for k in 0..n {
            psi[k] = sq[k] * omega[k] * x[k] / t[k];
        }
        op.apply_phi_transpose(&psi, &mut at_psi, exec).expect("sizes checked");
        for k in 0..n {
            let g = -omega[k] * sq[k] * a_phi[k] / t[k];
            let gt = -at_psi[k] / (t[k] * sq[k]);
            out[k] = 0.5 * (g + gt);
        }
    };
    let start: Vec<f64> = (0..n).map(|k| 1.0 + 0.5 * libm::sin(0.7 * k as f64 + 0.3)).collect();
    let rep = lanczos_extremes(&mut apply, &project, &start, opts.max_steps, opts.tol)?;
    Ok(DissipationReport { sigma: rep.smallest, upper: rep.largest, steps: rep.steps, last_change: rep.last_change })
}
