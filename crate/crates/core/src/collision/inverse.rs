//! Inversion of the linearized operator on the microscopic subspace.

use alloc::vec::Vec;

use super::linearized::LinearizedOperator;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::linalg::{gmres, GmresOptions};
use crate::maxwellian::DistributionSnapshot;
use crate::num::sqrt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Relative residual target on the microscopic subspace.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
    /// Largest accepted `‖P₀h‖/‖h‖` for the right-hand side.
    pub basis_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-8, max_iter: 600, restart: 200, basis_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// `‖P₁(L x − h)‖/‖h‖` reached by the Krylov solver.
    pub projected_residual: f64,
    /// `‖L x − h‖/‖h‖` including the macroscopic leakage of the discrete operator.
    pub full_residual: f64,
}

/// Orthogonal projector onto the microscopic subspace in `φ = g/√M` variables.
pub(crate) struct PhiProjector {
    basis: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl PhiProjector {
    pub(crate) fn new(op: &LinearizedOperator) -> Self {
        let sq = op.sqrt_maxwellian();
        let weights = op.grid().weights().to_vec();
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(5);
        for chi in op.basis().chi() {
            let mut e: Vec<f64> = chi.values().iter().zip(sq).map(|(c, s)| if *s > 0.0 { c / s } else { 0.0 }).collect();
            for _ in 0..2 {
                for q in &basis {
                    let c: f64 = weights.iter().zip(&e).zip(q).map(|((w, a), b)| w * a * b).sum();
                    e.iter_mut().zip(q).for_each(|(x, q)| *x -= c * q);
                }
            }
            let n = sqrt(weights.iter().zip(&e).map(|(w, a)| w * a * a).sum::<f64>());
            e.iter_mut().for_each(|x| *x /= n);
            basis.push(e);
        }
        PhiProjector { basis, weights }
    }

    pub(crate) fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weights.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
    }

    pub(crate) fn coefficients(&self, x: &[f64]) -> [f64; 5] {
        let mut c = [0.0; 5];
        for (j, e) in self.basis.iter().enumerate() {
            c[j] = self.inner(x, e);
        }
        c
    }

    pub(crate) fn project(&self, x: &mut [f64]) {
        for e in &self.basis {
            let c = self.inner(x, e);
            x.iter_mut().zip(e).for_each(|(x, e)| *x -= c * e);
        }
    }
}

/// Solves `L_M x = h` with `x` microscopic.
pub fn invert_lm(
    op: &LinearizedOperator,
    h: &DistributionSnapshot,
    opts: &SolveOptions,
    exec: &dyn Executor,
) -> Result<(DistributionSnapshot, SolveReport)> {
    if !h.grid().same_as(op.grid()) {
        return Err(Error::GridMismatch);
    }
    let n = op.grid().len();
    let sq = op.sqrt_maxwellian();
    let proj = PhiProjector::new(op);
    let rhs: Vec<f64> = h.values().iter().zip(sq).map(|(h, s)| h / s).collect();
    let h_norm = sqrt(proj.inner(&rhs, &rhs));
    if h_norm == 0.0 {
        let zero = DistributionSnapshot::zeros(op.grid().clone());
        return Ok((zero, SolveReport { iterations: 0, projected_residual: 0.0, full_residual: 0.0 }));
    }
    let c = proj.coefficients(&rhs);
    let macro_norm = sqrt(c.iter().map(|c| c * c).sum::<f64>());
    if macro_norm > opts.basis_tol * h_norm {
        return Err(Error::NotMicroscopic { ratio: macro_norm / h_norm });
    }
    let mut b = rhs.clone();
    proj.project(&mut b);
    let nu = op.nu().to_vec();
    let mut scratch = alloc::vec![0.0; n];
    let mut apply = |x: &[f64], out: &mut [f64]| {
        scratch.copy_from_slice(x);
        proj.project(&mut scratch);
        op.apply_phi(&scratch, out, exec).expect("sizes checked");
        proj.project(out);
    };
    let mut precond = |x: &[f64], out: &mut [f64]| {
        for k in 0..x.len() {
            out[k] = -x[k] / nu[k];
        }
        proj.project(out);
    };
    let inner = |a: &[f64], b: &[f64]| proj.inner(a, b);
    let mut x = alloc::vec![0.0; n];
    let rep = gmres(
        &mut apply,
        &mut precond,
        &inner,
        &b,
        &mut x,
        GmresOptions { tol: opts.tol, max_iter: opts.max_iter, restart: opts.restart },
    )?;
    proj.project(&mut x);
    let mut lx = alloc::vec![0.0; n];
    op.apply_phi(&x, &mut lx, exec)?;
    let diff: Vec<f64> = lx.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    let full = sqrt(proj.inner(&diff, &diff)) / h_norm;
    let values = x.iter().zip(sq).map(|(x, s)| x * s).collect();
    Ok((
        DistributionSnapshot::from_parts(op.grid().clone(), values),
        SolveReport { iterations: rep.iterations, projected_residual: rep.relative_residual, full_residual: full },
    ))
}
