//! Assembly and application of the linearized operator in Grad form.
//!
//! With `φ = g/√M` the operator reads
//! `L φ = −ν φ + Σ_k W_k (k2 − k1)(v_j, v_k) φ_k + (C φ)_j`
//! where the sum skips `k = j` and `C` is a 19-point stencil per row that
//! restores the near-diagonal part of the integral lost by dropping the
//! singular node. Stencil weights are fitted so that the corrected rule is
//! exact for quadratic `φ` against the locally windowed kernel.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::kernels::{frequency_radial, kernel_difference, kernel_prefactor};
use crate::consts::PI;
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::maxwellian::{DistributionSnapshot, FluidState, MacroBasis};
use crate::num::{exp, sqrt};
use crate::vec3::{norm2, sub, Vec3};
use crate::velocity_grid::VelocityGrid;

/// How the kernel matrix is held in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelStorage {
    /// Dense up to `dense_limit` nodes, matrix-free beyond.
    Auto,
    Dense,
    MatrixFree,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    pub storage: KernelStorage,
    pub dense_limit: usize,
    /// Width of the near-diagonal window in grid spacings.
    pub window_spacings: f64,
    /// Resolution below which the report flags the grid.
    pub min_nodes_per_width: f64,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            storage: KernelStorage::Auto,
            dense_limit: 5000,
            window_spacings: 2.0,
            min_nodes_per_width: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyReport {
    /// Nodes per thermal width `√(Rθ)`.
    pub nodes_per_width: f64,
    pub under_resolved: bool,
    pub dense: bool,
    /// Thermal widths between the bulk velocity and the nearest grid face.
    pub bound_widths: f64,
}

#[derive(Debug, Clone)]
enum Kernel {
    Dense(Vec<f64>),
    MatrixFree,
}

/// Per-row stencil: centre, `σ_i`, `τ_i`, `β_ij` for pairs (0,1), (0,2), (1,2).
type Stencil = [f64; 10];

/// Discrete linearized collision operator around one Maxwellian.
#[derive(Debug, Clone)]
pub struct LinearizedOperator {
    state: FluidState,
    grid: Arc<VelocityGrid>,
    basis: MacroBasis,
    nu: Vec<f64>,
    sqrt_m: Vec<f64>,
    rel: Vec<Vec3>,
    rel_sq: Vec<f64>,
    half_gauss: Vec<f64>,
    prefactor: f64,
    kernel: Kernel,
    stencils: Vec<Stencil>,
    report: AssemblyReport,
}

#[inline]
fn pair_kernel(ww_j: f64, ww_k: f64, e_j: f64, e_k: f64, r2: f64, c: f64, rt: f64) -> f64 {
    let r = sqrt(r2);
    let s = ww_k - ww_j;
    let k2 = 4.0 * c / r * exp(-r2 / (8.0 * rt) - s * s / (8.0 * rt * r2));
    let k1 = c * r * (e_j * e_k);
    k2 - k1
}

pub fn assemble_linearized(
    state: &FluidState,
    grid: &Arc<VelocityGrid>,
    opts: &AssemblyOptions,
    exec: &dyn Executor,
) -> Result<LinearizedOperator> {
    if !(opts.window_spacings > 0.0) {
        return Err(invalid("window width must be positive"));
    }
    let n = grid.len();
    let rt = state.r_theta();
    let u = state.u();
    let rel: Vec<Vec3> = grid.nodes().iter().map(|&v| sub(v, u)).collect();
    let rel_sq: Vec<f64> = rel.iter().map(|&w| norm2(w)).collect();
    let half_gauss: Vec<f64> = rel_sq.iter().map(|&q| exp(-q / (4.0 * rt))).collect();
    let nu: Vec<f64> = rel_sq.iter().map(|&q| frequency_radial(state.rho(), rt, sqrt(q))).collect();
    let basis = MacroBasis::new(state, grid);
    let sqrt_m: Vec<f64> = basis.maxwellian().values().iter().map(|&m| sqrt(m)).collect();
    let c = kernel_prefactor(state);

    let dense = match opts.storage {
        KernelStorage::Dense => true,
        KernelStorage::MatrixFree => false,
        KernelStorage::Auto => n <= opts.dense_limit,
    };
    let kernel = if dense {
        let mut mat = alloc::vec![0.0; n * n];
        let nodes = grid.nodes();
        exec.for_rows(&mut mat, n, &|first, chunk| {
            for (r, row) in chunk.chunks_mut(n).enumerate() {
                let j = first / n + r;
                let vj = nodes[j];
                for k in 0..n {
                    if k == j {
                        row[k] = 0.0;
                        continue;
                    }
                    let r2 = norm2(sub(nodes[k], vj));
                    row[k] = pair_kernel(rel_sq[j], rel_sq[k], half_gauss[j], half_gauss[k], r2, c, rt);
                }
            }
        });
        Kernel::Dense(mat)
    } else {
        Kernel::MatrixFree
    };

    let stencils = correction_stencils(grid, &rel, c, rt, opts.window_spacings, exec);

    let widths = sqrt(rt);
    let bound_widths = (0..3).map(|i| (grid.bound() - u[i].abs()) / widths).fold(f64::INFINITY, f64::min);
    let nodes_per_width = grid.nodes_per_width(rt);
    let report = AssemblyReport {
        nodes_per_width,
        under_resolved: nodes_per_width < opts.min_nodes_per_width,
        dense,
        bound_widths,
    };
    Ok(LinearizedOperator {
        state: *state,
        grid: grid.clone(),
        basis,
        nu,
        sqrt_m,
        rel,
        rel_sq,
        half_gauss,
        prefactor: c,
        kernel,
        stencils,
        report,
    })
}

/// Exact windowed moments of the kernel row at relative velocity `w`.
///
/// Returns `∫ (k2−k1)(w, d) ψ(d) d^a dd` for `a` in the order
/// `1, d_i, d_i², d0d1, d0d2, d1d2`, using the axial symmetry around `ŵ`.
fn exact_window_moments(w: Vec3, c: f64, rt: f64, s: f64, mu: &(Vec<f64>, Vec<f64>), radial: &(Vec<f64>, Vec<f64>)) -> [f64; 10] {
    let wn = sqrt(norm2(w));
    let e = if wn > 0.0 { [w[0] / wn, w[1] / wn, w[2] / wn] } else { [1.0, 0.0, 0.0] };
    let ww = wn * wn;
    let (mut i0, mut i1, mut i2a, mut i2b) = (0.0, 0.0, 0.0, 0.0);
    for (m, mw) in mu.0.iter().zip(&mu.1) {
        let proj = wn * m;
        for (r, rw) in radial.0.iter().zip(&radial.1) {
            let r2 = r * r;
            let a = 2.0 * proj + r;
            let k2r2 = 4.0 * c * r * exp(-r2 / (8.0 * rt) - a * a / (8.0 * rt));
            let k1r2 = c * r * r2 * exp(-(2.0 * ww + 2.0 * proj * r + r2) / (4.0 * rt));
            let f = mw * rw * (k2r2 - k1r2) * exp(-r2 / (2.0 * s * s));
            i0 += f;
            i1 += f * r * m;
            i2a += f * r2 * m * m;
            i2b += f * r2 * (1.0 - m * m) * 0.5;
        }
    }
    let tp = 2.0 * PI;
    let mut out = [0.0; 10];
    out[0] = tp * i0;
    for i in 0..3 {
        out[1 + i] = tp * i1 * e[i];
        out[4 + i] = tp * (i2a * e[i] * e[i] + i2b * (1.0 - e[i] * e[i]));
    }
    let cross = tp * (i2a - i2b);
    out[7] = cross * e[0] * e[1];
    out[8] = cross * e[0] * e[2];
    out[9] = cross * e[1] * e[2];
    out
}

fn correction_stencils(
    grid: &VelocityGrid,
    rel: &[Vec3],
    c: f64,
    rt: f64,
    window_spacings: f64,
    exec: &dyn Executor,
) -> Vec<Stencil> {
    let h = grid.spacing();
    let s = window_spacings * h;
    let reach = 7.0 * s;
    let mu = crate::quad::gauss_legendre(48);
    let radial = crate::quad::gauss_legendre_on(64, 0.0, reach);
    let m = libm::ceil(reach / h) as i64;
    let h3 = h * h * h;
    let mut lattice: Vec<(Vec3, f64)> = Vec::new();
    for a in -m..=m {
        for b in -m..=m {
            for q in -m..=m {
                if a == 0 && b == 0 && q == 0 {
                    continue;
                }
                let d = [h * a as f64, h * b as f64, h * q as f64];
                let r2 = norm2(d);
                if r2 > reach * reach {
                    continue;
                }
                lattice.push((d, h3 * exp(-r2 / (2.0 * s * s))));
            }
        }
    }
    let p1 = exp(-h * h / (2.0 * s * s));
    let p2 = p1 * p1;
    let n = grid.len();
    let mut flat = alloc::vec![0.0; n * 10];
    exec.for_rows(&mut flat, 10, &|first, chunk| {
        for (r, out) in chunk.chunks_mut(10).enumerate() {
            let j = first / 10 + r;
            let w = rel[j];
            let exact = exact_window_moments(w, c, rt, s, &mu, &radial);
            let mut lat = [0.0; 10];
            for &(d, wt) in &lattice {
                let kv = wt * kernel_difference(w, d, c, rt);
                lat[0] += kv;
                lat[1] += kv * d[0];
                lat[2] += kv * d[1];
                lat[3] += kv * d[2];
                lat[4] += kv * d[0] * d[0];
                lat[5] += kv * d[1] * d[1];
                lat[6] += kv * d[2] * d[2];
                lat[7] += kv * d[0] * d[1];
                lat[8] += kv * d[0] * d[2];
                lat[9] += kv * d[1] * d[2];
            }
            let mut res = [0.0; 10];
            for i in 0..10 {
                res[i] = exact[i] - lat[i];
            }
            let mut sig_sum = 0.0;
            for i in 0..3 {
                let sig = res[4 + i] / (2.0 * h * h * p1);
                out[1 + i] = sig;
                out[4 + i] = res[1 + i] / (2.0 * h * p1);
                sig_sum += sig;
            }
            out[0] = res[0] - 2.0 * p1 * sig_sum;
            for q in 0..3 {
                out[7 + q] = res[7 + q] / (4.0 * h * h * p2);
            }
        }
    });
    flat.chunks(10)
        .map(|c| {
            let mut st = [0.0; 10];
            st.copy_from_slice(c);
            st
        })
        .collect()
}

impl LinearizedOperator {
    pub fn state(&self) -> &FluidState {
        &self.state
    }
    pub fn grid(&self) -> &Arc<VelocityGrid> {
        &self.grid
    }
    pub fn basis(&self) -> &MacroBasis {
        &self.basis
    }
    pub fn maxwellian(&self) -> &DistributionSnapshot {
        self.basis.maxwellian()
    }
    pub fn nu(&self) -> &[f64] {
        &self.nu
    }
    pub fn sqrt_maxwellian(&self) -> &[f64] {
        &self.sqrt_m
    }
    pub fn report(&self) -> &AssemblyReport {
        &self.report
    }
    pub fn is_dense(&self) -> bool {
        matches!(self.kernel, Kernel::Dense(_))
    }

    /// Dense kernel matrix `(k2 − k1)(v_j, v_k)`, zero on the diagonal.
    pub fn dense_kernel(&self) -> Option<&[f64]> {
        match &self.kernel {
            Kernel::Dense(m) => Some(m),
            Kernel::MatrixFree => None,
        }
    }

    /// Kernel entry `(k2 − k1)(v_j, v_k)` for `j ≠ k`, zero for `j = k`.
    pub fn kernel_entry(&self, j: usize, k: usize) -> f64 {
        if j == k {
            return 0.0;
        }
        match &self.kernel {
            Kernel::Dense(m) => m[j * self.grid.len() + k],
            Kernel::MatrixFree => self.pair(j, k),
        }
    }

    #[inline]
    fn pair(&self, j: usize, k: usize) -> f64 {
        let nodes = self.grid.nodes();
        let r2 = norm2(sub(nodes[k], nodes[j]));
        pair_kernel(
            self.rel_sq[j],
            self.rel_sq[k],
            self.half_gauss[j],
            self.half_gauss[k],
            r2,
            self.prefactor,
            self.state.r_theta(),
        )
    }

    /// Stencil entries as `(row, column, weight)` triples.
    pub fn correction_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for j in 0..self.grid.len() {
            self.for_stencil(j, |col, wt| out.push((j, col, wt)));
        }
        out
    }

    fn for_stencil(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        let g = &self.grid;
        let n = g.n_per_axis();
        let (a, b, c) = g.coords(j);
        let st = &self.stencils[j];
        let interior = a >= 1 && b >= 1 && c >= 1 && a + 2 <= n && b + 2 <= n && c + 2 <= n;
        if !interior {
            f(j, st[0] + 2.0 * (st[1] + st[2] + st[3]));
            return;
        }
        f(j, st[0]);
        let strides = [n * n, n, 1];
        for i in 0..3 {
            f(j + strides[i], st[1 + i] + st[4 + i]);
            f(j - strides[i], st[1 + i] - st[4 + i]);
        }
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        for (q, &(p, r)) in pairs.iter().enumerate() {
            let beta = st[7 + q];
            f(j + strides[p] + strides[r], beta);
            f(j - strides[p] - strides[r], beta);
            f(j + strides[p] - strides[r], -beta);
            f(j - strides[p] + strides[r], -beta);
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.grid.len() {
            return Err(invalid("vector length does not match operator size"));
        }
        Ok(())
    }

    /// `Σ_k K_jk y_k` for all rows.
    fn kernel_times(&self, y: &[f64], out: &mut [f64], exec: &dyn Executor) {
        let n = self.grid.len();
        match &self.kernel {
            Kernel::Dense(m) => exec.for_rows(out, 1, &|first, chunk| {
                for (r, o) in chunk.iter_mut().enumerate() {
                    let row = &m[(first + r) * n..(first + r + 1) * n];
                    *o = row.iter().zip(y).map(|(a, b)| a * b).sum();
                }
            }),
            Kernel::MatrixFree => exec.for_rows(out, 1, &|first, chunk| {
                for (r, o) in chunk.iter_mut().enumerate() {
                    let j = first + r;
                    let mut acc = 0.0;
                    for k in 0..n {
                        if k != j && y[k] != 0.0 {
                            acc += self.pair(j, k) * y[k];
                        }
                    }
                    *o = acc;
                }
            }),
        }
    }

    /// Operator in the symmetric variables `φ = g/√M`.
    pub fn apply_phi(&self, phi: &[f64], out: &mut [f64], exec: &dyn Executor) -> Result<()> {
        self.check_len(phi.len())?;
        self.check_len(out.len())?;
        let w = self.grid.weights();
        let y: Vec<f64> = w.iter().zip(phi).map(|(w, p)| w * p).collect();
        self.kernel_times(&y, out, exec);
        for j in 0..phi.len() {
            let mut corr = 0.0;
            self.for_stencil(j, |col, wt| corr += wt * phi[col]);
            out[j] += corr - self.nu[j] * phi[j];
        }
        Ok(())
    }

    /// Transpose of [`Self::apply_phi`] in the plain dot product.
    pub fn apply_phi_transpose(&self, psi: &[f64], out: &mut [f64], exec: &dyn Executor) -> Result<()> {
        self.check_len(psi.len())?;
        self.check_len(out.len())?;
        let w = self.grid.weights();
        self.kernel_times(psi, out, exec);
        for k in 0..psi.len() {
            out[k] = w[k] * out[k] - self.nu[k] * psi[k];
        }
        for j in 0..psi.len() {
            let pj = psi[j];
            self.for_stencil(j, |col, wt| out[col] += wt * pj);
        }
        Ok(())
    }

    /// `L_M g` for a snapshot on the operator's grid.
    pub fn apply(&self, g: &DistributionSnapshot, exec: &dyn Executor) -> Result<DistributionSnapshot> {
        if !g.grid().same_as(&self.grid) {
            return Err(crate::error::Error::GridMismatch);
        }
        let phi: Vec<f64> = g.values().iter().zip(&self.sqrt_m).map(|(g, s)| g / s).collect();
        let mut out = alloc::vec![0.0; phi.len()];
        self.apply_phi(&phi, &mut out, exec)?;
        out.iter_mut().zip(&self.sqrt_m).for_each(|(o, s)| *o *= s);
        Ok(DistributionSnapshot::from_parts(self.grid.clone(), out))
    }

    /// Relative velocity `v_j − u` of every node.
    pub fn relative_velocities(&self) -> &[Vec3] {
        &self.rel
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;

    #[test]
    fn dense_and_matrix_free_agree() {
        let grid = Arc::new(VelocityGrid::new(8, 5.0).unwrap());
        let s = FluidState::new(1.1, [0.2, 0.0, -0.1], 1.2).unwrap();
        let mut o = AssemblyOptions::default();
        o.storage = KernelStorage::Dense;
        let d = assemble_linearized(&s, &grid, &o, &Serial).unwrap();
        o.storage = KernelStorage::MatrixFree;
        let f = assemble_linearized(&s, &grid, &o, &Serial).unwrap();
        let phi: Vec<f64> = (0..grid.len()).map(|i| libm::sin(i as f64 * 0.37)).collect();
        let mut a = alloc::vec![0.0; grid.len()];
        let mut b = alloc::vec![0.0; grid.len()];
        d.apply_phi(&phi, &mut a, &Serial).unwrap();
        f.apply_phi(&phi, &mut b, &Serial).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn dense_kernel_is_exactly_symmetric() {
        let grid = Arc::new(VelocityGrid::new(7, 4.0).unwrap());
        let s = FluidState::new(1.0, [0.1, 0.3, 0.0], 1.0).unwrap();
        let op = assemble_linearized(&s, &grid, &AssemblyOptions::default(), &Serial).unwrap();
        let m = op.dense_kernel().unwrap();
        let n = grid.len();
        for j in 0..n {
            for k in 0..n {
                assert_eq!(m[j * n + k], m[k * n + j], "{j} {k} {:?} {:?}", grid.nodes()[j], grid.nodes()[k]);
            }
        }
    }

    #[test]
    fn transpose_is_consistent() {
        let grid = Arc::new(VelocityGrid::new(8, 5.0).unwrap());
        let s = FluidState::new(1.0, [0.0; 3], 1.5).unwrap();
        let op = assemble_linearized(&s, &grid, &AssemblyOptions::default(), &Serial).unwrap();
        let n = grid.len();
        let x: Vec<f64> = (0..n).map(|i| libm::cos(i as f64 * 0.11)).collect();
        let y: Vec<f64> = (0..n).map(|i| libm::sin(i as f64 * 0.23 + 1.0)).collect();
        let mut ax = alloc::vec![0.0; n];
        let mut aty = alloc::vec![0.0; n];
        op.apply_phi(&x, &mut ax, &Serial).unwrap();
        op.apply_phi_transpose(&y, &mut aty, &Serial).unwrap();
        let lhs: f64 = ax.iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = x.iter().zip(&aty).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }
}
