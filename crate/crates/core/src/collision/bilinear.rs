//! Direct quadrature of the bilinear hard-sphere collision operator.
//!
//! Post-collision values come from tricubic Lagrange interpolation of
//! `f/M_w`, where `M_w` is a weight Maxwellian chosen wider than the
//! inputs. Because `M_w(v')M_w(v*') = M_w(v)M_w(v*)` along the collision map,
//! the weight factors out of the angular integral. Pairs are restricted to
//! the ball `|v−u_w|² + |v*−u_w|² ≤ E`, which the collision map preserves,
//! so truncation does not bias the conservation laws.

use alloc::vec::Vec;

use super::angular::AngularQuadrature;
use crate::consts::PI;
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::maxwellian::{moments, DistributionSnapshot, FluidState};
use crate::num::{cos, floor, ln, sqrt};
use crate::vec3::{norm2, sub, Vec3};
use crate::velocity_grid::VelocityGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearOptions {
    /// Maxwellian that factors the Gaussian decay out of the interpolation.
    pub weight: FluidState,
    /// Pairs whose weight product falls below this fraction of the peak are skipped.
    pub tail_tol: f64,
    /// Band-limited refinement factor applied before interpolating (1 = off).
    pub refine: usize,
}

impl BilinearOptions {
    pub fn new(weight: FluidState) -> Self {
        BilinearOptions { weight, tail_tol: 1e-12, refine: 1 }
    }

    /// Weight built from the moments of `Σ|f|`, temperature scaled by `widen`.
    pub fn covering(inputs: &[&DistributionSnapshot], widen: f64) -> Result<Self> {
        let first = inputs.first().ok_or_else(|| invalid("no inputs"))?;
        let mut acc = alloc::vec![0.0; first.values().len()];
        for f in inputs {
            first.check_same_grid(f)?;
            acc.iter_mut().zip(f.values()).for_each(|(a, v)| *a += v.abs());
        }
        let total = DistributionSnapshot::new(first.grid().clone(), acc)?;
        let m = moments(&total);
        if !(m.rho > 0.0) {
            return Err(invalid("inputs vanish; no covering weight exists"));
        }
        let u = [m.momentum[0] / m.rho, m.momentum[1] / m.rho, m.momentum[2] / m.rho];
        let theta = (m.energy / m.rho - 0.5 * norm2(u)) / (1.5 * crate::consts::R_GAS);
        Ok(BilinearOptions::new(FluidState::new(m.rho, u, theta * widen)?))
    }

    /// Squared radius of the energy ball.
    pub fn energy_radius_sq(&self, grid: &VelocityGrid) -> f64 {
        let u = self.weight.u();
        let reach = grid.bound() - u.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let e = 2.0 * self.weight.r_theta() * ln(1.0 / self.tail_tol);
        e.min(reach * reach)
    }
}

/// Cubic Lagrange weights for nodes −1, 0, 1, 2 at offset `t`.
#[inline]
fn lagrange4(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

#[derive(Clone, Copy)]
struct Stencil {
    base: usize,
    w: [[f64; 4]; 3],
}

struct Lattice {
    n: usize,
    x0: f64,
    inv_h: f64,
}

impl Lattice {
    #[inline]
    fn stencil(&self, p: Vec3) -> Stencil {
        let mut idx = [0usize; 3];
        let mut w = [[0.0; 4]; 3];
        let hi = (self.n - 3) as f64;
        for a in 0..3 {
            let x = (p[a] - self.x0) * self.inv_h;
            let i = floor(x).clamp(1.0, hi);
            idx[a] = i as usize - 1;
            w[a] = lagrange4(x - i);
        }
        Stencil { base: (idx[0] * self.n + idx[1]) * self.n + idx[2], w }
    }

    #[inline]
    fn interp(&self, field: &[f64], s: &Stencil) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for p in 0..4 {
            let mut plane = 0.0;
            for q in 0..4 {
                let o = s.base + p * n * n + q * n;
                let line = &field[o..o + 4];
                let wz = &s.w[2];
                plane += s.w[1][q] * (wz[0] * line[0] + wz[1] * line[1] + wz[2] * line[2] + wz[3] * line[3]);
            }
            total += s.w[0][p] * plane;
        }
        total
    }
}

enum Pairing<'a> {
    SelfPair,
    /// Partner ratios on the grid and on the interpolation lattice.
    Partners(&'a [Vec<f64>], &'a [Vec<f64>]),
}

/// Periodic band-limited interpolation weights from `n` nodes of spacing
/// `h` to `r(n−1)+1` nodes of spacing `h/r` over the same interval.
fn refinement_matrix(n: usize, r: usize) -> Vec<f64> {
    let m = r * (n - 1) + 1;
    let half = (n - 1) / 2;
    let mut out = alloc::vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            // Offset in coarse spacings.
            let x = i as f64 / r as f64 - j as f64;
            let mut d = 1.0;
            for k in 1..=half {
                d += 2.0 * cos(2.0 * PI * k as f64 * x / n as f64);
            }
            if n % 2 == 0 {
                d += cos(PI * x);
            }
            out[i * n + j] = d / n as f64;
        }
    }
    out
}

/// Interpolation lattice, either the grid itself or a band-limited refinement.
struct Refiner {
    lattice: Lattice,
    n: usize,
    r: usize,
    matrix: Vec<f64>,
    weight_fine: Vec<f64>,
}

impl Refiner {
    fn new(grid: &VelocityGrid, opts: &BilinearOptions) -> Result<Self> {
        let (n, r) = (grid.n_per_axis(), opts.refine);
        if r == 0 {
            return Err(invalid("refinement factor must be at least 1"));
        }
        let m = r * (n - 1) + 1;
        let h = grid.spacing() / r as f64;
        let x0 = grid.axis()[0];
        let lattice = Lattice { n: m, x0, inv_h: 1.0 / h };
        if r == 1 {
            return Ok(Refiner { lattice, n, r, matrix: Vec::new(), weight_fine: Vec::new() });
        }
        let axis: Vec<f64> = (0..m).map(|i| x0 + h * i as f64).collect();
        let mut weight_fine = Vec::with_capacity(m * m * m);
        for a in &axis {
            for b in &axis {
                for c in &axis {
                    weight_fine.push(opts.weight.maxwellian([*a, *b, *c]));
                }
            }
        }
        Ok(Refiner { lattice, n, r, matrix: refinement_matrix(n, r), weight_fine })
    }

    /// `f/M_w` on the lattice; `coarse` is the same ratio on the grid.
    fn ratio(&self, f: &DistributionSnapshot, coarse: Vec<f64>) -> Vec<f64> {
        if self.r == 1 {
            return coarse;
        }
        let (n, m) = (self.n, self.lattice.n);
        let r = &self.matrix;
        // Refine the last axis, then the middle one, then the first.
        let src = f.values();
        let mut a = alloc::vec![0.0; n * n * m];
        for p in 0..n * n {
            for i in 0..m {
                a[p * m + i] = (0..n).map(|k| r[i * n + k] * src[p * n + k]).sum();
            }
        }
        let mut b = alloc::vec![0.0; n * m * m];
        for p in 0..n {
            for i in 0..m {
                for q in 0..m {
                    b[(p * m + i) * m + q] = (0..n).map(|k| r[i * n + k] * a[(p * n + k) * m + q]).sum();
                }
            }
        }
        let mut c = alloc::vec![0.0; m * m * m];
        for i in 0..m {
            for pq in 0..m * m {
                c[i * m * m + pq] = (0..n).map(|k| r[i * n + k] * b[k * m * m + pq]).sum();
            }
        }
        c.iter().zip(&self.weight_fine).map(|(v, w)| if *w > 0.0 { v / w } else { 0.0 }).collect()
    }
}

fn ratio(f: &DistributionSnapshot, mw: &[f64]) -> Vec<f64> {
    f.values().iter().zip(mw).map(|(v, m)| if *m > 0.0 { v / m } else { 0.0 }).collect()
}

const BLOCKS: usize = 16;

#[allow(clippy::too_many_arguments)]
fn collide(
    grid: &VelocityGrid,
    lattice: &Lattice,
    phi_f: &[f64],
    fine_f: &[f64],
    pairing: Pairing<'_>,
    angular: &AngularQuadrature,
    opts: &BilinearOptions,
    mw: &[f64],
    exec: &dyn Executor,
) -> Vec<f64> {
    let n = grid.len();
    let outputs = match &pairing {
        Pairing::SelfPair => 1,
        Pairing::Partners(g, _) => g.len(),
    };
    let e_max = opts.energy_radius_sq(grid);
    let uw = opts.weight.u();
    let nodes = grid.nodes();
    let weights = grid.weights();
    let energy: Vec<f64> = nodes.iter().map(|&v| norm2(sub(v, uw))).collect();
    let mut ball: Vec<usize> = (0..n).filter(|&k| energy[k] <= e_max).collect();
    ball.sort_by(|a, b| energy[*a].partial_cmp(&energy[*b]).unwrap_or(core::cmp::Ordering::Equal).then(a.cmp(b)));
    let cosp = angular.cos_polar();
    let sinp = angular.sin_polar();
    let wp = angular.polar_weights();
    let az = angular.azimuth();
    let az_w = angular.azimuth_weight();

    // Each unordered pair is visited once, in block `i mod BLOCKS` of its
    // lower-energy member, and scattered into both rows. The block count is
    // fixed so the summation order does not depend on the executor.
    let blocks = BLOCKS.min(ball.len().max(1));
    let width = n * outputs;
    let mut partial = alloc::vec![0.0; blocks * width];
    exec.for_rows(&mut partial, width, &|first, chunk| {
        let mut gain = alloc::vec![0.0; outputs];
        for (r, acc) in chunk.chunks_mut(width).enumerate() {
            let block = first / width + r;
            for i in (block..ball.len()).step_by(blocks) {
                let j = ball[i];
                let v = nodes[j];
                for &k in &ball[i + 1..] {
                    if energy[j] + energy[k] > e_max {
                        break;
                    }
                    let vs = nodes[k];
                    let rel = sub(v, vs);
                    let speed = sqrt(norm2(rel));
                    let e = [rel[0] / speed, rel[1] / speed, rel[2] / speed];
                    let (a, b) = crate::vec3::frame(e);
                    gain.iter_mut().for_each(|g| *g = 0.0);
                    for p in 0..cosp.len() {
                        let along = speed * cosp[p];
                        let wgt = wp[p] * along;
                        for &(cq, sq) in az {
                            let mut om = [0.0; 3];
                            for i in 0..3 {
                                om[i] = cosp[p] * e[i] + sinp[p] * (cq * a[i] + sq * b[i]);
                            }
                            let post = [v[0] - along * om[0], v[1] - along * om[1], v[2] - along * om[2]];
                            let post_s = [vs[0] + along * om[0], vs[1] + along * om[1], vs[2] + along * om[2]];
                            let s1 = lattice.stencil(post);
                            let s2 = lattice.stencil(post_s);
                            let f1 = lattice.interp(fine_f, &s1);
                            let f2 = lattice.interp(fine_f, &s2);
                            match &pairing {
                                Pairing::SelfPair => gain[0] += wgt * 2.0 * f1 * f2,
                                Pairing::Partners(_, gs) => {
                                    for (gi, g) in gs.iter().enumerate() {
                                        let g1 = lattice.interp(g, &s1);
                                        let g2 = lattice.interp(g, &s2);
                                        gain[gi] += wgt * (f2 * g1 + f1 * g2);
                                    }
                                }
                            }
                        }
                    }
                    let loss_f = PI * speed;
                    let (wj, wk) = (weights[j] * mw[j], weights[k] * mw[k]);
                    for gi in 0..outputs {
                        let loss = match &pairing {
                            Pairing::SelfPair => loss_f * 2.0 * phi_f[k] * phi_f[j],
                            Pairing::Partners(gs, _) => loss_f * (phi_f[k] * gs[gi][j] + phi_f[j] * gs[gi][k]),
                        };
                        let bracket = 0.5 * (az_w * gain[gi] - loss);
                        acc[j * outputs + gi] += wk * bracket;
                        acc[k * outputs + gi] += wj * bracket;
                    }
                }
            }
        }
    });
    let mut out = alloc::vec![0.0; width];
    for part in partial.chunks(width) {
        out.iter_mut().zip(part).for_each(|(o, p)| *o += p);
    }
    for j in 0..n {
        for gi in 0..outputs {
            out[j * outputs + gi] *= mw[j];
        }
    }
    out
}

fn split(grid: &alloc::sync::Arc<VelocityGrid>, flat: Vec<f64>, outputs: usize) -> Vec<DistributionSnapshot> {
    let n = grid.len();
    (0..outputs)
        .map(|i| DistributionSnapshot::from_parts(grid.clone(), (0..n).map(|j| flat[j * outputs + i]).collect()))
        .collect()
}

/// `Q(f, g)` for several `g` sharing the same `f`.
pub fn quadratic_q_many(
    f: &DistributionSnapshot,
    gs: &[DistributionSnapshot],
    angular: &AngularQuadrature,
    opts: &BilinearOptions,
    exec: &dyn Executor,
) -> Result<Vec<DistributionSnapshot>> {
    if gs.is_empty() {
        return Ok(Vec::new());
    }
    for g in gs {
        f.check_same_grid(g)?;
    }
    let grid = f.grid();
    let mw: Vec<f64> = grid.nodes().iter().map(|&v| opts.weight.maxwellian(v)).collect();
    let phi_f = ratio(f, &mw);
    let phi_g: Vec<Vec<f64>> = gs.iter().map(|g| ratio(g, &mw)).collect();
    let refiner = Refiner::new(grid, opts)?;
    let fine_f = refiner.ratio(f, phi_f.clone());
    let fine_g: Vec<Vec<f64>> = gs.iter().zip(&phi_g).map(|(g, p)| refiner.ratio(g, p.clone())).collect();
    let flat = collide(grid, &refiner.lattice, &phi_f, &fine_f, Pairing::Partners(&phi_g, &fine_g), angular, opts, &mw, exec);
    Ok(split(grid, flat, gs.len()))
}

/// `Q(f, g)`.
pub fn quadratic_q(
    f: &DistributionSnapshot,
    g: &DistributionSnapshot,
    angular: &AngularQuadrature,
    opts: &BilinearOptions,
    exec: &dyn Executor,
) -> Result<DistributionSnapshot> {
    let mut v = quadratic_q_many(f, core::slice::from_ref(g), angular, opts, exec)?;
    Ok(v.remove(0))
}

/// `Q(f, f)`, interpolating `f` once per post-collision point.
pub fn quadratic_q_self(
    f: &DistributionSnapshot,
    angular: &AngularQuadrature,
    opts: &BilinearOptions,
    exec: &dyn Executor,
) -> Result<DistributionSnapshot> {
    let grid = f.grid();
    let mw: Vec<f64> = grid.nodes().iter().map(|&v| opts.weight.maxwellian(v)).collect();
    let phi_f = ratio(f, &mw);
    let refiner = Refiner::new(grid, opts)?;
    let fine_f = refiner.ratio(f, phi_f.clone());
    let flat = collide(grid, &refiner.lattice, &phi_f, &fine_f, Pairing::SelfPair, angular, opts, &mw, exec);
    Ok(split(grid, flat, 1).remove(0))
}

/// `∫ |ξ_i| · (loss part of Q(f,f))` for the five invariants, restricted
/// to the same energy ball. Scale for conservation errors.
pub fn loss_scale(f: &DistributionSnapshot, opts: &BilinearOptions) -> [f64; 5] {
    let grid = f.grid();
    let e_max = opts.energy_radius_sq(grid);
    let uw = opts.weight.u();
    let nodes = grid.nodes();
    let w = grid.weights();
    let energy: Vec<f64> = nodes.iter().map(|&v| norm2(sub(v, uw))).collect();
    let fv = f.values();
    let mut out = [0.0; 5];
    for j in 0..grid.len() {
        if energy[j] > e_max {
            continue;
        }
        let mut loss = 0.0;
        for k in 0..grid.len() {
            if k != j && energy[j] + energy[k] <= e_max {
                loss += w[k] * PI * sqrt(norm2(sub(nodes[j], nodes[k]))) * fv[k];
            }
        }
        let a = w[j] * (loss * fv[j]).abs();
        let v = nodes[j];
        out[0] += a;
        out[1] += a * v[0].abs();
        out[2] += a * v[1].abs();
        out[3] += a * v[2].abs();
        out[4] += a * 0.5 * norm2(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use alloc::sync::Arc;

    #[test]
    fn cubic_weights_reproduce_cubics() {
        for &t in &[0.0, 0.25, 0.5, 0.9, -0.3, 1.4] {
            let w = lagrange4(t);
            for p in 0..4 {
                let exact = libm::pow(t, p as f64);
                let approx: f64 = (0..4).map(|i| w[i] * libm::pow(i as f64 - 1.0, p as f64)).sum();
                assert!((exact - approx).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn refinement_reproduces_nodes_and_trig_modes() {
        for (n, r) in [(8, 3), (9, 2)] {
            let m = refinement_matrix(n, r);
            let fine = r * (n - 1) + 1;
            for i in (0..fine).step_by(r) {
                for j in 0..n {
                    let want = if i / r == j { 1.0 } else { 0.0 };
                    assert!((m[i * n + j] - want).abs() < 1e-13);
                }
            }
            let mode = |x: f64| libm::cos(2.0 * PI * 2.0 * x / n as f64 + 0.3);
            for i in 0..fine {
                let got: f64 = (0..n).map(|j| m[i * n + j] * mode(j as f64)).sum();
                assert!((got - mode(i as f64 / r as f64)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn maxwellian_is_equilibrium_with_own_weight() {
        let grid = Arc::new(VelocityGrid::new(10, 6.0).unwrap());
        let s = FluidState::new(1.0, [0.2, 0.0, -0.1], 1.2).unwrap();
        let m = crate::maxwellian::maxwellian_at(&s, &grid);
        let ang = AngularQuadrature::new(4, 8).unwrap();
        let q = quadratic_q_self(&m, &ang, &BilinearOptions::new(s), &Serial).unwrap();
        assert!(q.max_abs() < 1e-14 * m.max_abs());
    }

    #[test]
    fn symmetric_in_arguments_bit_for_bit() {
        let grid = Arc::new(VelocityGrid::new(8, 5.0).unwrap());
        let w = FluidState::new(1.0, [0.0; 3], 1.5).unwrap();
        let f = DistributionSnapshot::from_fn(grid.clone(), |v| (1.0 + 0.2 * v[0]) * w.maxwellian(v) * 0.5);
        let g = DistributionSnapshot::from_fn(grid.clone(), |v| (0.3 + v[1] * v[2]) * w.maxwellian(v));
        let ang = AngularQuadrature::new(3, 5).unwrap();
        for refine in [1, 3] {
            let o = BilinearOptions { refine, ..BilinearOptions::new(w) };
            let a = quadratic_q(&f, &g, &ang, &o, &Serial).unwrap();
            let b = quadratic_q(&g, &f, &ang, &o, &Serial).unwrap();
            assert_eq!(a.values(), b.values(), "refine {refine}");
        }
    }
}
