//! Flux-form right-hand side of the Navier–Stokes-type system.
//!
//! Cells hold conserved variables. Convective fluxes use second-order
//! upwind extrapolation of `U u_a`, pressure and viscous fluxes are central.
//! Face fluxes are shared by both neighbours, so the scheme conserves mass,
//! momentum and energy up to the boundary fluxes.

use alloc::vec::Vec;

use super::field::{to_conserved, to_primitive, Conserved, FluidField, Primitive};
use super::grid::SpatialGrid;
use super::transport::TransportTable;
use crate::error::{invalid, Error, Result};
use crate::exec::Executor;
use crate::maxwellian::FluidState;
use crate::num::sqrt;

/// Constant far-field states at the two ends of the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    pub left: FluidState,
    pub right: FluidState,
}

/// Time derivative of the conserved cells and the net outflow through the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Rate {
    pub cells: Vec<Conserved>,
    /// `∫(F(right end) − F(left end))` over the transverse torus.
    pub outflow: Conserved,
}

const GHOSTS: usize = 2;

/// Ghost state from linearised characteristics about `far`: waves leaving
/// the domain keep their interior amplitude, entering waves carry none.
fn ghost(interior: &Primitive, far: &FluidState, left_end: bool) -> Primitive {
    let (rf, uf, tf) = (far.rho(), far.u(), far.theta());
    let c = sqrt(10.0 * tf / 9.0);
    let dr = (interior[0] - rf) / rf;
    let du = interior[1] - uf[0];
    let dt = (interior[4] - tf) / tf;
    let s = 0.6 * (dr + dt);
    let a2 = dr - s;
    let a3 = 0.5 * (s + du / c);
    let a1 = 0.5 * (s - du / c);
    let speeds = [uf[0] - c, uf[0], uf[0] + c];
    let leaving = |lambda: f64| if left_end { lambda < 0.0 } else { lambda > 0.0 };
    let (a1, a2, a3) = (
        if leaving(speeds[0]) { a1 } else { 0.0 },
        if leaving(speeds[1]) { a2 } else { 0.0 },
        if leaving(speeds[2]) { a3 } else { 0.0 },
    );
    let transverse = if leaving(speeds[1]) { [interior[2], interior[3]] } else { [uf[1], uf[2]] };
    [
        rf * (1.0 + a1 + a2 + a3),
        uf[0] + c * (a3 - a1),
        transverse[0],
        transverse[1],
        tf * (1.0 + 2.0 / 3.0 * (a1 + a3) - a2),
    ]
}

struct Layout<'a> {
    n1: usize,
    n2: usize,
    n3: usize,
    h: [f64; 3],
    pad: &'a [Primitive],
}

impl Layout<'_> {
    /// Padded row `ip` (cell `ip − GHOSTS`), periodic transverse indices.
    #[inline]
    fn at(&self, ip: usize, j: isize, k: isize) -> &Primitive {
        let j = j.rem_euclid(self.n2 as isize) as usize;
        let k = k.rem_euclid(self.n3 as isize) as usize;
        &self.pad[(ip * self.n2 + j) * self.n3 + k]
    }
}

/// Gradients `[∂_b u₁, ∂_b u₂, ∂_b u₃, ∂_b θ]` for `b = 0..3`.
type Grad = [[f64; 4]; 3];

fn cell_gradient(l: &Layout<'_>, ip: usize, j: usize, k: usize) -> Grad {
    let (j, k) = (j as isize, k as isize);
    let mut g = [[0.0; 4]; 3];
    let pairs: [(Option<(&Primitive, &Primitive)>, f64); 3] = [
        (
            if ip >= 1 && ip + 1 < l.n1 + 2 * GHOSTS { Some((l.at(ip + 1, j, k), l.at(ip - 1, j, k))) } else { None },
            l.h[0],
        ),
        (if l.n2 > 1 { Some((l.at(ip, j + 1, k), l.at(ip, j - 1, k))) } else { None }, l.h[1]),
        (if l.n3 > 1 { Some((l.at(ip, j, k + 1), l.at(ip, j, k - 1))) } else { None }, l.h[2]),
    ];
    for (b, (pair, h)) in pairs.iter().enumerate() {
        if let Some((p, m)) = pair {
            for (q, idx) in [1usize, 2, 3, 4].iter().enumerate() {
                g[b][q] = (p[*idx] - m[*idx]) / (2.0 * h);
            }
        }
    }
    g
}

#[inline]
fn pressure(p: &Primitive) -> f64 {
    2.0 / 3.0 * p[0] * p[4]
}

/// Flux across the face between `a` and `b` along `axis`; `am` and `bp`
/// are the outer neighbours used by the upwind extrapolation.
fn face_flux(
    axis: usize,
    am: &Primitive,
    a: &Primitive,
    b: &Primitive,
    bp: &Primitive,
    ga: &Grad,
    gb: &Grad,
    h: f64,
    table: &TransportTable,
) -> Conserved {
    let vel = 1 + axis;
    let uf = 0.5 * (a[vel] + b[vel]);
    let q = |p: &Primitive| -> Conserved {
        let c = to_conserved(p);
        c.map(|x| x * p[vel])
    };
    let mut f = if uf >= 0.0 {
        let (qa, qm) = (q(a), q(am));
        core::array::from_fn(|m| 0.5 * (3.0 * qa[m] - qm[m]))
    } else {
        let (qb, qp) = (q(b), q(bp));
        core::array::from_fn(|m| 0.5 * (3.0 * qb[m] - qp[m]))
    };
    let (pa, pb) = (pressure(a), pressure(b));
    f[vel] += 0.5 * (pa + pb);
    f[4] += 0.5 * (pa * a[vel] + pb * b[vel]);

    let tr = table.eval_clamped(0.5 * (a[4] + b[4]));
    // Face gradient: compact along the axis, averaged across it.
    let mut du = [[0.0; 3]; 3];
    let mut dth = [0.0; 3];
    for d in 0..3 {
        if d == axis {
            for i in 0..3 {
                du[i][d] = (b[1 + i] - a[1 + i]) / h;
            }
            dth[d] = (b[4] - a[4]) / h;
        } else {
            for i in 0..3 {
                du[i][d] = 0.5 * (ga[d][i] + gb[d][i]);
            }
            dth[d] = 0.5 * (ga[d][3] + gb[d][3]);
        }
    }
    let div = du[0][0] + du[1][1] + du[2][2];
    let mut work = 0.0;
    for i in 0..3 {
        let mut tau = tr.mu * (du[i][axis] + du[axis][i]);
        if i == axis {
            tau -= tr.mu * 2.0 / 3.0 * div;
        }
        f[1 + i] -= tau;
        work += 0.5 * (a[1 + i] + b[1 + i]) * tau;
    }
    f[4] -= work + tr.kappa * dth[axis];
    f
}

/// Conserved-variable time derivative of `field`.
pub fn ns_rhs(
    field: &FluidField,
    grid: &SpatialGrid,
    table: &TransportTable,
    boundary: &Boundary,
    exec: &dyn Executor,
) -> Result<Rate> {
    field.check(grid)?;
    let (n1, (n2, n3)) = (grid.n1(), grid.transverse());
    let slab = grid.slab();
    let h = grid.spacings();
    let rows = n1 + 2 * GHOSTS;
    let mut pad: Vec<Primitive> = Vec::with_capacity(rows * slab);
    for ip in 0..rows {
        for c in 0..slab {
            let p = if ip < GHOSTS {
                ghost(&field.primitive(c), &boundary.left, true)
            } else if ip >= n1 + GHOSTS {
                ghost(&field.primitive((n1 - 1) * slab + c), &boundary.right, false)
            } else {
                field.primitive((ip - GHOSTS) * slab + c)
            };
            pad.push(p);
        }
    }
    let (lo, hi) = table.range();
    if let Some(p) = pad.iter().find(|p| !(p[4] >= lo && p[4] <= hi)) {
        return Err(Error::OutOfTable { theta: p[4], lo, hi });
    }
    if pad.iter().any(|p| !(p[0] > 0.0)) {
        return Err(invalid("non-positive density in boundary state"));
    }
    let layout = Layout { n1, n2, n3, h, pad: &pad };

    // Gradients on padded rows 1..rows-1.
    let mut grads = alloc::vec![[[0.0; 4]; 3]; rows * slab];
    {
        let mut flat = alloc::vec![0.0; rows * slab * 12];
        exec.for_rows(&mut flat, slab * 12, &|first, chunk| {
            for (r, row) in chunk.chunks_mut(slab * 12).enumerate() {
                let ip = first / (slab * 12) + r;
                if ip == 0 || ip + 1 == rows {
                    continue;
                }
                for j in 0..n2 {
                    for k in 0..n3 {
                        let g = cell_gradient(&layout, ip, j, k);
                        let o = (j * n3 + k) * 12;
                        for b in 0..3 {
                            row[o + b * 4..o + b * 4 + 4].copy_from_slice(&g[b]);
                        }
                    }
                }
            }
        });
        for (c, g) in grads.iter_mut().enumerate() {
            for b in 0..3 {
                g[b].copy_from_slice(&flat[c * 12 + b * 4..c * 12 + b * 4 + 4]);
            }
        }
    }

    // Line faces 0..=n1; face f sits between cells f−1 and f.
    let mut line_flux = alloc::vec![0.0; (n1 + 1) * slab * 5];
    exec.for_rows(&mut line_flux, slab * 5, &|first, chunk| {
        for (r, row) in chunk.chunks_mut(slab * 5).enumerate() {
            let face = first / (slab * 5) + r;
            let ip = face + GHOSTS - 1;
            for c in 0..slab {
                let (j, k) = ((c / n3) as isize, (c % n3) as isize);
                let f = face_flux(
                    0,
                    layout.at(ip - 1, j, k),
                    layout.at(ip, j, k),
                    layout.at(ip + 1, j, k),
                    layout.at(ip + 2, j, k),
                    &grads[ip * slab + c],
                    &grads[(ip + 1) * slab + c],
                    h[0],
                    table,
                );
                row[c * 5..c * 5 + 5].copy_from_slice(&f);
            }
        }
    });

    let mut out = alloc::vec![0.0; n1 * slab * 5];
    exec.for_rows(&mut out, slab * 5, &|first, chunk| {
        for (r, row) in chunk.chunks_mut(slab * 5).enumerate() {
            let i = first / (slab * 5) + r;
            let ip = i + GHOSTS;
            for c in 0..slab {
                for m in 0..5 {
                    let right = line_flux[((i + 1) * slab + c) * 5 + m];
                    let left = line_flux[(i * slab + c) * 5 + m];
                    row[c * 5 + m] = -(right - left) / h[0];
                }
            }
            for axis in 1..3 {
                let n = if axis == 1 { n2 } else { n3 };
                if n == 1 {
                    continue;
                }
                // Faces on the high side of every cell in this slab.
                let mut faces = alloc::vec![[0.0; 5]; slab];
                for j in 0..n2 {
                    for k in 0..n3 {
                        let (ji, ki) = (j as isize, k as isize);
                        let step = |s: isize| if axis == 1 { (ji + s, ki) } else { (ji, ki + s) };
                        let idx = |s: isize| {
                            let (a, b) = step(s);
                            (a.rem_euclid(n2 as isize) as usize) * n3 + b.rem_euclid(n3 as isize) as usize
                        };
                        let cell = |s: isize| {
                            let (a, b) = step(s);
                            layout.at(ip, a, b)
                        };
                        faces[j * n3 + k] = face_flux(
                            axis,
                            cell(-1),
                            cell(0),
                            cell(1),
                            cell(2),
                            &grads[ip * slab + idx(0)],
                            &grads[ip * slab + idx(1)],
                            h[axis],
                            table,
                        );
                    }
                }
                for j in 0..n2 {
                    for k in 0..n3 {
                        let below = if axis == 1 { ((j + n2 - 1) % n2) * n3 + k } else { j * n3 + (k + n3 - 1) % n3 };
                        let c = j * n3 + k;
                        for m in 0..5 {
                            row[c * 5 + m] -= (faces[c][m] - faces[below][m]) / h[axis];
                        }
                    }
                }
            }
        }
    });

    let area = h[1] * h[2];
    let mut outflow = [0.0; 5];
    for c in 0..slab {
        for m in 0..5 {
            outflow[m] += area * (line_flux[(n1 * slab + c) * 5 + m] - line_flux[c * 5 + m]);
        }
    }
    let cells = out.chunks(5).map(|c| [c[0], c[1], c[2], c[3], c[4]]).collect();
    Ok(Rate { cells, outflow })
}

/// Primitive-variable rates `(ρ_t, u_t, θ_t)` from conserved rates.
pub fn primitive_rate(field: &FluidField, rate: &Rate) -> Vec<Primitive> {
    field
        .cells
        .iter()
        .zip(&rate.cells)
        .map(|(c, d)| {
            let p = to_primitive(c);
            let r = p[0];
            let u = [p[1], p[2], p[3]];
            let ut: [f64; 3] = core::array::from_fn(|i| (d[1 + i] - u[i] * d[0]) / r);
            let kin = 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
            let udot = u[0] * ut[0] + u[1] * ut[1] + u[2] * ut[2];
            let tt = (d[4] - d[0] * (p[4] + kin) - r * udot) / r;
            [d[0], ut[0], ut[1], ut[2], tt]
        })
        .collect()
}
