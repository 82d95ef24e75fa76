//! Conservative fluid fields on a [`SpatialGrid`].

use alloc::vec::Vec;

use super::grid::SpatialGrid;
use crate::error::{invalid, Error, Result};
use crate::maxwellian::FluidState;

/// `(ρ, ρu₁, ρu₂, ρu₃, ρ(θ + |u|²/2))`.
pub type Conserved = [f64; 5];
/// `(ρ, u₁, u₂, u₃, θ)`.
pub type Primitive = [f64; 5];

pub fn to_conserved(p: &Primitive) -> Conserved {
    let (r, u) = (p[0], [p[1], p[2], p[3]]);
    let kin = 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    [r, r * u[0], r * u[1], r * u[2], r * (p[4] + kin)]
}

pub fn to_primitive(c: &Conserved) -> Primitive {
    let r = c[0];
    let u = [c[1] / r, c[2] / r, c[3] / r];
    let kin = 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    [r, u[0], u[1], u[2], c[4] / r - kin]
}

pub fn primitive_of(s: &FluidState) -> Primitive {
    let u = s.u();
    [s.rho(), u[0], u[1], u[2], s.theta()]
}

/// Fluid state per cell and a time stamp.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidField {
    pub time: f64,
    pub cells: Vec<Conserved>,
}

impl FluidField {
    pub fn from_fn(grid: &SpatialGrid, time: f64, f: impl Fn(f64, f64, f64) -> Result<FluidState>) -> Result<Self> {
        let (n2, n3) = grid.transverse();
        let mut cells = Vec::with_capacity(grid.len());
        for (i, &x) in grid.x().iter().enumerate() {
            for j in 0..n2 {
                for k in 0..n3 {
                    debug_assert_eq!(cells.len(), grid.index(i, j, k));
                    let (y, z) = grid.transverse_coords(j, k);
                    cells.push(to_conserved(&primitive_of(&f(x, y, z)?)));
                }
            }
        }
        Ok(FluidField { time, cells })
    }

    pub fn check(&self, grid: &SpatialGrid) -> Result<()> {
        if self.cells.len() != grid.len() {
            return Err(invalid("field does not match the grid"));
        }
        self.check_positive()
    }

    /// Fails with the first cell where `ρ ≤ 0` or `θ ≤ 0`.
    pub fn check_positive(&self) -> Result<()> {
        for (node, c) in self.cells.iter().enumerate() {
            let p = to_primitive(c);
            if !(p[0] > 0.0 && p[4] > 0.0) {
                return Err(Error::Positivity { time: self.time, node });
            }
        }
        Ok(())
    }

    pub fn primitive(&self, cell: usize) -> Primitive {
        to_primitive(&self.cells[cell])
    }

    pub fn state(&self, cell: usize) -> Result<FluidState> {
        let p = self.primitive(cell);
        FluidState::new(p[0], [p[1], p[2], p[3]], p[4])
    }

    /// `Σ U · vol` per conserved component.
    pub fn totals(&self, grid: &SpatialGrid) -> Conserved {
        let vol = grid.cell_volume();
        let mut t = [0.0; 5];
        for c in &self.cells {
            for m in 0..5 {
                t[m] += c[m] * vol;
            }
        }
        t
    }

    /// Transverse average of each line slab, as primitive variables.
    pub fn slab_means(&self, grid: &SpatialGrid) -> Vec<Primitive> {
        let s = grid.slab();
        self.cells
            .chunks(s)
            .map(|chunk| {
                let mut acc = [0.0; 5];
                for c in chunk {
                    for m in 0..5 {
                        acc[m] += c[m];
                    }
                }
                to_primitive(&acc.map(|v| v / s as f64))
            })
            .collect()
    }
}
