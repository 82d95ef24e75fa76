//! Explicit SSP Runge–Kutta time stepping with CFL and positivity checks.

use super::field::{to_primitive, Conserved, FluidField};
use super::grid::SpatialGrid;
use super::rhs::{ns_rhs, Boundary};
use super::transport::TransportTable;
use crate::error::{invalid, Error, Result};
use crate::exec::Executor;
use crate::num::sqrt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLimits {
    /// Advective CFL number.
    pub cfl: f64,
    /// Diffusive CFL number.
    pub cfl_visc: f64,
}

impl Default for StepLimits {
    fn default() -> Self {
        StepLimits { cfl: 0.4, cfl_visc: 0.25 }
    }
}

/// Largest stable step: `min(cfl·h/(|u|+c), cfl_visc·h²/max(μ/ρ, κ/ρ))`.
pub fn max_stable_dt(field: &FluidField, grid: &SpatialGrid, table: &TransportTable, limits: &StepLimits) -> Result<f64> {
    let hmin = grid.spacings().iter().enumerate().fold(f64::INFINITY, |m, (a, h)| {
        let active = a == 0 || (if a == 1 { grid.transverse().0 } else { grid.transverse().1 }) > 1;
        if active {
            m.min(*h)
        } else {
            m
        }
    });
    let mut speed: f64 = 0.0;
    let mut diff: f64 = 0.0;
    for c in &field.cells {
        let p = to_primitive(c);
        let umax = p[1].abs().max(p[2].abs()).max(p[3].abs());
        speed = speed.max(umax + sqrt(10.0 * p[4] / 9.0));
        let tr = table.eval(p[4])?;
        diff = diff.max(tr.mu.max(tr.kappa) / p[0]);
    }
    let adv = limits.cfl * hmin / speed;
    let visc = if diff > 0.0 { limits.cfl_visc * hmin * hmin / diff } else { f64::INFINITY };
    Ok(adv.min(visc))
}

/// One SSP-RK3 step. Returns the new field and `∫ outflow dt` over the step.
pub fn step(
    field: &FluidField,
    grid: &SpatialGrid,
    dt: f64,
    table: &TransportTable,
    boundary: &Boundary,
    limits: &StepLimits,
    exec: &dyn Executor,
) -> Result<(FluidField, Conserved)> {
    if !(dt > 0.0) {
        return Err(invalid("time step must be positive"));
    }
    let limit = max_stable_dt(field, grid, table, limits)?;
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, limit });
    }
    let stage = |base: &FluidField, time: f64| -> Result<(FluidField, Conserved)> {
        let rate = ns_rhs(base, grid, table, boundary, exec)?;
        let cells = base
            .cells
            .iter()
            .zip(&rate.cells)
            .map(|(u, d)| core::array::from_fn(|m| u[m] + dt * d[m]))
            .collect();
        Ok((FluidField { time, cells }, rate.outflow))
    };
    let t0 = field.time;
    let (s1, b0) = stage(field, t0 + dt)?;
    s1.check_positive()?;
    let (e2, b1) = stage(&s1, t0 + 0.5 * dt)?;
    let u2 = FluidField {
        time: t0 + 0.5 * dt,
        cells: field.cells.iter().zip(&e2.cells).map(|(a, b)| core::array::from_fn(|m| 0.75 * a[m] + 0.25 * b[m])).collect(),
    };
    u2.check_positive()?;
    let (e3, b2) = stage(&u2, t0 + dt)?;
    let next = FluidField {
        time: t0 + dt,
        cells: field
            .cells
            .iter()
            .zip(&e3.cells)
            .map(|(a, b)| core::array::from_fn(|m| a[m] / 3.0 + 2.0 * b[m] / 3.0))
            .collect(),
    };
    next.check_positive()?;
    let flux = core::array::from_fn(|m| dt * (b0[m] + b1[m] + 4.0 * b2[m]) / 6.0);
    Ok((next, flux))
}
