//! One function per subcommand.

pub mod collision_verify;
pub mod decay_report;
pub mod evolve;
pub mod profile;
pub mod transport;

use std::sync::Arc;

use boltzwave_core::collision::{AngularQuadrature, TransportOptions};
use boltzwave_core::rarefaction::RarefactionConfig;
use boltzwave_core::{FluidState, VelocityGrid};

use crate::config::Config;
use crate::error::{LabError, LabResult};
use crate::exec::Threads;
use crate::manifest::RunRecord;

/// Everything a command needs besides its own config keys.
pub struct Context<'a> {
    pub config: &'a Config,
    pub record: &'a mut RunRecord,
    pub exec: Threads,
    pub seed: u64,
}

pub(crate) fn read_state(cfg: &Config, section: &str, default: (f64, [f64; 3], f64)) -> LabResult<FluidState> {
    let rho = cfg.get(section, "rho", default.0)?;
    let u = cfg.list(section, "u", &default.1)?;
    let theta = cfg.get(section, "theta", default.2)?;
    if u.len() != 3 {
        return Err(LabError::Usage(format!("{section}.u needs three components")));
    }
    Ok(FluidState::new(rho, [u[0], u[1], u[2]], theta)?)
}

/// `[velocity] n, bound_widths`: grid centred on `state.u` (bound measured
/// in thermal widths of `state`, plus the largest velocity component).
pub(crate) fn read_velocity_grid(cfg: &Config, state: &FluidState) -> LabResult<Arc<VelocityGrid>> {
    let n = cfg.get("velocity", "n", 16usize)?;
    let widths = cfg.get("velocity", "bound_widths", 8.0)?;
    let shift = state.u().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    Ok(Arc::new(VelocityGrid::new(n, widths * state.r_theta().sqrt() + shift)?))
}

pub(crate) fn read_angular(cfg: &Config) -> LabResult<AngularQuadrature> {
    Ok(AngularQuadrature::new(cfg.get("angular", "polar", 8usize)?, cfg.get("angular", "azimuth", 16usize)?)?)
}

pub(crate) fn read_transport_options(cfg: &Config) -> LabResult<TransportOptions> {
    let mut o = TransportOptions::default();
    o.n_per_axis = cfg.get("velocity", "n", o.n_per_axis)?;
    o.bound_widths = cfg.get("velocity", "bound_widths", o.bound_widths)?;
    o.solve.tol = cfg.get("solver", "tol", o.solve.tol)?;
    o.solve.max_iter = cfg.get("solver", "max_iter", o.solve.max_iter)?;
    Ok(o)
}

/// `[wave]`: right state, then either `strength` or an explicit left state.
pub(crate) fn read_wave(cfg: &Config) -> LabResult<RarefactionConfig> {
    let right = read_state_prefixed(cfg, "right", (1.0, 0.0, 1.0))?;
    let epsilon = cfg.get("wave", "epsilon", 0.05)?;
    let q = cfg.get("wave", "q", 2.0)?;
    if cfg.has("wave", "left_rho") {
        let left = read_state_prefixed(cfg, "left", (1.0, 0.0, 1.0))?;
        Ok(RarefactionConfig::from_states(left, right, epsilon, q)?)
    } else {
        let strength = cfg.get("wave", "strength", 0.2)?;
        Ok(RarefactionConfig::from_strength(right, strength, epsilon, q)?)
    }
}

fn read_state_prefixed(cfg: &Config, side: &str, d: (f64, f64, f64)) -> LabResult<FluidState> {
    let rho = cfg.get("wave", &format!("{side}_rho"), d.0)?;
    let u1 = cfg.get("wave", &format!("{side}_u1"), d.1)?;
    let theta = cfg.get("wave", &format!("{side}_theta"), d.2)?;
    Ok(FluidState::new(rho, [u1, 0.0, 0.0], theta)?)
}

pub(crate) fn record_wave(rec: &mut RunRecord, wave: &RarefactionConfig) {
    let (l, r) = (wave.left(), wave.right());
    for (name, v) in [
        ("wave_left_rho", l.rho()),
        ("wave_left_u1", l.u()[0]),
        ("wave_left_theta", l.theta()),
        ("wave_right_rho", r.rho()),
        ("wave_right_u1", r.u()[0]),
        ("wave_right_theta", r.theta()),
        ("wave_strength", wave.strength()),
        ("wave_epsilon", wave.epsilon()),
        ("wave_q", wave.q()),
        ("wave_kq", wave.kq()),
        ("wave_w_minus", wave.w_minus()),
        ("wave_w_plus", wave.w_plus()),
    ] {
        rec.constant(name, v);
    }
}
