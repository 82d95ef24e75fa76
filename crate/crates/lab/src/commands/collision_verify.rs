//! `collision-verify`: conservation, null space, dissipation sign and
//! Grad/bilinear cross-validation at one reference state.

use serde::Serialize;

use boltzwave_core::collision::{
    assemble_linearized, conservation_defect, cross_validation_errors, dissipation_constant, dissipation_form,
    null_space_residuals, AssemblyOptions, BilinearOptions, DissipationOptions,
};

use super::{read_angular, read_state, read_velocity_grid, Context};
use crate::error::{LabError, LabResult};
use crate::samples;
use crate::snapshot::{write_binary, Sidecar};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// Worst measured value.
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct CollisionReport {
    pub n_per_axis: usize,
    pub bound: f64,
    pub nodes_per_width: f64,
    pub under_resolved: bool,
    pub checks: Vec<Check>,
    pub null_residuals: [f64; 5],
    pub sigma: Option<f64>,
}

fn check(name: &str, value: f64, tolerance: f64, pass: bool) -> Check {
    Check { name: name.to_string(), value, tolerance, pass }
}

pub fn run(ctx: &mut Context<'_>) -> LabResult<()> {
    let cfg = ctx.config;
    let state = read_state(cfg, "state", (1.0, [0.0; 3], 1.0))?;
    let grid = read_velocity_grid(cfg, &state)?;
    let angular = read_angular(cfg)?;
    let tol_cons = cfg.get("checks", "tol_conservation", 1e-3)?;
    let tol_null = cfg.get("checks", "tol_null", 1e-2)?;
    let tol_cross = cfg.get("checks", "tol_cross", 1e-2)?;
    let n_cons = cfg.get("checks", "conservation_samples", 3usize)?;
    let n_diss = cfg.get("checks", "dissipation_samples", 20usize)?;
    let n_cross = cfg.get("checks", "cross_samples", 1usize)?;
    let want_sigma = cfg.get("checks", "sigma", true)?;
    let export = cfg.get("output", "export_operator", false)?;
    let exec = &ctx.exec;

    let op = assemble_linearized(&state, &grid, &AssemblyOptions::default(), exec)?;
    let rep = *op.report();
    if rep.under_resolved {
        ctx.record.warn(format!("under-resolved velocity grid: {:.2} nodes per thermal width", rep.nodes_per_width));
    }
    let mut checks = Vec::new();

    let mut rng = samples::rng(ctx.seed, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..n_cons {
        let f = samples::nonnegative_mixture(&grid, &state, &mut rng);
        let opts = BilinearOptions::covering(&[&f], 1.0)?;
        worst = conservation_defect(&f, &angular, &opts, exec)?.iter().fold(worst, |m, v| m.max(*v));
    }
    checks.push(check("conservation", worst, tol_cons, worst <= tol_cons));

    let null = null_space_residuals(&op, exec)?;
    let worst = null.iter().fold(0.0f64, |m, v| m.max(*v));
    checks.push(check("null_space", worst, tol_null, worst <= tol_null));

    let mut rng = samples::rng(ctx.seed, 2);
    let mut largest = f64::NEG_INFINITY;
    for i in 0..n_diss {
        let g = if i % 2 == 0 { samples::smooth_micro(&op, &mut rng) } else { samples::rough(&op, &mut rng) };
        largest = largest.max(dissipation_form(&op, &g, exec)?.1);
    }
    if n_diss > 0 {
        checks.push(check("dissipation_sign", largest, 0.0, largest < 0.0));
    }
    let sigma = if want_sigma {
        let d = dissipation_constant(&op, &state, &DissipationOptions::default(), exec)?;
        checks.push(check("sigma_positive", d.sigma, 0.0, d.sigma > 0.0));
        ctx.record.constant("sigma", d.sigma);
        Some(d.sigma)
    } else {
        None
    };

    let mut rng = samples::rng(ctx.seed, 3);
    let gs: Vec<_> = (0..n_cross).map(|_| samples::smooth_micro(&op, &mut rng)).collect();
    if !gs.is_empty() {
        let errs = cross_validation_errors(&op, &gs, &angular, exec)?;
        let worst = errs.iter().fold(0.0f64, |m, v| m.max(*v));
        checks.push(check("cross_validation", worst, tol_cross, worst <= tol_cross));
    }

    if export {
        let kernel = op.dense_kernel().ok_or_else(|| LabError::Usage("operator export needs dense storage".into()))?;
        let u = state.u();
        let side = Sidecar {
            kind: "linearized_kernel".into(),
            shape: vec![grid.len(), grid.len()],
            n_per_axis: grid.n_per_axis(),
            bound: grid.bound(),
            state: [state.rho(), u[0], u[1], u[2], state.theta()],
            extra: [("polar".to_string(), angular.n_polar() as f64), ("azimuth".to_string(), angular.n_azimuth() as f64)]
                .into_iter()
                .collect(),
        };
        let (bin, json) = write_binary(ctx.record.dir(), "operator", kernel, &side)?;
        ctx.record.output(&bin)?;
        ctx.record.output(&json)?;
    }

    let report = CollisionReport {
        n_per_axis: grid.n_per_axis(),
        bound: grid.bound(),
        nodes_per_width: rep.nodes_per_width,
        under_resolved: rep.under_resolved,
        null_residuals: null,
        sigma,
        checks,
    };
    for c in &report.checks {
        ctx.record.constant(&format!("check_{}", c.name), c.value);
    }
    let path = ctx.record.path("collision_report.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")?;
    ctx.record.output(&path)?;
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(LabError::Checks(failed))
    }
}
