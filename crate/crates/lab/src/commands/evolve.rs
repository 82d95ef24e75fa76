//! `evolve`: Navier–Stokes run from a perturbed rarefaction profile.

use std::sync::Arc;

use boltzwave_core::collision::{
    assemble_linearized, dissipation_constant, transport_coefficients, transport_table, AssemblyOptions,
    DissipationOptions, SolveOptions,
};
use boltzwave_core::diagnostics::{choose_global_maxwellian, micro_gram};
use boltzwave_core::fluid::{
    run_stability_experiment, ExperimentSetup, FluidField, PerturbationSpec, SeriesRow, SpatialGrid, StepLimits,
    TransportTable,
};
use boltzwave_core::VelocityGrid;

use super::{read_transport_options, read_wave, record_wave, Context};
use crate::csv::CsvWriter;
use crate::error::{LabError, LabResult};

pub const SERIES_HEADER: [&str; 14] = [
    "t_acoustic",
    "t",
    "l2",
    "linf",
    "h1",
    "h2",
    "eta",
    "eta_outflow",
    "energy",
    "defect_mass",
    "defect_momentum",
    "defect_energy",
    "min_rho",
    "min_theta",
];

fn series_row(r: &SeriesRow) -> [f64; 14] {
    [
        r.t_acoustic,
        r.t,
        r.norms.l2,
        r.norms.linf,
        r.norms.h1,
        r.norms.h2,
        r.eta,
        r.eta_outflow,
        r.energy,
        r.conservation[0],
        r.conservation[1],
        r.conservation[2],
        r.min_rho,
        r.min_theta,
    ]
}

/// `[table]`: `source = scaling` uses `μ, κ ∝ √θ` from one computed point
/// (or `mu1`, `kappa1` if given); `source = computed` tabulates every point.
pub(crate) fn build_table(ctx: &mut Context<'_>) -> LabResult<TransportTable> {
    let cfg = ctx.config;
    let lo = cfg.get("table", "theta_min", 0.3)?;
    let hi = cfg.get("table", "theta_max", 3.0)?;
    let points = cfg.get("table", "points", 50usize)?;
    let source: String = cfg.get("table", "source", "scaling".to_string())?;
    let opts = read_transport_options(cfg)?;
    match source.as_str() {
        "scaling" => {
            let (mu1, kappa1) = if cfg.has("table", "mu1") {
                (cfg.require("table", "mu1")?, cfg.require("table", "kappa1")?)
            } else {
                let t = transport_coefficients(1.0, 1.0, &opts, &ctx.exec)?;
                (t.mu, t.kappa)
            };
            ctx.record.constant("mu_at_1", mu1);
            ctx.record.constant("kappa_at_1", kappa1);
            Ok(TransportTable::hard_sphere_scaling(mu1, kappa1, lo, hi, points)?)
        }
        "computed" => {
            let rows = transport_table(lo, hi, points, 1.0, &opts, &ctx.exec)?;
            Ok(TransportTable::from_coefficients(&rows)?)
        }
        other => Err(LabError::Usage(format!("table.source must be scaling or computed, not {other:?}"))),
    }
}

fn write_field(path: &std::path::Path, field: &FluidField, grid: &SpatialGrid) -> LabResult<()> {
    let mut w = CsvWriter::create(path, &["i", "j", "k", "x1", "rho", "u1", "u2", "u3", "theta"])?;
    let (n2, n3) = grid.transverse();
    for i in 0..grid.n1() {
        for j in 0..n2 {
            for k in 0..n3 {
                let p = field.primitive(grid.index(i, j, k));
                w.row(&[i as f64, j as f64, k as f64, grid.x()[i], p[0], p[1], p[2], p[3], p[4]])?;
            }
        }
    }
    w.finish()?;
    Ok(())
}

pub fn run(ctx: &mut Context<'_>) -> LabResult<()> {
    let cfg = ctx.config;
    let wave = read_wave(cfg)?;
    record_wave(ctx.record, &wave);
    let weights: Vec<f64> = cfg.list("perturbation", "weights", &[1.0, 1.0, 1.0])?;
    if weights.len() != 3 {
        return Err(LabError::Usage("perturbation.weights needs three entries".into()));
    }
    let perturbation = PerturbationSpec {
        amplitude: cfg.get("perturbation", "amplitude", 0.02)?,
        center: cfg.get("perturbation", "center", 0.0)?,
        half_width: cfg.get("perturbation", "half_width", 4.0)?,
        weights: [weights[0], weights[1], weights[2]],
        transverse_mode: (cfg.get("perturbation", "mode2", 0u32)?, cfg.get("perturbation", "mode3", 0u32)?),
        transverse_depth: cfg.get("perturbation", "depth", 0.0)?,
    };
    if perturbation.amplitude.abs() > 0.05 {
        ctx.record.warn(format!("perturbation amplitude {} exceeds 5% of the wave strength", perturbation.amplitude));
    }
    let mut setup = ExperimentSetup {
        config: wave,
        n_cells: cfg.get("grid", "cells", 4000usize)?,
        half_length: cfg.get("grid", "half_length", 700.0)?,
        transverse: (cfg.get("grid", "n2", 1usize)?, cfg.get("grid", "n3", 1usize)?),
        perturbation,
        t_end: cfg.get("run", "t_end", 200.0)?,
        record_every: cfg.get("run", "record_every", 10.0)?,
        limits: StepLimits { cfl: cfg.get("run", "cfl", 0.4)?, cfl_visc: cfg.get("run", "cfl_visc", 0.25)? },
        micro_gram: None,
    };
    let write_fields = cfg.get("output", "fields", false)?;
    let micro = cfg.get("diagnostics", "micro", false)?;
    let table = build_table(ctx)?;

    // Global Maxwellian over the profile envelope of the whole run.
    let envelope: Vec<_> = [wave.left(), wave.right()].into_iter().copied().collect();
    let choice = choose_global_maxwellian(&envelope)?;
    let ms = choice.state;
    ctx.record.constant("m_star_rho", ms.rho());
    ctx.record.constant("m_star_u1", ms.u()[0]);
    ctx.record.constant("m_star_theta", ms.theta());
    ctx.record.constant("m_star_closeness", choice.closeness);
    if micro {
        let opts = read_transport_options(cfg)?;
        let grid = Arc::new(VelocityGrid::new(
            opts.n_per_axis,
            opts.bound_widths * ms.r_theta().sqrt() + ms.u()[0].abs(),
        )?);
        let op = assemble_linearized(&ms, &grid, &AssemblyOptions::default(), &ctx.exec)?;
        let gram = micro_gram(&op, &ms, &SolveOptions::default(), &ctx.exec)?;
        let sigma = dissipation_constant(&op, &ms, &DissipationOptions::default(), &ctx.exec)?;
        ctx.record.constant("sigma", sigma.sigma);
        ctx.record.constant("micro_gram_uu", gram[0][0]);
        ctx.record.constant("micro_gram_ut", gram[0][1]);
        ctx.record.constant("micro_gram_tt", gram[1][1]);
        setup.micro_gram = Some(gram);
    }
    ctx.record.note("energy_label", boltzwave_core::diagnostics::ENERGY_LABEL);

    let series_path = ctx.record.path("series.csv");
    let mut series = CsvWriter::create(&series_path, &SERIES_HEADER)?;
    let mut last_good: Option<FluidField> = None;
    let mut write_err: Option<LabError> = None;
    let outcome = run_stability_experiment(&setup, &table, &ctx.exec, &mut |row, field| {
        if write_err.is_none() {
            if let Err(e) = series.row(&series_row(row)) {
                write_err = Some(e);
            }
        }
        last_good = Some(field.clone());
    });
    series.finish()?;
    ctx.record.output(&series_path)?;
    if let Some(e) = write_err {
        return Err(e);
    }
    let grid = SpatialGrid::new(setup.n_cells, setup.half_length, setup.transverse.0, setup.transverse.1)?;
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            if let Some(f) = &last_good {
                let path = ctx.record.path("last_good.csv");
                write_field(&path, f, &grid)?;
                ctx.record.output(&path)?;
                ctx.record.constant("last_good_time", f.time);
            }
            return Err(e.into());
        }
    };
    ctx.record.constant("sandwich_constant", report.sandwich);
    ctx.record.constant("eta_initial", report.rows.first().map_or(0.0, |r| r.eta));
    ctx.record.constant("linf_initial", report.initial_linf());
    ctx.record.constant("linf_final", report.final_linf());
    ctx.record.constant("max_conservation_defect", report.max_conservation_defect());
    ctx.record.constant("steps", report.steps as f64);
    if write_fields {
        let path = ctx.record.path("fields.csv");
        write_field(&path, &report.final_field, &grid)?;
        ctx.record.output(&path)?;
    }
    Ok(())
}
