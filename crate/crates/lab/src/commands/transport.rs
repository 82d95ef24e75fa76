//! `transport`: table of `(θ, μ, κ)` over a temperature range.

use boltzwave_core::collision::transport_table;

use super::{read_transport_options, Context};
use crate::csv::CsvWriter;
use crate::error::LabResult;

pub fn run(ctx: &mut Context<'_>) -> LabResult<()> {
    let cfg = ctx.config;
    let lo = cfg.get("transport", "theta_min", 0.5)?;
    let hi = cfg.get("transport", "theta_max", 3.0)?;
    let steps = cfg.get("transport", "steps", 50usize)?;
    let rho = cfg.get("transport", "rho", 1.0)?;
    let opts = read_transport_options(cfg)?;
    let rows = transport_table(lo, hi, steps, rho, &opts, &ctx.exec)?;
    let path = ctx.record.path("transport.csv");
    let mut w = CsvWriter::create(&path, &["theta", "mu", "kappa"])?;
    for r in &rows {
        w.row(&[r.theta, r.mu, r.kappa])?;
    }
    w.finish()?;
    ctx.record.output(&path)?;
    if let Some(r) = rows.iter().find(|r| r.theta == 1.0) {
        ctx.record.constant("mu_at_1", r.mu);
        ctx.record.constant("kappa_at_1", r.kappa);
    }
    Ok(())
}
