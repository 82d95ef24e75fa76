//! `profile`: sampled smooth rarefaction profiles plus a decay report.

use boltzwave_core::rarefaction::WaveProfile;

use super::{decay_report, read_wave, record_wave, Context};
use crate::csv::CsvWriter;
use crate::error::{LabError, LabResult};

pub fn run(ctx: &mut Context<'_>) -> LabResult<()> {
    let cfg = ctx.config;
    let wave = read_wave(cfg)?;
    record_wave(ctx.record, &wave);
    let times: Vec<f64> = cfg.list("profile", "times", &[0.0, 10.0, 100.0])?;
    let x_min = cfg.get("profile", "x_min", -100.0)?;
    let x_max = cfg.get("profile", "x_max", 100.0)?;
    let points = cfg.get("profile", "points", 401usize)?;
    if points < 2 || !(x_max > x_min) || times.iter().any(|t| !(*t >= 0.0)) {
        return Err(LabError::Usage("profile needs x_min < x_max, two points and nonnegative times".into()));
    }
    let profile = WaveProfile::new(wave)?;
    let path = ctx.record.path("profile.csv");
    let mut w = CsvWriter::create(&path, &["t", "x1", "rho", "u1", "theta", "u1_x1", "theta_x1"])?;
    for &t in &times {
        for (x, p) in profile.sample(t, x_min, x_max, points)? {
            w.row(&[t, x, p.state.rho(), p.state.u()[0], p.state.theta(), p.dx[1], p.dx[2]])?;
        }
    }
    w.finish()?;
    ctx.record.output(&path)?;
    if cfg.get("profile", "decay", true)? {
        let (report, json) = decay_report::compute(ctx, &profile)?;
        decay_report::write(ctx, &report, &json)?;
    }
    Ok(())
}
