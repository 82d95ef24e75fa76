//! `decay-report`: `L^p` decay of the profile gradients over a time window.

use serde::Serialize;

use boltzwave_core::rarefaction::{log_times, verify_decay, DecayOptions, DecayReport, WaveProfile};

use super::{read_wave, record_wave, Context};
use crate::csv::CsvWriter;
use crate::error::{LabError, LabResult};

#[derive(Debug, Serialize)]
pub struct SeriesJson {
    /// `null` stands for `p = ∞`.
    pub p: Option<f64>,
    pub slope: f64,
    pub expected: f64,
    pub within_band: bool,
}

#[derive(Debug, Serialize)]
pub struct DecayJson {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub band: f64,
    pub series: Vec<SeriesJson>,
    pub curvature_constant: f64,
    pub fan_distance_decreasing: bool,
}

/// Reads `[decay]` and evaluates the report for `profile`.
pub(crate) fn compute(ctx: &Context<'_>, profile: &WaveProfile) -> LabResult<(DecayReport, DecayJson)> {
    let cfg = ctx.config;
    let t_min = cfg.get("decay", "t_min", 1e2)?;
    let t_max = cfg.get("decay", "t_max", 1e4)?;
    let samples = cfg.get("decay", "samples", 9usize)?;
    let band = cfg.get("decay", "band", 0.1)?;
    let p_text: Vec<String> = cfg.list("decay", "p", &["2".to_string(), "inf".to_string()])?;
    let p_values: Vec<f64> = p_text
        .iter()
        .map(|s| if s == "inf" { Ok(f64::INFINITY) } else { s.parse().map_err(|_| LabError::Usage(format!("decay.p: {s:?}"))) })
        .collect::<LabResult<_>>()?;
    let mut opts = DecayOptions::default();
    opts.cells = cfg.get("decay", "cells", opts.cells)?;
    opts.order = cfg.get("decay", "order", opts.order)?;
    if samples < 2 || !(t_min > 0.0 && t_max > t_min) {
        return Err(LabError::Usage("decay window needs 0 < t_min < t_max and at least two samples".into()));
    }
    let report = verify_decay(profile, &log_times(t_min, t_max, samples), &p_values, &opts)?;
    let json = DecayJson {
        t_min,
        t_max,
        samples,
        band,
        series: report
            .series
            .iter()
            .map(|s| SeriesJson {
                p: s.p.is_finite().then_some(s.p),
                slope: s.slope,
                expected: s.expected,
                within_band: (s.slope - s.expected).abs() <= band,
            })
            .collect(),
        curvature_constant: report.curvature_constant,
        fan_distance_decreasing: report.fan_distance_decreasing(),
    };
    Ok((report, json))
}

pub(crate) fn write(ctx: &mut Context<'_>, report: &DecayReport, json: &DecayJson) -> LabResult<()> {
    let path = ctx.record.path("decay.json");
    std::fs::write(&path, serde_json::to_string_pretty(json)? + "\n")?;
    ctx.record.output(&path)?;
    let mut header = vec!["t".to_string()];
    header.extend(report.series.iter().map(|s| if s.p.is_finite() { format!("norm_l{}", s.p) } else { "norm_linf".into() }));
    header.push("fan_distance".into());
    let names: Vec<&str> = header.iter().map(String::as_str).collect();
    let path = ctx.record.path("decay.csv");
    let mut w = CsvWriter::create(&path, &names)?;
    for (i, t) in report.times.iter().enumerate() {
        let mut row = vec![*t];
        row.extend(report.series.iter().map(|s| s.norms[i]));
        row.push(report.fan_distance[i]);
        w.row(&row)?;
    }
    w.finish()?;
    ctx.record.output(&path)?;
    for s in &json.series {
        let name = s.p.map_or("slope_linf".to_string(), |p| format!("slope_l{p}"));
        ctx.record.constant(&name, s.slope);
    }
    ctx.record.constant("curvature_constant", json.curvature_constant);
    Ok(())
}

pub fn run(ctx: &mut Context<'_>) -> LabResult<()> {
    let wave = read_wave(ctx.config)?;
    record_wave(ctx.record, &wave);
    let profile = WaveProfile::new(wave)?;
    let (report, json) = compute(ctx, &profile)?;
    write(ctx, &report, &json)?;
    let strict = ctx.config.get("decay", "enforce_band", false)?;
    let off: Vec<String> = json
        .series
        .iter()
        .filter(|s| !s.within_band)
        .map(|s| format!("slope_{}", s.p.map_or("linf".to_string(), |p| format!("l{p}"))))
        .collect();
    if strict && !off.is_empty() {
        return Err(LabError::Checks(off));
    }
    for o in off {
        ctx.record.warn(format!("{o} outside its band"));
    }
    Ok(())
}
