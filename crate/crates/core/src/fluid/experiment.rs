//! Perturbations of the rarefaction profile and the stability experiment.

use alloc::vec::Vec;

use super::field::{primitive_of, FluidField, Primitive};
use super::grid::SpatialGrid;
use super::rhs::Boundary;
use super::step::{max_stable_dt, step, StepLimits};
use super::transport::TransportTable;
use crate::consts::PI;
use crate::diagnostics::energy::energy_functional;
use crate::diagnostics::entropy::{relative_entropy, sandwich_constant};
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::maxwellian::FluidState;
use crate::num::{cos, exp, sqrt};
use crate::rarefaction::{sound_speed, RarefactionConfig, WaveProfile};

/// `(φ, ψ₁, ψ₂, ψ₃, ζ) = (ρ−ρ̄, u−ū, θ−θ̄)` per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationField {
    pub time: f64,
    pub values: Vec<[f64; 5]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerturbationNorms {
    pub l2: f64,
    /// Largest pointwise `|(φ, ψ, ζ)|`.
    pub linf: f64,
    pub h1: f64,
    pub h2: f64,
}

/// Profile states on the grid's line at time `t`.
pub fn profile_on_line(profile: &WaveProfile, grid: &SpatialGrid, t: f64) -> Result<Vec<FluidState>> {
    grid.x().iter().map(|&x| profile.eval(t, x).map(|p| p.state)).collect()
}

pub fn perturbation(field: &FluidField, grid: &SpatialGrid, profile: &WaveProfile) -> Result<PerturbationField> {
    field.check(grid)?;
    let line = profile_on_line(profile, grid, field.time)?;
    let slab = grid.slab();
    let values = field
        .cells
        .iter()
        .enumerate()
        .map(|(c, _)| {
            let p = field.primitive(c);
            let b = primitive_of(&line[c / slab]);
            core::array::from_fn(|m| p[m] - b[m])
        })
        .collect();
    Ok(PerturbationField { time: field.time, values })
}

impl PerturbationField {
    /// Discrete norms; derivatives use centred differences on cells at least
    /// two away from the line ends, periodic across the torus.
    pub fn norms(&self, grid: &SpatialGrid) -> PerturbationNorms {
        let (n1, (n2, n3)) = (grid.n1(), grid.transverse());
        let h = grid.spacings();
        let vol = grid.cell_volume();
        let at = |i: usize, j: usize, k: usize| &self.values[grid.index(i, j, k)];
        let mut l2 = 0.0;
        let mut linf: f64 = 0.0;
        for v in &self.values {
            let s: f64 = v.iter().map(|x| x * x).sum();
            l2 += vol * s;
            linf = linf.max(sqrt(s));
        }
        let (mut d1, mut d2) = (0.0, 0.0);
        for i in 2..n1 - 2 {
            for j in 0..n2 {
                for k in 0..n3 {
                    let c = at(i, j, k);
                    let mut nb: Vec<([f64; 5], [f64; 5], f64)> = alloc::vec![(*at(i + 1, j, k), *at(i - 1, j, k), h[0])];
                    if n2 > 1 {
                        nb.push((*at(i, (j + 1) % n2, k), *at(i, (j + n2 - 1) % n2, k), h[1]));
                    }
                    if n3 > 1 {
                        nb.push((*at(i, j, (k + 1) % n3), *at(i, j, (k + n3 - 1) % n3), h[2]));
                    }
                    for (p, m, hh) in nb {
                        for q in 0..5 {
                            let g = (p[q] - m[q]) / (2.0 * hh);
                            let s = (p[q] - 2.0 * c[q] + m[q]) / (hh * hh);
                            d1 += vol * g * g;
                            d2 += vol * s * s;
                        }
                    }
                }
            }
        }
        PerturbationNorms { l2: sqrt(l2), linf, h1: sqrt(l2 + d1), h2: sqrt(l2 + d1 + d2) }
    }
}

/// Smooth compactly supported bump added to the profile at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    /// Peak size as a fraction of the wave strength.
    pub amplitude: f64,
    pub center: f64,
    pub half_width: f64,
    /// Relative weights on `(φ, ψ₁, ζ)`.
    pub weights: [f64; 3],
    /// Transverse modulation `1 + depth·cos(2π(m₂y + m₃z))`.
    pub transverse_mode: (u32, u32),
    pub transverse_depth: f64,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        PerturbationSpec {
            amplitude: 0.02,
            center: 0.0,
            half_width: 4.0,
            weights: [1.0, 1.0, 1.0],
            transverse_mode: (0, 0),
            transverse_depth: 0.0,
        }
    }
}

impl PerturbationSpec {
    pub fn bump(&self, x: f64) -> f64 {
        let r = (x - self.center) / self.half_width;
        if r.abs() >= 1.0 {
            0.0
        } else {
            exp(1.0 - 1.0 / (1.0 - r * r))
        }
    }

    fn transverse(&self, y: f64, z: f64) -> f64 {
        let (m2, m3) = self.transverse_mode;
        1.0 + self.transverse_depth * cos(2.0 * PI * (m2 as f64 * y + m3 as f64 * z))
    }
}

/// Profile at `t = 0` plus the perturbation.
pub fn initial_field(profile: &WaveProfile, grid: &SpatialGrid, spec: &PerturbationSpec) -> Result<FluidField> {
    if !(spec.half_width > 0.0) || !spec.amplitude.is_finite() {
        return Err(invalid("perturbation needs a positive width and finite amplitude"));
    }
    let size = spec.amplitude * profile.config().strength();
    FluidField::from_fn(grid, 0.0, |x, y, z| {
        let s = profile.eval(0.0, x)?.state;
        let b = size * spec.bump(x) * spec.transverse(y, z);
        FluidState::new(
            s.rho() + spec.weights[0] * b,
            [s.u()[0] + spec.weights[1] * b, 0.0, 0.0],
            s.theta() + spec.weights[2] * b,
        )
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentSetup {
    pub config: RarefactionConfig,
    pub n_cells: usize,
    pub half_length: f64,
    pub transverse: (usize, usize),
    pub perturbation: PerturbationSpec,
    /// End time in acoustic units `1/c₊`.
    pub t_end: f64,
    /// Spacing of recorded rows, acoustic units.
    pub record_every: f64,
    pub limits: StepLimits,
    /// Gram matrix for the microscopic part of the energy, if available.
    pub micro_gram: Option<[[f64; 2]; 2]>,
}

/// One recorded row of the time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t_acoustic: f64,
    pub t: f64,
    pub norms: PerturbationNorms,
    /// `∫η dx`.
    pub eta: f64,
    /// `∫₀ᵗ [q₁]` across the line ends.
    pub eta_outflow: f64,
    pub energy: f64,
    /// Relative conservation defects of mass, momentum along the line and energy.
    pub conservation: [f64; 3],
    pub min_rho: f64,
    pub min_theta: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub rows: Vec<SeriesRow>,
    pub steps: usize,
    /// Largest `C̃` over all recorded snapshots.
    pub sandwich: f64,
    pub final_field: FluidField,
    /// Transverse means of the final field along the line.
    pub final_line: Vec<Primitive>,
}

impl ExperimentReport {
    pub fn initial_linf(&self) -> f64 {
        self.rows.first().map_or(0.0, |r| r.norms.linf)
    }
    pub fn final_linf(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.norms.linf)
    }
    pub fn max_linf(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.norms.linf))
    }
    pub fn max_conservation_defect(&self) -> f64 {
        self.rows.iter().flat_map(|r| r.conservation).fold(0.0, f64::max)
    }
}

struct Recorder<'a> {
    grid: &'a SpatialGrid,
    profile: &'a WaveProfile,
    totals0: [f64; 5],
    scales: [f64; 3],
    c_plus: f64,
    gram: Option<[[f64; 2]; 2]>,
}

impl Recorder<'_> {
    fn row(&self, field: &FluidField, outflow: &[f64; 5], eta_outflow: f64, sandwich: &mut f64) -> Result<SeriesRow> {
        let pert = perturbation(field, self.grid, self.profile)?;
        let norms = pert.norms(self.grid);
        let line = profile_on_line(self.profile, self.grid, field.time)?;
        let slab = self.grid.slab();
        let vol = self.grid.cell_volume();
        let mut eta = 0.0;
        let mut states = Vec::with_capacity(field.cells.len());
        for c in 0..field.cells.len() {
            let s = field.state(c)?;
            eta += vol * relative_entropy(&s, &line[c / slab]).0;
            states.push(s);
        }
        *sandwich = sandwich.max(sandwich_constant(states.iter().enumerate().map(|(c, s)| (s, &line[c / slab]))));
        let means: Vec<FluidState> = field
            .slab_means(self.grid)
            .iter()
            .map(|p| FluidState::new(p[0], [p[1], p[2], p[3]], p[4]))
            .collect::<Result<_>>()?;
        let gram = self.gram.unwrap_or([[0.0; 2]; 2]);
        let order = if self.gram.is_some() { 3 } else { 3 };
        let energy = energy_functional(&means, &line, self.grid.h(), &gram, order)?.total;
        let totals = field.totals(self.grid);
        let defect = |m: usize| (totals[m] - self.totals0[m] + outflow[m]).abs();
        let conservation = [defect(0) / self.scales[0], defect(1) / self.scales[1], defect(4) / self.scales[2]];
        let min_rho = states.iter().map(|s| s.rho()).fold(f64::INFINITY, f64::min);
        let min_theta = states.iter().map(|s| s.theta()).fold(f64::INFINITY, f64::min);
        Ok(SeriesRow {
            t_acoustic: field.time * self.c_plus,
            t: field.time,
            norms,
            eta,
            eta_outflow,
            energy,
            conservation,
            min_rho,
            min_theta,
        })
    }
}

/// Evolves profile + perturbation to `t_end`, calling `sink` with every
/// recorded row and the field it was measured on.
pub fn run_stability_experiment(
    setup: &ExperimentSetup,
    table: &TransportTable,
    exec: &dyn Executor,
    sink: &mut dyn FnMut(&SeriesRow, &FluidField),
) -> Result<ExperimentReport> {
    if !(setup.t_end > 0.0) || !(setup.record_every > 0.0) {
        return Err(invalid("end time and record interval must be positive"));
    }
    let grid = SpatialGrid::new(setup.n_cells, setup.half_length, setup.transverse.0, setup.transverse.1)?;
    let profile = WaveProfile::new(setup.config)?;
    let boundary = Boundary { left: *setup.config.left(), right: *setup.config.right() };
    let c_plus = sound_speed(setup.config.right().theta());
    let t_end = setup.t_end / c_plus;
    let record = setup.record_every / c_plus;

    let mut field = initial_field(&profile, &grid, &setup.perturbation)?;
    let totals0 = field.totals(&grid);
    let recorder = Recorder {
        grid: &grid,
        profile: &profile,
        totals0,
        scales: [totals0[0].abs(), totals0[0].abs() * c_plus, totals0[4].abs()],
        c_plus,
        gram: setup.micro_gram,
    };
    let mut outflow = [0.0; 5];
    let mut eta_outflow = 0.0;
    let mut sandwich = 1.0;
    let mut rows = Vec::new();
    let first = recorder.row(&field, &outflow, eta_outflow, &mut sandwich)?;
    sink(&first, &field);
    rows.push(first);
    let mut steps = 0usize;
    let mut next_record = record.min(t_end);
    let area = grid.spacings()[1] * grid.spacings()[2];
    let slab = grid.slab();
    let last = (grid.n1() - 1) * slab;
    while field.time < t_end {
        let limit = max_stable_dt(&field, &grid, table, &setup.limits)?;
        let remaining = next_record - field.time;
        let dt = if remaining <= limit { remaining } else { limit.min(0.5 * remaining).max(remaining / ((remaining / limit) as u64 + 1) as f64) };
        // Entropy flux through the ends, sampled at the start of the step.
        let line_l = profile.eval(field.time, grid.x()[0])?.state;
        let line_r = profile.eval(field.time, grid.x()[grid.n1() - 1])?.state;
        let mut q_net = 0.0;
        for c in 0..slab {
            q_net += area * (relative_entropy(&field.state(last + c)?, &line_r).1[0] - relative_entropy(&field.state(c)?, &line_l).1[0]);
        }
        let (next, flux) = step(&field, &grid, dt, table, &boundary, &setup.limits, exec)?;
        for m in 0..5 {
            outflow[m] += flux[m];
        }
        eta_outflow += dt * q_net;
        field = next;
        steps += 1;
        if field.time >= next_record * (1.0 - 1e-12) {
            field.time = next_record;
            let row = recorder.row(&field, &outflow, eta_outflow, &mut sandwich)?;
            sink(&row, &field);
            rows.push(row);
            if next_record >= t_end {
                break;
            }
            next_record = (next_record + record).min(t_end);
        }
    }
    let final_line = field.slab_means(&grid);
    Ok(ExperimentReport { rows, steps, sandwich, final_field: field, final_line })
}
