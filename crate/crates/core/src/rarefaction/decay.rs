//! Measured decay of the profile gradients and distance to the inviscid fan.
//!
//! Integrals over `x₁` are taken in the characteristic-foot variable
//! `x₀ = tan(s)/ε`, where the integrands are smooth for every `t`.

use alloc::vec::Vec;

use super::profile::WaveProfile;
use crate::consts::PI;
use crate::error::{invalid, Result};
use crate::num::{cos, ln, powf, sqrt, tan};
use crate::quad::gauss_legendre;

#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    /// `p`; `f64::INFINITY` for the sup norm.
    pub p: f64,
    pub norms: Vec<f64>,
    /// Least-squares slope of `ln‖·‖` against `ln(1+t)`.
    pub slope: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub times: Vec<f64>,
    pub series: Vec<DecaySeries>,
    /// Smallest `C` with `|w̄ₓₓ| ≤ Cε w̄ₓ` on every sample.
    pub curvature_constant: f64,
    /// `sup |profile − fan|` at each time.
    pub fan_distance: Vec<f64>,
}

impl DecayReport {
    pub fn fan_distance_decreasing(&self) -> bool {
        self.fan_distance.windows(2).all(|w| w[1] < w[0])
    }
}

/// Options for the foot-variable quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayOptions {
    pub cells: usize,
    pub order: usize,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions { cells: 600, order: 8 }
    }
}

pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `‖∂ₓ₁(ρ̄, ū₁, θ̄)(t)‖_{L^p}` for each `p` and time, the curvature constant,
/// and the distance to the fan.
pub fn verify_decay(profile: &WaveProfile, times: &[f64], p_values: &[f64], opts: &DecayOptions) -> Result<DecayReport> {
    if times.len() < 2 || times.iter().any(|t| !(*t > 0.0)) {
        return Err(invalid("need at least two positive times"));
    }
    if p_values.iter().any(|p| !(*p >= 1.0)) {
        return Err(invalid("norm exponents must be at least 1"));
    }
    if opts.cells == 0 || opts.order == 0 {
        return Err(invalid("quadrature needs cells and order"));
    }
    let eps = profile.config().epsilon();
    let (gx, gw) = gauss_legendre(opts.order);
    let ds = PI / opts.cells as f64;
    let mut nodes = Vec::with_capacity(opts.cells * opts.order + 1);
    for c in 0..opts.cells {
        let mid = -0.5 * PI + (c as f64 + 0.5) * ds;
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push((mid + 0.5 * ds * x, 0.5 * ds * w));
        }
    }
    nodes.push((0.0, 0.0));

    let mut sums = alloc::vec![alloc::vec![0.0; times.len()]; p_values.len()];
    let mut curvature: f64 = 0.0;
    let mut fan_distance = Vec::with_capacity(times.len());
    for (ti, &t) in times.iter().enumerate() {
        let mut sup: f64 = 0.0;
        let mut dist: f64 = 0.0;
        for &(s, w) in &nodes {
            let x0 = tan(s) / eps;
            let (x, pt, jac) = profile.eval_on_characteristic(t, x0)?;
            let g = sqrt(pt.dx.iter().map(|d| d * d).sum());
            sup = sup.max(g);
            let dx0 = w / (eps * cos(s) * cos(s));
            for (pi, &p) in p_values.iter().enumerate() {
                if p.is_finite() && w > 0.0 {
                    sums[pi][ti] += powf(g, p) * jac * dx0;
                }
            }
            let b = pt.burgers;
            if b.w_x > 0.0 {
                curvature = curvature.max(b.w_xx.abs() / (eps * b.w_x));
            }
            let fan = profile.fan_state(t, x)?;
            let d = [
                pt.state.rho() - fan.rho(),
                pt.state.u()[0] - fan.u()[0],
                pt.state.theta() - fan.theta(),
            ];
            dist = dist.max(sqrt(d.iter().map(|v| v * v).sum()));
        }
        for (pi, &p) in p_values.iter().enumerate() {
            sums[pi][ti] = if p.is_finite() { powf(sums[pi][ti], 1.0 / p) } else { sup };
        }
        fan_distance.push(dist);
    }
    let log_t: Vec<f64> = times.iter().map(|t| ln(1.0 + t)).collect();
    let series = p_values
        .iter()
        .zip(sums)
        .map(|(&p, norms)| {
            let log_n: Vec<f64> = norms.iter().map(|v| ln(*v)).collect();
            let expected = if p.is_finite() { -1.0 + 1.0 / p } else { -1.0 };
            DecaySeries { p, slope: least_squares_slope(&log_t, &log_n), norms, expected }
        })
        .collect();
    Ok(DecayReport { times: times.to_vec(), series, curvature_constant: curvature, fan_distance })
}

/// `count` logarithmically spaced times on `[lo, hi]`.
pub fn log_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (ln(lo), ln(hi));
    (0..count).map(|i| crate::num::exp(a + (b - a) * i as f64 / (count - 1).max(1) as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxwellian::FluidState;
    use crate::rarefaction::RarefactionConfig;

    #[test]
    fn slope_of_a_power_law() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 0.5, 0.0, -0.5];
        assert!((least_squares_slope(&x, &y) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn l1_norm_of_w_gradient_is_the_jump() {
        // ∫ w̄ₓ dx = w₊ − w₋ for every t; for ρ̄ₓ it is ρ₊ − ρ₋.
        let right = FluidState::new(1.0, [0.0; 3], 1.0).unwrap();
        let cfg = RarefactionConfig::from_strength(right, 0.2, 0.05, 2.0).unwrap();
        let prof = WaveProfile::new(cfg).unwrap();
        let eps = cfg.epsilon();
        let (gx, gw) = gauss_legendre(8);
        for &t in &[0.0, 50.0, 5000.0] {
            let mut total = 0.0;
            let cells = 400;
            let ds = PI / cells as f64;
            for c in 0..cells {
                let mid = -0.5 * PI + (c as f64 + 0.5) * ds;
                for (x, w) in gx.iter().zip(&gw) {
                    let s = mid + 0.5 * ds * x;
                    let (_, p, jac) = prof.eval_on_characteristic(t, tan(s) / eps).unwrap();
                    total += p.dx[0] * jac * 0.5 * ds * w / (eps * cos(s) * cos(s));
                }
            }
            assert!((total - (right.rho() - cfg.left().rho())).abs() < 1e-10);
        }
    }
}
