//! End states on the 3-rarefaction curve and the smooth wave profile.

use alloc::vec::Vec;

use super::burgers::{burgers_fan, BurgersPoint, SmoothBurgers};
use super::gas::{eigen_lambda, riemann_invariants, sound_speed};
use crate::error::{invalid, Result};
use crate::maxwellian::FluidState;
use crate::num::sqrt;

/// End states and smoothing parameters of a planar 3-rarefaction wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RarefactionConfig {
    left: FluidState,
    right: FluidState,
    epsilon: f64,
    q: f64,
    kq: f64,
}

fn rarefaction_state(right: &FluidState, w: f64) -> Result<FluidState> {
    let c_plus = sound_speed(right.theta());
    let c = (w - right.u()[0] + 3.0 * c_plus) / 4.0;
    if !(c > 0.0) {
        return Err(invalid("wave speed reaches vacuum on the rarefaction curve"));
    }
    let ratio = c / c_plus;
    FluidState::new(right.rho() * ratio * ratio * ratio, [w - c, 0.0, 0.0], 0.9 * c * c)
}

/// `|(ρ₊−ρ₋, u₊−u₋, θ₊−θ₋)|`.
pub fn wave_strength(left: &FluidState, right: &FluidState) -> f64 {
    let (ul, ur) = (left.u(), right.u());
    let d = [
        right.rho() - left.rho(),
        ur[0] - ul[0],
        ur[1] - ul[1],
        ur[2] - ul[2],
        right.theta() - left.theta(),
    ];
    sqrt(d.iter().map(|x| x * x).sum())
}

impl RarefactionConfig {
    /// Left state on the rarefaction curve through `right` with the given strength.
    pub fn from_strength(right: FluidState, delta: f64, epsilon: f64, q: f64) -> Result<Self> {
        check_planar(&right)?;
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(invalid("wave strength must be positive"));
        }
        let w_plus = eigen_lambda(&right, 3)?;
        // Strength grows monotonically as w₋ decreases towards the vacuum speed.
        let w_vac = right.u()[0] - 3.0 * sound_speed(right.theta());
        let (mut lo, mut hi) = (w_vac, w_plus);
        let strength = |w: f64| rarefaction_state(&right, w).map(|s| wave_strength(&s, &right));
        let reach = strength(w_vac + 1e-12 * (w_plus - w_vac))?;
        if delta >= reach {
            return Err(invalid("wave strength exceeds the rarefaction curve before vacuum"));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if strength(mid)? > delta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let left = rarefaction_state(&right, 0.5 * (lo + hi))?;
        Self::from_states(left, right, epsilon, q)
    }

    /// Validates that `left` and `right` bound a genuine 3-rarefaction.
    pub fn from_states(left: FluidState, right: FluidState, epsilon: f64, q: f64) -> Result<Self> {
        check_planar(&left)?;
        check_planar(&right)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("epsilon must lie in (0, 1)"));
        }
        let kq = super::burgers::kq_constant(q)?;
        if !(eigen_lambda(&left, 3)? < eigen_lambda(&right, 3)?) {
            return Err(invalid("end states do not form a rarefaction (need w_minus < w_plus)"));
        }
        let (a, b) = (riemann_invariants(&left, 3)?, riemann_invariants(&right, 3)?);
        let tol = 1e-10;
        if (a.0 - b.0).abs() > tol * (1.0 + b.0.abs()) || (a.1 - b.1).abs() > tol * (1.0 + b.1.abs()) {
            return Err(invalid("end states are not connected by a 3-rarefaction"));
        }
        Ok(RarefactionConfig { left, right, epsilon, q, kq })
    }

    pub fn left(&self) -> &FluidState {
        &self.left
    }
    pub fn right(&self) -> &FluidState {
        &self.right
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn kq(&self) -> f64 {
        self.kq
    }
    pub fn strength(&self) -> f64 {
        wave_strength(&self.left, &self.right)
    }
    pub fn w_minus(&self) -> f64 {
        self.left.u()[0] + sound_speed(self.left.theta())
    }
    pub fn w_plus(&self) -> f64 {
        self.right.u()[0] + sound_speed(self.right.theta())
    }

    /// The state on the curve whose fastest speed is `w ∈ [w₋, w₊]`.
    pub fn state_from_wavespeed(&self, w: f64) -> Result<FluidState> {
        let (lo, hi) = (self.w_minus(), self.w_plus());
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if !(w >= lo - slack && w <= hi + slack) {
            return Err(invalid("wave speed outside [w_minus, w_plus]"));
        }
        if w == hi {
            return Ok(self.right);
        }
        rarefaction_state(&self.right, w)
    }
}

fn check_planar(s: &FluidState) -> Result<()> {
    if s.u()[1] != 0.0 || s.u()[2] != 0.0 {
        return Err(invalid("planar wave needs zero transverse velocity"));
    }
    Ok(())
}

/// State, first and second `x₁`-derivatives of `(ρ, u₁, θ)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub state: FluidState,
    pub dx: [f64; 3],
    pub dxx: [f64; 3],
    pub burgers: BurgersPoint,
}

/// Smooth 3-rarefaction `(ρ̄, ū, θ̄)(t, x₁)`, built from the Burgers solution
/// at time `1 + t`.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    config: RarefactionConfig,
    burgers: SmoothBurgers,
}

impl WaveProfile {
    pub fn new(config: RarefactionConfig) -> Result<Self> {
        let burgers = SmoothBurgers::new(config.w_minus(), config.w_plus(), config.epsilon, config.q)?;
        Ok(WaveProfile { config, burgers })
    }

    pub fn config(&self) -> &RarefactionConfig {
        &self.config
    }
    pub fn burgers(&self) -> &SmoothBurgers {
        &self.burgers
    }

    fn compose(&self, p: BurgersPoint) -> Result<ProfilePoint> {
        let state = self.config.state_from_wavespeed(p.w)?;
        let c = sound_speed(state.theta());
        let rho = state.rho();
        // d/dw of (ρ, u₁, θ) along the curve, and second derivatives.
        let first = [3.0 * rho / (4.0 * c), 0.75, 0.45 * c];
        let second = [3.0 * rho / (8.0 * c * c), 0.0, 0.1125];
        let (wx, wxx) = (p.w_x, p.w_xx);
        Ok(ProfilePoint {
            state,
            dx: core::array::from_fn(|i| first[i] * wx),
            dxx: core::array::from_fn(|i| second[i] * wx * wx + first[i] * wxx),
            burgers: p,
        })
    }

    /// Profile at time `t ≥ 0` and position `x₁`.
    pub fn eval(&self, t: f64, x: f64) -> Result<ProfilePoint> {
        self.compose(self.burgers.solve(1.0 + t, x)?)
    }

    /// Profile point on the characteristic with foot `x₀`; returns the position too.
    pub fn eval_on_characteristic(&self, t: f64, x0: f64) -> Result<(f64, ProfilePoint, f64)> {
        let (x, p, jac) = self.burgers.along_characteristic(1.0 + t, x0);
        Ok((x, self.compose(p)?, jac))
    }

    /// Inviscid fan `(ρʳ, uʳ, θʳ)(x₁/t)` for `t > 0`.
    pub fn fan_state(&self, t: f64, x: f64) -> Result<FluidState> {
        if !(t > 0.0) {
            return Err(invalid("fan needs t > 0"));
        }
        self.config.state_from_wavespeed(burgers_fan(self.config.w_minus(), self.config.w_plus(), x / t))
    }

    /// Discrete L² norms of the mass, momentum and energy residuals of the
    /// Euler system on `mesh` (uniform spacing), by centred differences with
    /// step `h` in both `t` and `x₁`.
    pub fn euler_residual(&self, t: f64, mesh: &[f64], h: f64) -> Result<[f64; 3]> {
        if mesh.len() < 2 || !(h > 0.0) || h > t + 1.0 {
            return Err(invalid("need at least two mesh points and 0 < h ≤ 1 + t"));
        }
        let dx = (mesh[mesh.len() - 1] - mesh[0]) / (mesh.len() - 1) as f64;
        let fields = |t: f64, x: f64| -> Result<[f64; 6]> {
            let s = self.eval(t, x)?.state;
            let (r, u, th) = (s.rho(), s.u()[0], s.theta());
            let p = s.pressure();
            Ok([r, r * u, r * th, r * u, r * u * u + p, r * u * th])
        };
        let mut acc = [0.0; 3];
        for &x in mesh {
            let fp = fields(t + h, x)?;
            let fm = fields(t - h, x)?;
            let gp = fields(t, x + h)?;
            let gm = fields(t, x - h)?;
            let here = self.eval(t, x)?;
            let ux = (gp[1] / gp[0] - gm[1] / gm[0]) / (2.0 * h);
            let d = |a: f64, b: f64| (a - b) / (2.0 * h);
            let r = [
                d(fp[0], fm[0]) + d(gp[3], gm[3]),
                d(fp[1], fm[1]) + d(gp[4], gm[4]),
                d(fp[2], fm[2]) + d(gp[5], gm[5]) + here.state.pressure() * ux,
            ];
            for i in 0..3 {
                acc[i] += dx * r[i] * r[i];
            }
        }
        Ok(acc.map(sqrt))
    }

    /// Evenly spaced samples `(x₁, point)` on `[lo, hi]`.
    pub fn sample(&self, t: f64, lo: f64, hi: f64, count: usize) -> Result<Vec<(f64, ProfilePoint)>> {
        if count < 2 || !(hi > lo) {
            return Err(invalid("need count ≥ 2 and hi > lo"));
        }
        (0..count)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (count - 1) as f64;
                self.eval(t, x).map(|p| (x, p))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> FluidState {
        FluidState::new(1.0, [0.0; 3], 1.0).unwrap()
    }

    #[test]
    fn reference_point_on_the_curve() {
        let right = unit();
        let cfg = RarefactionConfig::from_strength(right, 0.5, 0.05, 2.0).unwrap();
        let w = cfg.w_plus() - 0.4;
        assert!((w - 0.654_093).abs() < 1e-6);
        let s = cfg.state_from_wavespeed(w).unwrap();
        // Independent check: λ₃ and both invariants reproduce.
        assert!((eigen_lambda(&s, 3).unwrap() - w).abs() < 1e-14);
        let (a, b) = (riemann_invariants(&s, 3).unwrap(), riemann_invariants(&right, 3).unwrap());
        assert!((a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10);
        assert!((s.rho() - 0.741_58).abs() < 5e-5);
        assert!((s.u()[0] + 0.3).abs() < 1e-12);
        assert!((s.theta() - 0.819_26).abs() < 5e-5);
        assert_eq!(cfg.state_from_wavespeed(cfg.w_plus()).unwrap(), right);
        assert!(cfg.state_from_wavespeed(cfg.w_plus() + 0.01).is_err());
    }

    #[test]
    fn strength_is_hit() {
        let cfg = RarefactionConfig::from_strength(unit(), 0.2, 0.05, 2.0).unwrap();
        assert!((cfg.strength() - 0.2).abs() < 1e-12);
        assert!(cfg.left().rho() < 1.0 && cfg.left().u()[0] < 0.0 && cfg.left().theta() < 1.0);
        assert!(RarefactionConfig::from_strength(unit(), 50.0, 0.05, 2.0).is_err());
    }

    #[test]
    fn rejects_bad_end_states() {
        let r = unit();
        let l = FluidState::new(0.9, [0.0; 3], 1.0).unwrap();
        assert!(RarefactionConfig::from_states(l, r, 0.05, 2.0).is_err());
        assert!(RarefactionConfig::from_states(r, l, 0.05, 2.0).is_err());
        let cfg = RarefactionConfig::from_strength(r, 0.2, 0.05, 2.0).unwrap();
        assert!(RarefactionConfig::from_states(*cfg.right(), *cfg.left(), 0.05, 2.0).is_err());
        assert!(RarefactionConfig::from_states(*cfg.left(), *cfg.right(), 1.0, 2.0).is_err());
        let moving = FluidState::new(1.0, [0.0, 0.1, 0.0], 1.0).unwrap();
        assert!(RarefactionConfig::from_strength(moving, 0.2, 0.05, 2.0).is_err());
    }

    #[test]
    fn far_field_and_derivatives() {
        let cfg = RarefactionConfig::from_strength(unit(), 0.2, 0.05, 2.0).unwrap();
        let prof = WaveProfile::new(cfg).unwrap();
        let far = prof.eval(0.0, -1e3 / 0.05).unwrap().state;
        assert!(wave_strength(&far, cfg.left()) < 1e-5);
        let h = 1e-3;
        for &x in &[-30.0, 0.0, 12.0, 70.0] {
            let p = prof.eval(5.0, x).unwrap();
            let a = prof.eval(5.0, x + h).unwrap();
            let b = prof.eval(5.0, x - h).unwrap();
            let fd = [
                (a.state.rho() - b.state.rho()) / (2.0 * h),
                (a.state.u()[0] - b.state.u()[0]) / (2.0 * h),
                (a.state.theta() - b.state.theta()) / (2.0 * h),
            ];
            let fd2 = [
                (a.dx[0] - b.dx[0]) / (2.0 * h),
                (a.dx[1] - b.dx[1]) / (2.0 * h),
                (a.dx[2] - b.dx[2]) / (2.0 * h),
            ];
            for i in 0..3 {
                assert!((fd[i] - p.dx[i]).abs() < 1e-9);
                assert!((fd2[i] - p.dxx[i]).abs() < 1e-10);
                assert!(p.dx[i] > 0.0);
            }
        }
    }

    #[test]
    fn euler_residual_is_small() {
        let cfg = RarefactionConfig::from_strength(unit(), 0.2, 0.05, 2.0).unwrap();
        let prof = WaveProfile::new(cfg).unwrap();
        let mesh: Vec<f64> = (0..401).map(|i| -200.0 + i as f64).collect();
        let r = prof.euler_residual(10.0, &mesh, 1e-3).unwrap();
        for v in r {
            assert!(v < 1e-5, "{r:?}");
        }
    }
}
