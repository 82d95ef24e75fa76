//! Inviscid Burgers fan and the smoothed Burgers solution.

use alloc::vec::Vec;

use crate::consts::PI;
use crate::error::{invalid, Error, Result};
use crate::num::{atan, floor, powf};
use crate::quad::{adaptive, gauss_legendre};

/// Self-similar fan connecting `w_minus < w_plus`, at `ξ = x₁/t`.
pub fn burgers_fan(w_minus: f64, w_plus: f64, xi: f64) -> f64 {
    xi.clamp(w_minus, w_plus)
}

/// `1 / ∫₀^∞ (1+y²)^{−q} dy`, computed after `y = tan τ`.
pub fn kq_constant(q: f64) -> Result<f64> {
    if !(q >= 2.0) || !q.is_finite() {
        return Err(invalid("tail exponent must be at least 2"));
    }
    let power = 2.0 * q - 2.0;
    let (val, _) = adaptive(&|t| powf(crate::num::cos(t), power), 0.0, 0.5 * PI, 1e-15, 1e-14);
    Ok(1.0 / val)
}

const LADDER_CELLS: usize = 256;

/// Cumulative `∫₀^{atan y} cos^{2q−2}τ dτ` at equally spaced `τ` checkpoints;
/// lookups finish with one Gauss rule on the last partial cell.
#[derive(Debug, Clone)]
struct Ladder {
    power: f64,
    step: f64,
    cumulative: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Ladder {
    fn new(q: f64) -> Self {
        let (nodes, weights) = gauss_legendre(16);
        let power = 2.0 * q - 2.0;
        let step = 0.5 * PI / LADDER_CELLS as f64;
        let mut ladder = Ladder { power, step, cumulative: Vec::with_capacity(LADDER_CELLS + 1), nodes, weights };
        let mut total = 0.0;
        ladder.cumulative.push(0.0);
        for k in 0..LADDER_CELLS {
            total += ladder.piece(k as f64 * step, (k + 1) as f64 * step);
            ladder.cumulative.push(total);
        }
        ladder
    }

    fn piece(&self, a: f64, b: f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * powf(crate::num::cos(mid + half * x), self.power);
        }
        s * half
    }

    /// `∫₀^y (1+s²)^{−q} ds`, odd in `y`.
    fn integral(&self, y: f64) -> f64 {
        let t = atan(y.abs());
        let k = (floor(t / self.step) as usize).min(LADDER_CELLS - 1);
        let base = k as f64 * self.step;
        let v = self.cumulative[k] + self.piece(base, t);
        if y < 0.0 {
            -v
        } else {
            v
        }
    }
}

/// Value and first two `x₁`-derivatives of the smoothed Burgers solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersPoint {
    pub w: f64,
    pub w_x: f64,
    pub w_xx: f64,
    /// Foot of the characteristic through the point.
    pub foot: f64,
    pub bisections: u32,
}

/// Solution of `w_t + w w_x = 0` from the smoothed step initial data.
#[derive(Debug, Clone)]
pub struct SmoothBurgers {
    w_minus: f64,
    w_plus: f64,
    epsilon: f64,
    q: f64,
    kq: f64,
    ladder: Ladder,
}

impl SmoothBurgers {
    pub fn new(w_minus: f64, w_plus: f64, epsilon: f64, q: f64) -> Result<Self> {
        if !(w_minus < w_plus) || !w_minus.is_finite() || !w_plus.is_finite() {
            return Err(invalid("need finite w_minus < w_plus"));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("epsilon must lie in (0, 1)"));
        }
        let kq = kq_constant(q)?;
        Ok(SmoothBurgers { w_minus, w_plus, epsilon, q, kq, ladder: Ladder::new(q) })
    }

    pub fn w_minus(&self) -> f64 {
        self.w_minus
    }
    pub fn w_plus(&self) -> f64 {
        self.w_plus
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

    fn half_jump(&self) -> f64 {
        0.5 * (self.w_plus - self.w_minus) * self.kq
    }

    /// Initial data at `x₁`.
    pub fn initial(&self, x: f64) -> f64 {
        0.5 * (self.w_plus + self.w_minus) + self.half_jump() * self.ladder.integral(self.epsilon * x)
    }

    /// `(w̄₀, w̄₀′, w̄₀″)` at `x₁`.
    pub fn initial_with_derivatives(&self, x: f64) -> (f64, f64, f64) {
        let y = self.epsilon * x;
        let base = powf(1.0 + y * y, -self.q);
        let d1 = self.half_jump() * self.epsilon * base;
        let d2 = -2.0 * self.q * y * self.epsilon * d1 / (1.0 + y * y);
        (self.initial(x), d1, d2)
    }

    /// Solves `x = x₀ + w̄₀(x₀)t` by safeguarded Newton inside the bracket
    /// `[x − w₊t, x − w₋t]`.
    pub fn solve(&self, t: f64, x: f64) -> Result<BurgersPoint> {
        if !(t >= 0.0) || !x.is_finite() {
            return Err(invalid("need t ≥ 0 and finite x"));
        }
        let (mut lo, mut hi) = (x - self.w_plus * t, x - self.w_minus * t);
        let mut x0 = (x - self.initial(x) * t).clamp(lo, hi);
        let scale = 1.0 + x.abs() + t * (self.w_plus.abs() + self.w_minus.abs());
        let mut bisections = 0u32;
        let mut converged = t == 0.0;
        if t == 0.0 {
            x0 = x;
        }
        for _ in 0..200 {
            if converged {
                break;
            }
            let (w0, d1, _) = self.initial_with_derivatives(x0);
            let f = x0 + w0 * t - x;
            if f.abs() <= 1e-15 * scale {
                converged = true;
                break;
            }
            if f > 0.0 {
                hi = x0;
            } else {
                lo = x0;
            }
            let newton = x0 - f / (1.0 + d1 * t);
            let next = if newton > lo && newton < hi {
                newton
            } else {
                bisections += 1;
                0.5 * (lo + hi)
            };
            if (next - x0).abs() <= 1e-15 * (1.0 + x0.abs()) || hi - lo <= 1e-15 * (1.0 + x0.abs()) {
                x0 = next;
                converged = true;
                break;
            }
            x0 = next;
        }
        if !converged {
            return Err(Error::NoConvergence { iterations: 200, residual: hi - lo });
        }
        let (w, d1, d2) = self.initial_with_derivatives(x0);
        let stretch = 1.0 / (1.0 + d1 * t);
        Ok(BurgersPoint { w, w_x: d1 * stretch, w_xx: d2 * stretch * stretch * stretch, foot: x0, bisections })
    }

    /// `w̄` at a characteristic foot `x₀` and time `t`: position, value,
    /// `w̄ₓ`, `w̄ₓₓ` and the Jacobian `∂x/∂x₀`.
    pub fn along_characteristic(&self, t: f64, x0: f64) -> (f64, BurgersPoint, f64) {
        let (w, d1, d2) = self.initial_with_derivatives(x0);
        let jac = 1.0 + d1 * t;
        let stretch = 1.0 / jac;
        let p = BurgersPoint { w, w_x: d1 * stretch, w_xx: d2 * stretch * stretch * stretch, foot: x0, bisections: 0 };
        (x0 + w * t, p, jac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_branches() {
        assert_eq!(burgers_fan(0.2, 0.9, 0.2 - 1.0), 0.2);
        assert_eq!(burgers_fan(0.2, 0.9, 0.55), 0.55);
        assert_eq!(burgers_fan(0.2, 0.9, 5.0), 0.9);
        assert_eq!(burgers_fan(0.2, 0.9, 0.9), 0.9);
        assert_eq!(burgers_fan(0.2, 0.9, 0.2), 0.2);
    }

    #[test]
    fn normalisation_constants() {
        // Wallis: ∫₀^{π/2} cos^{2n} = π/2 · (2n−1)!!/(2n)!!.
        assert!((kq_constant(2.0).unwrap() - 4.0 / PI).abs() < 1e-10 * 4.0 / PI);
        assert!((kq_constant(3.0).unwrap() - 16.0 / (3.0 * PI)).abs() < 1e-10 * 16.0 / (3.0 * PI));
        assert!((kq_constant(4.0).unwrap() - 32.0 / (5.0 * PI)).abs() < 1e-10);
        let mut prev = 0.0;
        for k in 0..12 {
            let v = kq_constant(2.0 + 0.5 * k as f64).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(kq_constant(1.5).is_err());
    }

    #[test]
    fn ladder_matches_closed_form() {
        // q = 2: ∫₀^y (1+s²)^{−2} = ½(atan y + y/(1+y²)).
        let l = Ladder::new(2.0);
        for &y in &[0.0, 1e-3, 0.3, 1.0, 7.5, -2.0, 1e3, 1e9] {
            let exact = 0.5 * (atan(y) + y / (1.0 + y * y));
            assert!((l.integral(y) - exact).abs() < 1e-15, "{y}");
        }
    }

    #[test]
    fn initial_data_shape() {
        let b = SmoothBurgers::new(0.6, 1.05, 0.05, 2.0).unwrap();
        assert_eq!(b.initial(0.0), 0.5 * (0.6 + 1.05));
        assert!((b.initial(1e3 / 0.05) - 1.05).abs() < 1e-6);
        for &x in &[0.3, 4.0, 55.0, 800.0] {
            assert!((b.initial(x) + b.initial(-x) - 1.65).abs() < 1e-14);
            assert!(b.initial(x) < b.initial(x * 1.01));
        }
    }

    #[test]
    fn time_zero_is_the_initial_data() {
        let b = SmoothBurgers::new(0.6, 1.05, 0.05, 2.0).unwrap();
        for &x in &[-40.0, 0.0, 13.0] {
            assert_eq!(b.solve(0.0, x).unwrap().w, b.initial(x));
        }
    }

    #[test]
    fn solution_satisfies_the_equation() {
        let b = SmoothBurgers::new(0.6, 1.05, 0.1, 2.0).unwrap();
        let h = 1e-3;
        for &t in &[0.5, 10.0, 300.0] {
            for k in 0..21 {
                let x = -60.0 + 6.0 * k as f64 + 0.8 * t;
                let p = b.solve(t, x).unwrap();
                assert!(p.bisections <= 60);
                let wt = (b.solve(t + h, x).unwrap().w - b.solve(t - h, x).unwrap().w) / (2.0 * h);
                let wx = (b.solve(t, x + h).unwrap().w - b.solve(t, x - h).unwrap().w) / (2.0 * h);
                assert!((wt + p.w * wx).abs() < 1e-6);
                assert!((wx - p.w_x).abs() < 1e-8);
                assert!(p.w_x > 0.0 && p.w > 0.6 && p.w < 1.05);
                let wxx = (b.solve(t, x + h).unwrap().w_x - b.solve(t, x - h).unwrap().w_x) / (2.0 * h);
                assert!((wxx - p.w_xx).abs() < 1e-9);
            }
        }
    }
}
