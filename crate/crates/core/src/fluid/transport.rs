//! Spline tables for the viscosity and heat conductivity.

use alloc::vec::Vec;

use crate::collision::transport::TransportCoefficients;
use crate::error::{invalid, Error, Result};
use crate::linalg::CubicSpline;

/// `μ(θ)`, `κ(θ)` and their derivatives from tabulated samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportTable {
    mu: CubicSpline,
    kappa: CubicSpline,
    lo: f64,
    hi: f64,
}

/// Values and `θ`-derivatives at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportAt {
    pub mu: f64,
    pub dmu: f64,
    pub kappa: f64,
    pub dkappa: f64,
}

impl TransportTable {
    pub fn from_samples(theta: Vec<f64>, mu: Vec<f64>, kappa: Vec<f64>) -> Result<Self> {
        if mu.iter().chain(&kappa).any(|v| !(*v > 0.0)) {
            return Err(invalid("transport samples must be positive"));
        }
        let (lo, hi) = (theta[0], theta[theta.len() - 1]);
        Ok(TransportTable {
            mu: CubicSpline::new(theta.clone(), mu)?,
            kappa: CubicSpline::new(theta, kappa)?,
            lo,
            hi,
        })
    }

    pub fn from_coefficients(rows: &[TransportCoefficients]) -> Result<Self> {
        Self::from_samples(
            rows.iter().map(|r| r.theta).collect(),
            rows.iter().map(|r| r.mu).collect(),
            rows.iter().map(|r| r.kappa).collect(),
        )
    }

    /// Hard-sphere scaling `μ = μ₁√θ`, `κ = κ₁√θ`, sampled on `[lo, hi]`.
    pub fn hard_sphere_scaling(mu1: f64, kappa1: f64, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 4 || !(lo > 0.0 && hi > lo) {
            return Err(invalid("need at least four points on a positive range"));
        }
        let theta: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
        let mu = theta.iter().map(|t| mu1 * crate::num::sqrt(*t)).collect();
        let kappa = theta.iter().map(|t| kappa1 * crate::num::sqrt(*t)).collect();
        Self::from_samples(theta, mu, kappa)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, theta: f64) -> Result<TransportAt> {
        if !(theta >= self.lo && theta <= self.hi) {
            return Err(Error::OutOfTable { theta, lo: self.lo, hi: self.hi });
        }
        Ok(self.eval_clamped(theta))
    }

    /// Evaluation with `θ` clamped into the table; callers check the range first.
    pub(crate) fn eval_clamped(&self, theta: f64) -> TransportAt {
        let theta = theta.clamp(self.lo, self.hi);
        let (mu, dmu) = self.mu.eval(theta);
        let (kappa, dkappa) = self.kappa.eval(theta);
        TransportAt { mu, dmu, kappa, dkappa }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_tracks_square_root() {
        let t = TransportTable::hard_sphere_scaling(0.18, 0.45, 0.5, 3.0, 50).unwrap();
        for &th in &[0.5, 0.77, 1.0, 2.2, 3.0] {
            let v = t.eval(th).unwrap();
            assert!((v.mu - 0.18 * libm::sqrt(th)).abs() < 1e-7);
            assert!((v.dmu - 0.09 / libm::sqrt(th)).abs() < 1e-4);
            assert!((v.kappa / v.mu - 2.5).abs() < 1e-6);
        }
        assert!(matches!(t.eval(0.4), Err(Error::OutOfTable { .. })));
    }
}
