//! Hemisphere quadrature for the scattering direction.

use alloc::vec::Vec;

use crate::consts::PI;
use crate::error::{invalid, Result};
use crate::num::{cos, sin, sqrt};
use crate::vec3::Vec3;

/// Product rule on `{Ω : Ω·ê ≥ 0}` in coordinates aligned with a unit axis `ê`.
///
/// Gauss–Legendre in `cos ϑ ∈ [0, 1]` times a uniform midpoint rule in the
/// azimuth. Directions are produced per axis by [`AngularQuadrature::directions`].
#[derive(Debug, Clone, PartialEq)]
pub struct AngularQuadrature {
    cos_polar: Vec<f64>,
    sin_polar: Vec<f64>,
    polar_weights: Vec<f64>,
    azimuth: Vec<(f64, f64)>,
    azimuth_weight: f64,
}

impl AngularQuadrature {
    pub fn new(n_polar: usize, n_azimuth: usize) -> Result<Self> {
        if n_polar == 0 || n_azimuth == 0 {
            return Err(invalid("angular orders must be positive"));
        }
        let (c, w) = crate::quad::gauss_legendre_on(n_polar, 0.0, 1.0);
        let sin_polar = c.iter().map(|c| sqrt(1.0 - c * c)).collect();
        let azimuth = (0..n_azimuth)
            .map(|q| {
                let phi = 2.0 * PI * (q as f64 + 0.5) / n_azimuth as f64;
                (cos(phi), sin(phi))
            })
            .collect();
        Ok(AngularQuadrature {
            cos_polar: c,
            sin_polar,
            polar_weights: w,
            azimuth,
            azimuth_weight: 2.0 * PI / n_azimuth as f64,
        })
    }

    pub fn n_polar(&self) -> usize {
        self.cos_polar.len()
    }
    pub fn n_azimuth(&self) -> usize {
        self.azimuth.len()
    }
    pub fn len(&self) -> usize {
        self.n_polar() * self.n_azimuth()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn cos_polar(&self) -> &[f64] {
        &self.cos_polar
    }
    pub fn sin_polar(&self) -> &[f64] {
        &self.sin_polar
    }
    pub fn polar_weights(&self) -> &[f64] {
        &self.polar_weights
    }
    pub fn azimuth(&self) -> &[(f64, f64)] {
        &self.azimuth
    }
    pub fn azimuth_weight(&self) -> f64 {
        self.azimuth_weight
    }

    /// Sum of all weights; `2π` up to rounding.
    pub fn total_weight(&self) -> f64 {
        self.polar_weights.iter().sum::<f64>() * self.azimuth_weight * self.n_azimuth() as f64
    }

    /// Directions and weights for the hemisphere around unit axis `e`.
    pub fn directions(&self, e: Vec3) -> Vec<(Vec3, f64)> {
        let (a, b) = crate::vec3::frame(e);
        let mut out = Vec::with_capacity(self.len());
        for p in 0..self.n_polar() {
            let (c, s) = (self.cos_polar[p], self.sin_polar[p]);
            for &(cp, sp) in &self.azimuth {
                let mut d = [0.0; 3];
                for i in 0..3 {
                    d[i] = c * e[i] + s * (cp * a[i] + sp * b[i]);
                }
                out.push((d, self.polar_weights[p] * self.azimuth_weight));
            }
        }
        out
    }
}

impl Default for AngularQuadrature {
    fn default() -> Self {
        AngularQuadrature::new(8, 16).expect("default orders are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_cover_hemisphere() {
        let q = AngularQuadrature::default();
        assert_eq!(q.len(), 128);
        assert!((q.total_weight() - 2.0 * PI).abs() < 1e-13);
        let e = [0.6, 0.0, 0.8];
        let dirs = q.directions(e);
        let mut first_moment = 0.0;
        for (d, w) in &dirs {
            assert!(*w > 0.0);
            assert!((crate::vec3::norm(*d) - 1.0).abs() < 1e-14);
            assert!(crate::vec3::dot(*d, e) >= 0.0);
            first_moment += w * crate::vec3::dot(*d, e);
        }
        // ∫ cos ϑ dΩ over the hemisphere is π.
        assert!((first_moment - PI).abs() < 1e-13);
    }
}
