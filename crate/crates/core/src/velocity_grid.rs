//! Truncated uniform velocity lattice with trapezoid weights.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::vec3::Vec3;

/// Tensor-product grid on `[-bound, bound]³` with trapezoid weights.
///
/// Node `(i, j, k)` has flat index `(i·n + j)·n + k`. Axis values are built
/// so that `axis[n−1−i] == −axis[i]` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    n: usize,
    bound: f64,
    spacing: f64,
    axis: Vec<f64>,
    axis_weights: Vec<f64>,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
}

impl VelocityGrid {
    pub fn new(n_per_axis: usize, bound: f64) -> Result<Self> {
        if n_per_axis < 4 {
            return Err(invalid("n_per_axis must be at least 4"));
        }
        if !(bound > 0.0) || !bound.is_finite() {
            return Err(invalid("bound must be positive and finite"));
        }
        let n = n_per_axis;
        let last = (n - 1) as f64;
        let axis: Vec<f64> = (0..n)
            .map(|i| {
                let num = 2 * i as i64 - (n as i64 - 1);
                bound * (num as f64) / last
            })
            .collect();
        let spacing = 2.0 * bound / last;
        let axis_weights = crate::quad::trapezoid_weights(n, spacing);
        let mut nodes = Vec::with_capacity(n * n * n);
        let mut weights = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    nodes.push([axis[i], axis[j], axis[k]]);
                    weights.push(axis_weights[i] * axis_weights[j] * axis_weights[k]);
                }
            }
        }
        Ok(VelocityGrid { n, bound, spacing, axis, axis_weights, nodes, weights })
    }

    pub fn n_per_axis(&self) -> usize {
        self.n
    }
    pub fn bound(&self) -> f64 {
        self.bound
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn axis(&self) -> &[f64] {
        &self.axis
    }
    pub fn axis_weights(&self) -> &[f64] {
        &self.axis_weights
    }
    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        (idx / (self.n * self.n), (idx / self.n) % self.n, idx % self.n)
    }

    /// Index of the node at `−v`.
    pub fn mirror(&self, idx: usize) -> usize {
        let (i, j, k) = self.coords(idx);
        let m = self.n - 1;
        self.index(m - i, m - j, m - k)
    }

    /// Quadrature `Σ w_k values_k` in node order.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Grids are interchangeable when built from the same parameters.
    pub fn same_as(&self, other: &VelocityGrid) -> bool {
        self.n == other.n && self.bound.to_bits() == other.bound.to_bits()
    }

    /// Smallest number of nodes per thermal width `√(Rθ)`.
    pub fn nodes_per_width(&self, r_theta: f64) -> f64 {
        crate::num::sqrt(r_theta) / self.spacing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_arguments() {
        assert!(VelocityGrid::new(3, 1.0).is_err());
        assert!(VelocityGrid::new(8, 0.0).is_err());
        assert!(VelocityGrid::new(8, -2.0).is_err());
        assert!(VelocityGrid::new(8, f64::NAN).is_err());
    }

    #[test]
    fn small_grid_is_closed_under_negation() {
        let g = VelocityGrid::new(4, 6.0).unwrap();
        assert_eq!(g.len(), 64);
        for (idx, v) in g.nodes().iter().enumerate() {
            let m = g.nodes()[g.mirror(idx)];
            assert_eq!(m, [-v[0], -v[1], -v[2]]);
            assert!(g.weights()[idx] > 0.0);
        }
    }

    #[test]
    fn odd_grid_contains_origin() {
        let g = VelocityGrid::new(9, 4.0).unwrap();
        assert_eq!(g.axis()[4], 0.0);
        let total: f64 = g.weights().iter().sum();
        assert!((total - 512.0).abs() < 1e-9);
    }
}
