//! Cell-centred line `[−L, L]` with an optional periodic transverse torus.

use alloc::vec::Vec;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    n1: usize,
    n2: usize,
    n3: usize,
    half_length: f64,
    h: f64,
    x: Vec<f64>,
}

impl SpatialGrid {
    /// Planar line of `n1` cells on `[−half_length, half_length]`.
    pub fn line(n1: usize, half_length: f64) -> Result<Self> {
        Self::new(n1, half_length, 1, 1)
    }

    /// `n2 × n3` periodic cells on the unit torus in the transverse directions.
    pub fn new(n1: usize, half_length: f64, n2: usize, n3: usize) -> Result<Self> {
        if n1 < 8 || n2 == 0 || n3 == 0 {
            return Err(invalid("need at least 8 cells along the line and one transverse cell"));
        }
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(invalid("half length must be positive"));
        }
        let h = 2.0 * half_length / n1 as f64;
        let x = (0..n1).map(|i| -half_length + (i as f64 + 0.5) * h).collect();
        Ok(SpatialGrid { n1, n2, n3, half_length, h, x })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }
    pub fn transverse(&self) -> (usize, usize) {
        (self.n2, self.n3)
    }
    pub fn half_length(&self) -> f64 {
        self.half_length
    }
    /// Spacing along the line.
    pub fn h(&self) -> f64 {
        self.h
    }
    /// Spacings along all three axes.
    pub fn spacings(&self) -> [f64; 3] {
        [self.h, 1.0 / self.n2 as f64, 1.0 / self.n3 as f64]
    }
    pub fn x(&self) -> &[f64] {
        &self.x
    }
    pub fn len(&self) -> usize {
        self.n1 * self.n2 * self.n3
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    /// Cells per line slab.
    pub fn slab(&self) -> usize {
        self.n2 * self.n3
    }
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n2 + j) * self.n3 + k
    }
    /// Volume of one cell.
    pub fn cell_volume(&self) -> f64 {
        let s = self.spacings();
        s[0] * s[1] * s[2]
    }
    /// Transverse coordinates of cell `(j, k)`.
    pub fn transverse_coords(&self, j: usize, k: usize) -> (f64, f64) {
        ((j as f64 + 0.5) / self.n2 as f64, (k as f64 + 0.5) / self.n3 as f64)
    }
}
