//! Fluid states, local Maxwellians, moments and the projections P₀/P₁.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::consts::{PI, R_GAS, STATE_K};
use crate::error::{invalid, Error, Result};
use crate::num::{exp, ln, powf, sqrt};
use crate::vec3::{norm2, sub, Vec3};
use crate::velocity_grid::VelocityGrid;

/// Density, bulk velocity and temperature at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidState {
    rho: f64,
    u: Vec3,
    theta: f64,
}

impl FluidState {
    pub fn new(rho: f64, u: Vec3, theta: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(invalid("density must be positive and finite"));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(invalid("temperature must be positive and finite"));
        }
        if u.iter().any(|c| !c.is_finite()) {
            return Err(invalid("velocity must be finite"));
        }
        Ok(FluidState { rho, u, theta })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn u(&self) -> Vec3 {
        self.u
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    /// `Rθ`, the squared thermal speed.
    pub fn r_theta(&self) -> f64 {
        R_GAS * self.theta
    }
    pub fn pressure(&self) -> f64 {
        R_GAS * self.rho * self.theta
    }
    pub fn internal_energy(&self) -> f64 {
        1.5 * R_GAS * self.theta
    }
    pub fn entropy(&self) -> f64 {
        -(2.0 / 3.0) * ln(self.rho) + ln(4.0 * PI / 3.0 * self.theta) + 1.0
    }
    /// Pressure recomputed from the state equation `k ρ^{5/3} e^S`.
    pub fn pressure_from_entropy(&self) -> f64 {
        STATE_K * powf(self.rho, 5.0 / 3.0) * exp(self.entropy())
    }

    /// Maxwellian value at one velocity.
    #[inline]
    pub fn maxwellian(&self, v: Vec3) -> f64 {
        let rt = self.r_theta();
        self.rho / powf(2.0 * PI * rt, 1.5) * exp(-norm2(sub(v, self.u)) / (2.0 * rt))
    }
}

/// Values of a velocity function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSnapshot {
    grid: Arc<VelocityGrid>,
    values: Vec<f64>,
}

impl DistributionSnapshot {
    pub fn new(grid: Arc<VelocityGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid("value count does not match grid size"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("snapshot values must be finite"));
        }
        Ok(DistributionSnapshot { grid, values })
    }

    pub(crate) fn from_parts(grid: Arc<VelocityGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        DistributionSnapshot { grid, values }
    }

    pub fn zeros(grid: Arc<VelocityGrid>) -> Self {
        let n = grid.len();
        DistributionSnapshot { grid, values: alloc::vec![0.0; n] }
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Arc<VelocityGrid>, f: impl Fn(Vec3) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&v| f(v)).collect();
        DistributionSnapshot { grid, values }
    }

    pub fn grid(&self) -> &Arc<VelocityGrid> {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn check_same_grid(&self, other: &DistributionSnapshot) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_parts(self.grid.clone(), self.values.iter().map(|v| v * s).collect())
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &DistributionSnapshot, s: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect();
        Ok(Self::from_parts(self.grid.clone(), values))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Maxwellian of `state` sampled on `grid`.
pub fn maxwellian_at(state: &FluidState, grid: &Arc<VelocityGrid>) -> DistributionSnapshot {
    DistributionSnapshot::from_fn(grid.clone(), |v| state.maxwellian(v))
}

/// Mass, momentum and total energy `(∫f, ∫v f, ∫|v|²/2 f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub rho: f64,
    pub momentum: Vec3,
    pub energy: f64,
}

pub fn moments(f: &DistributionSnapshot) -> Moments {
    let g = f.grid();
    let mut m = Moments { rho: 0.0, momentum: [0.0; 3], energy: 0.0 };
    for ((v, w), fv) in g.nodes().iter().zip(g.weights()).zip(f.values()) {
        let wf = w * fv;
        m.rho += wf;
        m.momentum[0] += wf * v[0];
        m.momentum[1] += wf * v[1];
        m.momentum[2] += wf * v[2];
        m.energy += 0.5 * wf * norm2(*v);
    }
    m
}

/// `Σ w_k g1_k g2_k / weight_k`.
pub fn weighted_inner(g1: &DistributionSnapshot, g2: &DistributionSnapshot, weight: &DistributionSnapshot) -> Result<f64> {
    g1.check_same_grid(g2)?;
    g1.check_same_grid(weight)?;
    let w = g1.grid().weights();
    let mut s = 0.0;
    for k in 0..w.len() {
        let d = weight.values[k];
        if !(d > 0.0) {
            return Err(Error::NonPositiveWeight { node: k });
        }
        s += w[k] * g1.values[k] * g2.values[k] / d;
    }
    Ok(s)
}

/// Orthonormal basis of the macroscopic subspace for one Maxwellian.
///
/// `chi` holds the analytic basis. Projections use a copy re-orthonormalized
/// in the discrete inner product, so `P₀` is an exact orthogonal projector on
/// the grid even where the quadrature is only approximately Gaussian.
#[derive(Debug, Clone)]
pub struct MacroBasis {
    state: FluidState,
    maxwellian: DistributionSnapshot,
    chi: [DistributionSnapshot; 5],
    ortho: [Vec<f64>; 5],
}

impl MacroBasis {
    pub fn new(state: &FluidState, grid: &Arc<VelocityGrid>) -> Self {
        let m = maxwellian_at(state, grid);
        let rt = state.r_theta();
        let rho = state.rho();
        let u = state.u();
        let build = |f: &dyn Fn(Vec3, f64) -> f64| {
            let vals = grid.nodes().iter().zip(m.values()).map(|(&v, &mv)| f(v, mv)).collect();
            DistributionSnapshot::from_parts(grid.clone(), vals)
        };
        let s0 = 1.0 / sqrt(rho);
        let s1 = 1.0 / sqrt(rt * rho);
        let s4 = 1.0 / sqrt(6.0 * rho);
        let chi = [
            build(&|_, mv| s0 * mv),
            build(&|v, mv| (v[0] - u[0]) * s1 * mv),
            build(&|v, mv| (v[1] - u[1]) * s1 * mv),
            build(&|v, mv| (v[2] - u[2]) * s1 * mv),
            build(&|v, mv| (norm2(sub(v, u)) / rt - 3.0) * s4 * mv),
        ];
        let ortho = orthonormalize(&chi, &m);
        MacroBasis { state: *state, maxwellian: m, chi, ortho }
    }

    pub fn state(&self) -> &FluidState {
        &self.state
    }
    pub fn maxwellian(&self) -> &DistributionSnapshot {
        &self.maxwellian
    }
    pub fn chi(&self) -> &[DistributionSnapshot; 5] {
        &self.chi
    }

    /// Coefficients `⟨g, χ_j⟩_M`.
    pub fn coefficients(&self, g: &DistributionSnapshot) -> Result<[f64; 5]> {
        let mut c = [0.0; 5];
        for (j, chi) in self.chi.iter().enumerate() {
            c[j] = weighted_inner(g, chi, &self.maxwellian)?;
        }
        Ok(c)
    }

    pub fn project_p0(&self, g: &DistributionSnapshot) -> Result<DistributionSnapshot> {
        g.check_same_grid(&self.maxwellian)?;
        let w = g.grid().weights();
        let m = self.maxwellian.values();
        let mut out = alloc::vec![0.0; g.values().len()];
        for e in &self.ortho {
            let c: f64 = (0..w.len()).filter(|&k| m[k] > 0.0).map(|k| w[k] * g.values[k] * e[k] / m[k]).sum();
            out.iter_mut().zip(e).for_each(|(o, x)| *o += c * x);
        }
        Ok(DistributionSnapshot::from_parts(g.grid().clone(), out))
    }

    pub fn project_p1(&self, g: &DistributionSnapshot) -> Result<DistributionSnapshot> {
        let p0 = self.project_p0(g)?;
        g.add_scaled(&p0, -1.0)
    }

    /// Gram matrix `⟨χ_i, χ_j⟩_M`.
    pub fn gram(&self) -> [[f64; 5]; 5] {
        let mut gm = [[0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                gm[i][j] = weighted_inner(&self.chi[i], &self.chi[j], &self.maxwellian).unwrap_or(f64::NAN);
            }
        }
        gm
    }
}

/// Modified Gram–Schmidt, two passes, under `Σ w a b / M` (nodes with `M = 0` skipped).
fn orthonormalize(chi: &[DistributionSnapshot; 5], m: &DistributionSnapshot) -> [Vec<f64>; 5] {
    let w = m.grid().weights();
    let mv = m.values();
    let inner = |a: &[f64], b: &[f64]| -> f64 { (0..w.len()).filter(|&k| mv[k] > 0.0).map(|k| w[k] * a[k] * b[k] / mv[k]).sum() };
    let mut out: [Vec<f64>; 5] = core::array::from_fn(|j| chi[j].values().to_vec());
    for j in 0..5 {
        for _ in 0..2 {
            for i in 0..j {
                let c = inner(&out[j], &out[i]);
                let (head, tail) = out.split_at_mut(j);
                tail[0].iter_mut().zip(&head[i]).for_each(|(x, e)| *x -= c * e);
            }
        }
        let n = sqrt(inner(&out[j], &out[j]));
        out[j].iter_mut().for_each(|x| *x /= n);
    }
    out
}

pub fn macro_basis(state: &FluidState, grid: &Arc<VelocityGrid>) -> [DistributionSnapshot; 5] {
    MacroBasis::new(state, grid).chi
}

pub fn project_p0(g: &DistributionSnapshot, state: &FluidState) -> Result<DistributionSnapshot> {
    MacroBasis::new(state, g.grid()).project_p0(g)
}

pub fn project_p1(g: &DistributionSnapshot, state: &FluidState) -> Result<DistributionSnapshot> {
    MacroBasis::new(state, g.grid()).project_p1(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, b: f64) -> Arc<VelocityGrid> {
        Arc::new(VelocityGrid::new(n, b).unwrap())
    }

    #[test]
    fn state_validation() {
        assert!(FluidState::new(0.0, [0.0; 3], 1.0).is_err());
        assert!(FluidState::new(1.0, [0.0; 3], -1.0).is_err());
        assert!(FluidState::new(1.0, [f64::NAN, 0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn peak_value_with_unit_thermal_speed() {
        let s = FluidState::new(1.0, [0.0; 3], 1.5).unwrap();
        let peak = s.maxwellian([0.0; 3]);
        assert!((peak - 0.063_493_635_934_240_97).abs() < 1e-15);
    }

    #[test]
    fn state_equation_and_entropy() {
        let s = FluidState::new(1.0, [0.0; 3], 3.0 / (4.0 * PI)).unwrap();
        assert!((s.entropy() - 1.0).abs() < 1e-15);
        for &(rho, theta) in &[(0.3, 0.7), (1.0, 1.0), (2.5, 4.0), (10.0, 0.01)] {
            let s = FluidState::new(rho, [0.0; 3], theta).unwrap();
            assert!((s.pressure_from_entropy() - s.pressure()).abs() <= 1e-12 * s.pressure());
            assert!((s.pressure() - 2.0 / 3.0 * rho * theta).abs() <= 1e-15 * s.pressure());
            assert_eq!(s.internal_energy(), theta);
        }
    }

    #[test]
    fn moments_of_shifted_maxwellian() {
        let g = grid(32, 10.0);
        let s = FluidState::new(2.0, [1.0, 0.0, 0.0], 1.0).unwrap();
        let m = moments(&maxwellian_at(&s, &g));
        assert!((m.rho - 2.0).abs() < 1e-6);
        assert!((m.momentum[0] - 2.0).abs() < 1e-6);
        assert!(m.momentum[1].abs() < 1e-12 && m.momentum[2].abs() < 1e-12);
        assert!((m.energy - 3.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn zero_has_zero_moments() {
        let g = grid(6, 3.0);
        let m = moments(&DistributionSnapshot::zeros(g));
        assert_eq!(m, Moments { rho: 0.0, momentum: [0.0; 3], energy: 0.0 });
    }

    #[test]
    fn inner_product_errors() {
        let g = grid(6, 3.0);
        let other = grid(8, 3.0);
        let a = DistributionSnapshot::from_fn(g.clone(), |v| v[0]);
        let b = DistributionSnapshot::from_fn(other, |v| v[0]);
        assert_eq!(weighted_inner(&a, &a, &b), Err(Error::GridMismatch));
        let w = DistributionSnapshot::from_fn(g, |v| v[0]);
        assert!(matches!(weighted_inner(&a, &a, &w), Err(Error::NonPositiveWeight { .. })));
    }

    #[test]
    fn basis_definition_and_projection_identity() {
        let g = grid(24, 8.0);
        let s = FluidState::new(1.3, [0.2, -0.1, 0.05], 1.1).unwrap();
        let b = MacroBasis::new(&s, &g);
        let m = b.maxwellian();
        for (c, mv) in b.chi()[0].values().iter().zip(m.values()) {
            assert!((c - mv / sqrt(1.3)).abs() <= 1e-15 * mv.abs());
        }
        let p1m = b.project_p1(m).unwrap();
        assert!(p1m.max_abs() <= 1e-6 * m.max_abs(), "{} {}", p1m.max_abs(), m.max_abs());
        let f = DistributionSnapshot::from_fn(g, |v| (1.0 + v[0] + v[1] * v[2]) * s.maxwellian(v));
        let p0 = b.project_p0(&f).unwrap();
        let p1 = b.project_p1(&f).unwrap();
        for k in 0..f.values().len() {
            let sum = p0.values()[k] + p1.values()[k];
            let scale = f.values()[k].abs() + p0.values()[k].abs();
            assert!((sum - f.values()[k]).abs() <= 2.0 * f64::EPSILON * scale);
        }
    }
}
