//! Discrete energy functional around the rarefaction profile.
//!
//! This is a fluid-order proxy: the microscopic part is the Chapman–Enskog
//! response to the perturbation gradients, `G̃ ≈ ψ₁ₓ A + ζₓ B`, with `A`, `B`
//! the responses to unit `∂₁u₁` and `∂₁θ` at a reference state, measured in
//! `L²_v(1/√M*)`.

use alloc::vec::Vec;

use super::micro::weighted_norm;
use crate::collision::inverse::SolveOptions;
use crate::collision::linearized::LinearizedOperator;
use crate::collision::transport::{chapman_enskog_response, FieldGradients};
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::maxwellian::FluidState;

/// Label carried by every report.
pub const ENERGY_LABEL: &str = "fluid-order proxy";

/// Gram matrix of the unit-gradient responses under `1/M*`.
pub fn micro_gram(op: &LinearizedOperator, m_star: &FluidState, solve: &SolveOptions, exec: &dyn Executor) -> Result<[[f64; 2]; 2]> {
    let mut shear = FieldGradients::default();
    shear.du[0][0] = 1.0;
    let mut heat = FieldGradients::default();
    heat.dtheta[0] = 1.0;
    let (a, _) = chapman_enskog_response(op, &shear, solve, exec)?;
    let (b, _) = chapman_enskog_response(op, &heat, solve, exec)?;
    let na = weighted_norm(&a, m_star);
    let nb = weighted_norm(&b, m_star);
    let sum = a.add_scaled(&b, 1.0)?;
    let ns = weighted_norm(&sum, m_star);
    let cross = 0.5 * (ns * ns - na * na - nb * nb);
    Ok([[na * na, cross], [cross, nb * nb]])
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub label: &'static str,
    /// `‖∂ᵏ(φ,ψ,ζ)‖²` for `k = 0..=order`.
    pub fluid: Vec<f64>,
    /// `‖∂ᵏ G̃‖²` for `k = 0..order`.
    pub micro: Vec<f64>,
    pub total: f64,
}

fn derivative(f: &[f64], i: usize, k: usize, h: f64) -> f64 {
    match k {
        0 => f[i],
        1 => (f[i + 1] - f[i - 1]) / (2.0 * h),
        2 => (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h),
        _ => (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) / (2.0 * h * h * h),
    }
}

/// Energy of `field − profile` on a uniform line with spacing `h`.
/// The outer three cells on each side are excluded.
pub fn energy_functional(
    field: &[FluidState],
    profile: &[FluidState],
    h: f64,
    gram: &[[f64; 2]; 2],
    order: usize,
) -> Result<EnergyReport> {
    if field.len() != profile.len() {
        return Err(invalid("field and profile lengths differ"));
    }
    if order > 3 {
        return Err(invalid("derivative order is at most 3"));
    }
    if field.len() < 7 || !(h > 0.0) {
        return Err(invalid("need at least seven cells and h > 0"));
    }
    let comp = |k: usize| -> Vec<f64> {
        field
            .iter()
            .zip(profile)
            .map(|(s, b)| match k {
                0 => s.rho() - b.rho(),
                1 | 2 | 3 => s.u()[k - 1] - b.u()[k - 1],
                _ => s.theta() - b.theta(),
            })
            .collect()
    };
    let pert: Vec<Vec<f64>> = (0..5).map(comp).collect();
    let n = field.len();
    let mut fluid = alloc::vec![0.0; order + 1];
    let mut micro = alloc::vec![0.0; order];
    for i in 3..n - 3 {
        for (k, acc) in fluid.iter_mut().enumerate() {
            *acc += h * pert.iter().map(|f| sq(derivative(f, i, k, h))).sum::<f64>();
        }
        for (k, acc) in micro.iter_mut().enumerate() {
            let a = derivative(&pert[1], i, k + 1, h);
            let b = derivative(&pert[4], i, k + 1, h);
            *acc += h * (a * a * gram[0][0] + 2.0 * a * b * gram[0][1] + b * b * gram[1][1]);
        }
    }
    let total = fluid.iter().sum::<f64>() + micro.iter().sum::<f64>();
    Ok(EnergyReport { label: ENERGY_LABEL, fluid, micro, total })
}

fn sq(x: f64) -> f64 {
    x * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_for_the_profile_itself() {
        let s: Vec<FluidState> = (0..20).map(|i| FluidState::new(1.0 + 0.01 * i as f64, [0.0; 3], 1.0).unwrap()).collect();
        let r = energy_functional(&s, &s, 0.1, &[[1.0, 0.0], [0.0, 1.0]], 3).unwrap();
        assert_eq!(r.total, 0.0);
        assert_eq!(r.label, ENERGY_LABEL);
    }

    #[test]
    fn components_add() {
        let base: Vec<FluidState> = (0..40).map(|_| FluidState::new(1.0, [0.0; 3], 1.0).unwrap()).collect();
        let bump = |i: usize| libm::exp(-sq((i as f64 - 20.0) / 4.0));
        let only_rho: Vec<FluidState> =
            (0..40).map(|i| FluidState::new(1.0 + 0.01 * bump(i), [0.0; 3], 1.0).unwrap()).collect();
        let only_u: Vec<FluidState> = (0..40).map(|i| FluidState::new(1.0, [0.01 * bump(i), 0.0, 0.0], 1.0).unwrap()).collect();
        let both: Vec<FluidState> =
            (0..40).map(|i| FluidState::new(1.0 + 0.01 * bump(i), [0.01 * bump(i), 0.0, 0.0], 1.0).unwrap()).collect();
        let g = [[2.0, 0.0], [0.0, 3.0]];
        let a = energy_functional(&only_rho, &base, 0.5, &g, 2).unwrap();
        let b = energy_functional(&only_u, &base, 0.5, &g, 2).unwrap();
        let c = energy_functional(&both, &base, 0.5, &g, 2).unwrap();
        assert!((a.total + b.total - c.total).abs() < 1e-15 * c.total.max(1e-300) + 1e-18);
        assert!(c.total > a.total && c.total > b.total);
    }
}
