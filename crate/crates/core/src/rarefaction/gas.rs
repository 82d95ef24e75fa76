//! Characteristic speeds and Riemann invariants of the monatomic Euler system.

use crate::error::{invalid, Result};
use crate::maxwellian::FluidState;
use crate::num::sqrt;

/// `√p_ρ` at constant entropy, `√(10θ/9)`.
pub fn sound_speed(theta: f64) -> f64 {
    sqrt(10.0 * theta / 9.0)
}

/// Eigenvalue `i ∈ {1, 2, 3}` of the planar Euler system along `x₁`.
pub fn eigen_lambda(state: &FluidState, i: u8) -> Result<f64> {
    let u1 = state.u()[0];
    let c = sound_speed(state.theta());
    match i {
        1 => Ok(u1 - c),
        2 => Ok(u1),
        3 => Ok(u1 + c),
        _ => Err(invalid("characteristic family must be 1, 2 or 3")),
    }
}

/// The two Riemann invariants of family `i ∈ {1, 3}`: `u₁ ± 3√p_ρ` and `S`.
pub fn riemann_invariants(state: &FluidState, i: u8) -> Result<(f64, f64)> {
    let u1 = state.u()[0];
    let c = sound_speed(state.theta());
    let s = state.entropy();
    match i {
        1 => Ok((u1 + 3.0 * c, s)),
        3 => Ok((u1 - 3.0 * c, s)),
        _ => Err(invalid("Riemann invariants exist for families 1 and 3")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_state_speeds() {
        let s = FluidState::new(1.0, [0.0; 3], 1.0).unwrap();
        let l3 = eigen_lambda(&s, 3).unwrap();
        assert!((l3 - sqrt(10.0) / 3.0).abs() < 1e-15);
        assert!((l3 - 1.054_093).abs() < 1e-6);
        let s = FluidState::new(0.4, [0.7, 0.1, 0.0], 2.2).unwrap();
        let l: [f64; 3] = core::array::from_fn(|i| eigen_lambda(&s, i as u8 + 1).unwrap());
        assert_eq!(l[1], 0.7);
        assert!(l[0] < l[1] && l[1] < l[2]);
        assert!(eigen_lambda(&s, 4).is_err());
        assert!(riemann_invariants(&s, 2).is_err());
    }

    #[test]
    fn sound_speed_matches_pressure_derivative() {
        // p(ρ, S) = kρ^{5/3}e^S; differentiate numerically at fixed S.
        let s = FluidState::new(1.3, [0.0; 3], 0.8).unwrap();
        let entropy = s.entropy();
        let p = |rho: f64| crate::consts::STATE_K * libm::pow(rho, 5.0 / 3.0) * libm::exp(entropy);
        let h = 1e-5;
        let dp = (p(1.3 + h) - p(1.3 - h)) / (2.0 * h);
        assert!((sqrt(dp) - sound_speed(0.8)).abs() < 1e-9);
    }

    #[test]
    fn invariant_is_constant_along_the_eigenvector() {
        // In (ρ, u₁, S) coordinates r₃ ∝ (ρ, c, 0).
        let (rho, u1, theta) = (1.1, 0.2, 0.9);
        let c = sound_speed(theta);
        let entropy = FluidState::new(rho, [u1, 0.0, 0.0], theta).unwrap().entropy();
        let sigma = |t: f64| {
            let r = rho + t * rho;
            let u = u1 + t * c;
            // θ from (ρ, S): S = −(2/3)ln ρ + ln(4πθ/3) + 1.
            let th = 3.0 / (4.0 * crate::consts::PI) * libm::exp(entropy - 1.0 + 2.0 / 3.0 * libm::log(r));
            riemann_invariants(&FluidState::new(r, [u, 0.0, 0.0], th).unwrap(), 3).unwrap().0
        };
        let h = 1e-5;
        assert!(((sigma(h) - sigma(-h)) / (2.0 * h)).abs() < 1e-8);
    }
}
