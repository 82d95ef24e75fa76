//! Relative entropy pair and the global reference Maxwellian.

use crate::error::{Error, Result};
use crate::maxwellian::FluidState;
use crate::num::ln;

/// `S = −(2/3)ln ρ + ln(4πθ/3) + 1`.
pub fn entropy_s(state: &FluidState) -> f64 {
    state.entropy()
}

/// `Ψ(s) = s − ln s − 1`.
pub fn psi(s: f64) -> f64 {
    s - ln(s) - 1.0
}

/// Relative entropy density `η` of `state` against `bar` and its flux `q`.
pub fn relative_entropy(state: &FluidState, bar: &FluidState) -> (f64, [f64; 3]) {
    let (rho, u, theta) = (state.rho(), state.u(), state.theta());
    let (rb, ub, tb) = (bar.rho(), bar.u(), bar.theta());
    let du = [u[0] - ub[0], u[1] - ub[1], u[2] - ub[2]];
    let kinetic = 0.5 * rho * (du[0] * du[0] + du[1] * du[1] + du[2] * du[2]);
    let eta = 1.5 * (kinetic + 2.0 / 3.0 * rho * tb * psi(rb / rho) + rho * tb * psi(theta / tb));
    let press = rho * theta - rb * tb;
    (eta, core::array::from_fn(|j| u[j] * eta + du[j] * press))
}

/// Largest ratio in `C̃⁻¹|d|² ≤ η ≤ C̃|d|²` over the given pairs, where
/// `d = (ρ−ρ̄, u−ū, θ−θ̄)`. Pairs with `d = 0` are skipped.
pub fn sandwich_constant<'a>(pairs: impl IntoIterator<Item = (&'a FluidState, &'a FluidState)>) -> f64 {
    let mut c: f64 = 1.0;
    for (s, b) in pairs {
        let (u, ub) = (s.u(), b.u());
        let d2 = sq(s.rho() - b.rho())
            + (0..3).map(|i| sq(u[i] - ub[i])).sum::<f64>()
            + sq(s.theta() - b.theta());
        if d2 == 0.0 {
            continue;
        }
        let eta = relative_entropy(s, b).0;
        c = c.max(eta / d2).max(d2 / eta);
    }
    c
}

/// Reference Maxwellian whose temperature lies in `(½ sup θ, inf θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalMaxwellianChoice {
    pub state: FluidState,
    /// `(½ sup θ, inf θ)`.
    pub window: (f64, f64),
    /// `max |ρ−ρ*| + |u−u*| + |θ−θ*|` over the envelope.
    pub closeness: f64,
}

/// Picks `θ*` at the window midpoint and `ρ*`, `u*` as envelope averages.
pub fn choose_global_maxwellian(envelope: &[FluidState]) -> Result<GlobalMaxwellianChoice> {
    if envelope.is_empty() {
        return Err(crate::error::invalid("empty field envelope"));
    }
    let sup = envelope.iter().map(|s| s.theta()).fold(f64::NEG_INFINITY, f64::max);
    let inf = envelope.iter().map(|s| s.theta()).fold(f64::INFINITY, f64::min);
    let half_sup = 0.5 * sup;
    if !(half_sup < inf) {
        return Err(Error::EmptyWindow { half_sup, inf });
    }
    let n = envelope.len() as f64;
    let rho = envelope.iter().map(|s| s.rho()).sum::<f64>() / n;
    let u: [f64; 3] = core::array::from_fn(|i| envelope.iter().map(|s| s.u()[i]).sum::<f64>() / n);
    let theta = 0.5 * (half_sup + inf);
    let state = FluidState::new(rho, u, theta)?;
    let closeness = envelope
        .iter()
        .map(|s| {
            let du = (0..3).map(|i| sq(s.u()[i] - u[i])).sum::<f64>();
            (s.rho() - rho).abs() + crate::num::sqrt(du) + (s.theta() - theta).abs()
        })
        .fold(0.0, f64::max);
    Ok(GlobalMaxwellianChoice { state, window: (half_sup, inf), closeness })
}

fn sq(x: f64) -> f64 {
    x * x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(r: f64, u: f64, t: f64) -> FluidState {
        FluidState::new(r, [u, 0.0, 0.0], t).unwrap()
    }

    #[test]
    fn entropy_reference_values() {
        assert!((entropy_s(&st(1.0, 0.0, 3.0 / (4.0 * crate::consts::PI))) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_values() {
        let a = st(1.0, 0.0, 1.0);
        assert_eq!(relative_entropy(&a, &a), (0.0, [0.0; 3]));
        let (eta, _) = relative_entropy(&a, &st(1.0, 0.0, 2.0));
        assert!((eta - 3.0 * (core::f64::consts::LN_2 - 0.5)).abs() < 1e-15);
        assert!((eta - 0.579_442).abs() < 1e-6);
        let (eta, q) = relative_entropy(&st(1.2, 0.1, 0.9), &st(1.0, 0.0, 1.0));
        assert!(eta > 0.0);
        assert!((q[0] - (0.1 * eta + 0.1 * (1.2 * 0.9 - 1.0))).abs() < 1e-15);
    }

    #[test]
    fn window_choice() {
        let c = choose_global_maxwellian(&[st(1.0, 0.0, 1.0)]).unwrap();
        assert_eq!(c.window, (0.5, 1.0));
        assert_eq!(c.state.theta(), 0.75);
        let c = choose_global_maxwellian(&[st(1.0, 0.0, 0.8), st(1.0, 0.0, 1.0)]).unwrap();
        assert!((c.state.theta() - 0.65).abs() < 1e-15);
        assert_eq!(c.window, (0.5, 0.8));
        assert!(matches!(
            choose_global_maxwellian(&[st(1.0, 0.0, 0.4), st(1.0, 0.0, 1.0)]),
            Err(Error::EmptyWindow { .. })
        ));
        assert!(choose_global_maxwellian(&[]).is_err());
    }

    #[test]
    fn sandwich_near_equilibrium() {
        let b = st(1.0, 0.0, 1.0);
        let s = [st(1.01, 0.0, 1.0), st(1.0, 0.02, 1.0), st(1.0, 0.0, 0.97)];
        let c = sandwich_constant(s.iter().map(|x| (x, &b)));
        assert!(c >= 1.0 && c < 10.0);
    }
}
