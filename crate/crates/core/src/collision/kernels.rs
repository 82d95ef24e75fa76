//! Collision frequency and the kernels `k1`, `k2` of the Grad splitting.
//!
//! The kernels use `v − u` throughout, so they are Galilean invariant. The
//! collision frequency carries the factor `π` that makes
//! `−ν + K₂ − K₁` annihilate the collision invariants.

use crate::consts::PI;
use crate::error::{Error, Result};
use crate::maxwellian::FluidState;
use crate::num::{erf, exp, powf, sqrt};
use crate::vec3::{norm2, sub, Vec3};

/// Below this multiple of `√(Rθ)` the frequency switches to its series.
pub const FREQUENCY_SERIES_RADIUS: f64 = 1e-3;

/// Collision frequency of `state` at velocity `v`.
pub fn collision_frequency(state: &FluidState, v: Vec3) -> f64 {
    frequency_radial(state.rho(), state.r_theta(), crate::num::sqrt(norm2(sub(v, state.u()))))
}

/// Collision frequency as a function of `r = |v − u|`.
pub fn frequency_radial(rho: f64, rt: f64, r: f64) -> f64 {
    let pref = PI * 2.0 * rho / sqrt(2.0 * PI * rt);
    if r < FREQUENCY_SERIES_RADIUS * sqrt(rt) {
        let r2 = r * r;
        return pref * (2.0 * rt + r2 / 3.0 - r2 * r2 / (60.0 * rt));
    }
    let gauss_integral = sqrt(PI * rt / 2.0) * erf(r / sqrt(2.0 * rt));
    pref * ((rt / r + r) * gauss_integral + rt * exp(-r * r / (2.0 * rt)))
}

/// Prefactor `πρ/(2πRθ)^{3/2}` shared by both kernels.
#[inline]
pub fn kernel_prefactor(state: &FluidState) -> f64 {
    PI * state.rho() / powf(2.0 * PI * state.r_theta(), 1.5)
}

pub fn kernel_k1(state: &FluidState, v: Vec3, v_star: Vec3) -> f64 {
    let rt = state.r_theta();
    let u = state.u();
    let r = sqrt(norm2(sub(v, v_star)));
    kernel_prefactor(state) * r * exp(-norm2(sub(v, u)) / (4.0 * rt) - norm2(sub(v_star, u)) / (4.0 * rt))
}

pub fn kernel_k2(state: &FluidState, v: Vec3, v_star: Vec3) -> Result<f64> {
    let r2 = norm2(sub(v, v_star));
    if r2 == 0.0 {
        return Err(Error::SingularKernel);
    }
    let rt = state.r_theta();
    let u = state.u();
    let de = norm2(sub(v, u)) - norm2(sub(v_star, u));
    Ok(4.0 * kernel_prefactor(state) / sqrt(r2) * exp(-r2 / (8.0 * rt) - de * de / (8.0 * rt * r2)))
}

/// `k2 − k1` for relative velocity `w = v − u` and offset `d = v* − v`,
/// with `c` the kernel prefactor and `rt = Rθ`. `d` must be nonzero.
#[inline]
pub fn kernel_difference(w: Vec3, d: Vec3, c: f64, rt: f64) -> f64 {
    let r2 = norm2(d);
    let r = sqrt(r2);
    let wd = w[0] * d[0] + w[1] * d[1] + w[2] * d[2];
    let ww = norm2(w);
    let s = 2.0 * wd + r2;
    let k2 = 4.0 * c / r * exp(-r2 / (8.0 * rt) - s * s / (8.0 * rt * r2));
    let k1 = c * r * exp(-(2.0 * ww + 2.0 * wd + r2) / (4.0 * rt));
    k2 - k1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_state() -> FluidState {
        FluidState::new(1.0, [0.0; 3], 1.5).unwrap()
    }

    #[test]
    fn frequency_at_bulk_velocity() {
        let s = unit_state();
        let nu0 = collision_frequency(&s, [0.0; 3]);
        assert!((nu0 / PI - 4.0 / sqrt(2.0 * PI)).abs() < 1e-12);
        assert!((nu0 / PI - 1.595_769_121_605_730_7).abs() < 1e-12);
        // Extrapolate the closed form from just outside the series radius.
        let a = frequency_radial(1.0, 1.0, 2e-3);
        let b = frequency_radial(1.0, 1.0, 4e-3);
        let extrap = (4.0 * a - b) / 3.0;
        assert!((extrap - nu0).abs() < 1e-10 * nu0);
    }

    #[test]
    fn series_matches_closed_form_at_switch() {
        for &rt in &[0.3, 1.0, 4.0] {
            let r = FREQUENCY_SERIES_RADIUS * sqrt(rt);
            let below = frequency_radial(1.0, rt, r * (1.0 - 1e-9));
            let above = frequency_radial(1.0, rt, r * (1.0 + 1e-9));
            assert!((below - above).abs() < 1e-9 * above);
        }
    }

    #[test]
    fn frequency_grows_like_pi_rho_speed() {
        let s = unit_state();
        let nu = collision_frequency(&s, [10.0, 0.0, 0.0]);
        assert!((nu / (PI * 10.0) - 1.0).abs() < 0.02);
    }

    #[test]
    fn frequency_depends_on_speed_only() {
        let s = FluidState::new(1.2, [0.3, -0.2, 0.1], 0.9).unwrap();
        let w = [0.7, -1.1, 0.4];
        let c = libm::cos(0.8);
        let sn = libm::sin(0.8);
        let rotated = [c * w[0] - sn * w[1], sn * w[0] + c * w[1], w[2]];
        let a = collision_frequency(&s, crate::vec3::add(s.u(), w));
        let b = collision_frequency(&s, crate::vec3::add(s.u(), rotated));
        assert!((a - b).abs() < 1e-13 * a);
    }

    #[test]
    fn k2_reference_point() {
        // Independent evaluation of the printed formula with u = 0, Rθ = 1:
        // |v − v*|² = 1, |v|² − |v*|² = 1.
        let s = unit_state();
        let expected = 4.0 * PI / libm::pow(2.0 * PI, 1.5) * libm::exp(-1.0 / 8.0 - 1.0 / 8.0);
        let k2 = kernel_k2(&s, [1.0, 0.0, 0.0], [0.0; 3]).unwrap();
        assert!((k2 - expected).abs() < 1e-15);
        assert!((expected - 0.621_393_1).abs() < 1e-7);
        assert_eq!(kernel_k2(&s, [1.0, 2.0, 3.0], [1.0, 2.0, 3.0]), Err(Error::SingularKernel));
    }

    #[test]
    fn difference_form_matches_direct_kernels() {
        let s = FluidState::new(0.8, [0.2, 0.1, -0.3], 1.3).unwrap();
        let v = [0.4, -0.9, 1.2];
        let vs = [-0.5, 0.3, 0.6];
        let direct = kernel_k2(&s, v, vs).unwrap() - kernel_k1(&s, v, vs);
        let fast = kernel_difference(sub(v, s.u()), sub(vs, v), kernel_prefactor(&s), s.r_theta());
        assert!((direct - fast).abs() < 1e-13 * direct.abs());
    }

    #[test]
    fn k1_vanishes_on_diagonal() {
        let s = unit_state();
        assert_eq!(kernel_k1(&s, [0.3, 0.2, 0.1], [0.3, 0.2, 0.1]), 0.0);
    }
}
