//! Seeded random inputs for the verification suites.

use std::sync::Arc;

use boltzwave_core::collision::LinearizedOperator;
use boltzwave_core::{DistributionSnapshot, FluidState, VelocityGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A mixture of two or three Maxwellians near `base`: nonnegative and
/// away from equilibrium.
pub fn nonnegative_mixture(grid: &Arc<VelocityGrid>, base: &FluidState, rng: &mut ChaCha8Rng) -> DistributionSnapshot {
    let parts = rng.gen_range(2..=3);
    let width = base.r_theta().sqrt();
    let comps: Vec<FluidState> = (0..parts)
        .map(|_| {
            let u = base.u();
            FluidState::new(
                base.rho() * rng.gen_range(0.2..1.0),
                [
                    u[0] + width * rng.gen_range(-0.5..0.5),
                    u[1] + width * rng.gen_range(-0.5..0.5),
                    u[2] + width * rng.gen_range(-0.5..0.5),
                ],
                base.theta() * rng.gen_range(0.7..1.3),
            )
            .expect("positive by construction")
        })
        .collect();
    DistributionSnapshot::from_fn(grid.clone(), |v| comps.iter().map(|c| c.maxwellian(v)).sum())
}

/// `P₁[p(c) M]` with `p` a random cubic in the thermal velocity `c`.
pub fn smooth_micro(op: &LinearizedOperator, rng: &mut ChaCha8Rng) -> DistributionSnapshot {
    let s = op.state();
    let width = s.r_theta().sqrt();
    let u = s.u();
    let mut exps = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                exps.push([a as i32, b as i32, c as i32]);
            }
        }
    }
    let coef: Vec<f64> = exps.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let g = DistributionSnapshot::from_fn(op.grid().clone(), |v| {
        let c = [(v[0] - u[0]) / width, (v[1] - u[1]) / width, (v[2] - u[2]) / width];
        let p: f64 = exps.iter().zip(&coef).map(|(e, k)| k * c[0].powi(e[0]) * c[1].powi(e[1]) * c[2].powi(e[2])).sum();
        p * s.maxwellian(v)
    });
    op.basis().project_p1(&g).expect("same grid")
}

/// Nodal noise `r_k M_k` with `r_k` uniform in `[−1, 1]`.
pub fn rough(op: &LinearizedOperator, rng: &mut ChaCha8Rng) -> DistributionSnapshot {
    let m = op.maxwellian().values();
    let vals = m.iter().map(|m| rng.gen_range(-1.0..1.0) * m).collect();
    DistributionSnapshot::new(op.grid().clone(), vals).expect("same grid")
}
