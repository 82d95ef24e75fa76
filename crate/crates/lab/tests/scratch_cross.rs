use std::sync::Arc;
use boltzwave::samples;
use boltzwave_core::collision::*;
use boltzwave_core::exec::Serial;
use boltzwave_core::*;

#[test]
fn cross() {
    let s = FluidState::new(1.0, [0.0; 3], 1.5).unwrap();
    let ang = AngularQuadrature::new(8, 16).unwrap();
    let ns: Vec<usize> = std::env::var("N").unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    for n in ns {
        let grid = Arc::new(VelocityGrid::new(n, 8.0).unwrap());
        let op = assemble_linearized(&s, &grid, &AssemblyOptions::default(), &Serial).unwrap();
        let mut rng = samples::rng(0, 3);
        let gs: Vec<_> = (0..2).map(|_| samples::smooth_micro(&op, &mut rng)).collect();
        for tail in [1e-12, 1e-10, 1e-8] {
            let t = std::time::Instant::now();
            let o = BilinearOptions { tail_tol: tail, ..BilinearOptions::new(s) };
            let qs = quadratic_q_many(op.maxwellian(), &gs, &ang, &o, &Serial).unwrap();
            let errs: Vec<f64> = gs.iter().zip(&qs).map(|(g, q)| {
                let lg = op.apply(g, &Serial).unwrap();
                nu_dual_norm(&op, &lg.add_scaled(q, -2.0).unwrap()) / nu_norm(&op, g)
            }).collect();
            println!("n {n} {tail:e} errs {:?} {:?}", errs.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>(), t.elapsed());
        }
    }
}
