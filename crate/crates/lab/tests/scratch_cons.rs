use std::sync::Arc;
use boltzwave::samples;
use boltzwave_core::collision::*;
use boltzwave_core::exec::Serial;
use boltzwave_core::*;

#[test]
fn scan() {
    let s = FluidState::new(1.0, [0.0; 3], 1.5).unwrap();
    let ang = AngularQuadrature::new(8, 16).unwrap();
    let widths: Vec<f64> = std::env::var("W").unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let widen: f64 = std::env::var("WIDEN").ok().map_or(1.0, |x| x.parse().unwrap());
    for w in widths {
        let grid = Arc::new(VelocityGrid::new(16, w).unwrap());
        let mut rng = samples::rng(0, 1);
        let mut worst = [0.0f64; 5];
        let t = std::time::Instant::now();
        for _ in 0..4 {
            let f = samples::nonnegative_mixture(&grid, &s, &mut rng);
            let mut o = BilinearOptions::covering(&[&f], widen).unwrap(); if let Ok(r) = std::env::var("REFINE") { o.refine = r.parse().unwrap(); } if let Ok(t) = std::env::var("TAIL") { o.tail_tol = t.parse().unwrap(); }
            let d = conservation_defect(&f, &ang, &o, &Serial).unwrap();
            for i in 0..5 { worst[i] = worst[i].max(d[i]); }
        }
        println!("bound {w} worst {:?} {:?}", worst.map(|x| format!("{x:.2e}")), t.elapsed());
    }
}
