use boltzwave_core::collision::*;
use boltzwave_core::exec::Serial;
use boltzwave_core::fluid::*;
use boltzwave_core::rarefaction::*;
use boltzwave_core::*;
use std::time::Instant;

fn env(k: &str, d: f64) -> f64 { std::env::var(k).ok().and_then(|s| s.parse().ok()).unwrap_or(d) }

#[test]
fn scratch() {
    let (mu1, kappa1) = (env("MU1", 0.0), env("KAPPA1", 0.0));
    let (mu1, kappa1) = if mu1 > 0.0 { (mu1, kappa1) } else {
        let t = transport_coefficients(1.0, 1.0, &TransportOptions::default(), &Serial).unwrap();
        println!("mu1 {} kappa1 {}", t.mu, t.kappa); (t.mu, t.kappa)
    };
    let table = TransportTable::hard_sphere_scaling(mu1, kappa1, 0.3, 3.0, 50).unwrap();
    let right = FluidState::new(1.0, [0.0; 3], 1.0).unwrap();
    let cfg = RarefactionConfig::from_strength(right, env("DELTA", 0.2), env("EPS", 0.05), 2.0).unwrap();
    println!("left {:?}", cfg.left());
    let setup = ExperimentSetup {
        config: cfg,
        n_cells: env("CELLS", 4000.0) as usize,
        half_length: env("L", 700.0),
        transverse: (1, 1),
        perturbation: PerturbationSpec { amplitude: env("AMP", 0.02), center: env("CENTER", 0.0), half_width: env("HW", 4.0), ..Default::default() },
        t_end: env("TEND", 200.0),
        record_every: env("REC", 20.0),
        limits: StepLimits::default(),
        micro_gram: None,
    };
    let t0 = Instant::now();
    let r = run_stability_experiment(&setup, &table, &Serial, &mut |row, _| {
        println!("t {:7.1} l2 {:.3e} linf {:.3e} h1 {:.3e} eta {:.4e} qout {:.3e} E {:.3e} cons {:.1e} {:.1e} {:.1e} minrho {:.4} [{:?}]",
            row.t_acoustic, row.norms.l2, row.norms.linf, row.norms.h1, row.eta, row.eta_outflow, row.energy, row.conservation[0], row.conservation[1], row.conservation[2], row.min_rho, t0.elapsed());
    }).unwrap();
    println!("steps {} sandwich {} ratio {}", r.steps, r.sandwich, r.final_linf() / r.initial_linf());
}
