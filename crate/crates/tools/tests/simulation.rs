//! Properties of the spectral integrator and the run configuration.

use num_complex::Complex64;
use proptest::prelude::*;
use quintic_tools::config::RunConfig;
use quintic_tools::nls_sim::{FourierState, GridSpec, Normalization, Solver};

fn random_state(grid: &GridSpec, coeffs: &[(f64, f64)]) -> FourierState {
    let mut s = FourierState::zero(grid);
    let k = grid.k as i64;
    for (j, &(re, im)) in (-k..=k).zip(coeffs) {
        s.set(j, Complex64::new(re, im)).unwrap();
    }
    s
}

fn coeffs(k: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-0.05f64..0.05, -0.05f64..0.05), 2 * k + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadratic_invariants_hold_per_step(c in coeffs(8), dt in 1e-3f64..2e-2) {
        let grid = GridSpec::new(8, 64, dt).unwrap();
        let mut s = random_state(&grid, &c);
        let mut solver = Solver::new(grid, Normalization::NormalForm);
        let c0 = solver.conserved(&s);
        for _ in 0..20 {
            solver.step(&mut s).unwrap();
        }
        let c1 = solver.conserved(&s);
        prop_assert!((c1.mass - c0.mass).abs() <= 1e-13 * c0.mass.max(1e-300));
        prop_assert!((c1.momentum - c0.momentum).abs() <= 1e-13 * c0.mass.max(1e-300) * 8.0);
    }

    #[test]
    fn reversed_steps_return_to_the_start(c in coeffs(8)) {
        let grid = GridSpec::new(8, 64, 1e-2).unwrap();
        let start = random_state(&grid, &c);
        let mut s = start.clone();
        let mut fwd = Solver::new(grid, Normalization::Pde);
        let mut back = fwd.reversed();
        for _ in 0..50 {
            fwd.step(&mut s).unwrap();
        }
        for _ in 0..50 {
            back.step(&mut s).unwrap();
        }
        let err = s.a.iter().zip(&start.a).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12, "{}", err);
    }

    #[test]
    fn config_text_round_trips(
        nu in 1e-4f64..0.1,
        dt in 1e-4f64..5e-3,
        band in 4usize..40,
        seeds in prop::collection::vec(-30i64..30, 0..4),
        seed in any::<u64>(),
    ) {
        let mut c = RunConfig::default();
        c.set("preset", "thm3-unstable").unwrap();
        c.set("nu", &nu.to_string()).unwrap();
        c.set("dt", &dt.to_string()).unwrap();
        c.set("band", &band.to_string()).unwrap();
        let list: Vec<String> = seeds.iter().map(|s| s.to_string()).collect();
        c.set("seeds", if list.is_empty() { "none".to_string() } else { list.join(",") }.as_str()).unwrap();
        c.set("seed", &seed.to_string()).unwrap();
        let mut d = RunConfig::default();
        d.apply_text(&c.to_text()).unwrap();
        prop_assert_eq!(c, d);
    }
}
