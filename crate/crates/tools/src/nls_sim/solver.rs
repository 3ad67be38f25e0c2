use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{ConservedSnapshot, FourierState, GridSpec, Normalization, Result, SimError};

const MAX_ITERATIONS: usize = 60;

/// Per-trajectory integrator workspace.
pub struct Solver {
    grid: GridSpec,
    dt: f64,
    coupling: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
    half: Vec<Complex64>,
    mid: Vec<Complex64>,
    next: Vec<Complex64>,
    nl: Vec<Complex64>,
    /// Fixed-point sweeps used by the most recent step.
    pub last_iterations: usize,
}

impl core::fmt::Debug for Solver {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Solver").field("grid", &self.grid).field("dt", &self.dt).field("coupling", &self.coupling).finish()
    }
}

impl Clone for Solver {
    fn clone(&self) -> Self {
        let mut s = Solver::from_coupling(self.grid, self.coupling);
        s.set_dt(self.dt);
        s
    }
}

impl Solver {
    pub fn new(grid: GridSpec, normalization: Normalization) -> Self {
        Self::from_coupling(grid, normalization.coupling())
    }

    pub fn from_coupling(grid: GridSpec, coupling: f64) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n);
        let inverse = planner.plan_fft_inverse(grid.n);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        let zero = Complex64::new(0.0, 0.0);
        let mut s = Solver {
            grid,
            dt: grid.dt,
            coupling,
            forward,
            inverse,
            buf: vec![zero; grid.n],
            scratch: vec![zero; scratch_len],
            half: Vec::new(),
            mid: vec![zero; grid.len()],
            next: vec![zero; grid.len()],
            nl: vec![zero; grid.len()],
            last_iterations: 0,
        };
        s.set_dt(grid.dt);
        s
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// The same integrator run backwards in time.
    pub fn reversed(&self) -> Self {
        let mut s = self.clone();
        s.set_dt(-self.dt);
        s
    }

    /// Change the step, e.g. to halve it in a convergence study. Negative steps are allowed.
    pub fn set_dt(&mut self, dt: f64) {
        self.dt = dt;
        self.half = self.grid.modes().map(|j| Complex64::from_polar(1.0, -((j * j) as f64) * dt / 2.0)).collect();
    }

    fn to_physical(&mut self, a: &[Complex64]) {
        let n = self.grid.n as i64;
        self.buf.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for (j, &v) in self.grid.modes().zip(a) {
            self.buf[j.rem_euclid(n) as usize] = v;
        }
        self.inverse.process_with_scratch(&mut self.buf, &mut self.scratch);
    }

    /// Band projection of `|u|^4 u` into `self.nl`.
    fn nonlinearity(&mut self, a: &[Complex64]) {
        self.to_physical(a);
        for u in self.buf.iter_mut() {
            let r = u.norm_sqr();
            *u *= r * r;
        }
        self.forward.process_with_scratch(&mut self.buf, &mut self.scratch);
        let n = self.grid.n as i64;
        let scale = 1.0 / self.grid.n as f64;
        for (slot, j) in self.nl.iter_mut().zip(self.grid.modes()) {
            *slot = self.buf[j.rem_euclid(n) as usize] * scale;
        }
    }

    pub fn conserved(&mut self, state: &FourierState) -> ConservedSnapshot {
        let mut mass = 0.0;
        let mut momentum = 0.0;
        let mut kinetic = 0.0;
        for (j, v) in self.grid.modes().zip(&state.a) {
            let m = v.norm_sqr();
            mass += m;
            momentum += j as f64 * m;
            kinetic += (j * j) as f64 * m;
        }
        self.to_physical(&state.a);
        let sextic = self.buf.iter().map(|u| u.norm_sqr().powi(3)).sum::<f64>() / self.grid.n as f64;
        ConservedSnapshot { mass, momentum, energy: kinetic + self.coupling / 3.0 * sextic }
    }

    pub fn step(&mut self, state: &mut FourierState) -> Result<()> {
        for (v, h) in state.a.iter_mut().zip(&self.half) {
            *v *= h;
        }
        self.midpoint(state)?;
        for (v, h) in state.a.iter_mut().zip(&self.half) {
            *v *= h;
        }
        state.t += self.dt;
        Ok(())
    }

    /// Implicit midpoint for `a' = -i g P(|u|^4 u)`, solved by fixed-point sweeps on
    /// the midpoint `m = a - i g (dt/2) P(|m|^4 m)`.
    fn midpoint(&mut self, state: &mut FourierState) -> Result<()> {
        let factor = Complex64::new(0.0, -self.coupling * self.dt / 2.0);
        let scale = state.a.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            self.last_iterations = 0;
            return Ok(());
        }
        let a = std::mem::take(&mut state.a);
        self.mid.copy_from_slice(&a);
        let mut previous = f64::INFINITY;
        let mut iterations = 0;
        loop {
            iterations += 1;
            let mid = std::mem::take(&mut self.mid);
            self.nonlinearity(&mid);
            self.mid = mid;
            let mut diff: f64 = 0.0;
            for i in 0..a.len() {
                self.next[i] = a[i] + factor * self.nl[i];
                diff = diff.max((self.next[i] - self.mid[i]).norm());
            }
            std::mem::swap(&mut self.mid, &mut self.next);
            if !diff.is_finite() {
                state.a = a;
                return Err(SimError::BlowUp { t: state.t, why: "non-finite midpoint iterate".into() });
            }
            // stop at round-off: either tiny, or no longer contracting
            if diff <= 4.0 * f64::EPSILON * scale || (diff >= previous && diff <= 1e-12 * scale) {
                break;
            }
            if iterations == MAX_ITERATIONS {
                state.a = a;
                return Err(SimError::BlowUp { t: state.t, why: "midpoint iteration did not contract".into() });
            }
            previous = diff;
        }
        self.last_iterations = iterations;
        state.a = a.iter().zip(&self.mid).map(|(x, m)| 2.0 * m - x).collect();
        Ok(())
    }
}

/// Mass, momentum and energy with the grid mean standing in for `(1/2π)∫`.
pub fn conserved(state: &FourierState, grid: &GridSpec, normalization: Normalization) -> ConservedSnapshot {
    Solver::new(*grid, normalization).conserved(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nls_sim::{prepare_torus_state, SeedPhase};
    use quintic_core::TorusSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(grid: &GridSpec, amp: f64, seed: u64) -> FourierState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = FourierState::zero(grid);
        for (v, j) in s.a.iter_mut().zip(grid.modes()) {
            let decay = amp / (1.0 + (j * j) as f64);
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay;
        }
        s
    }

    #[test]
    fn grid_invariants() {
        assert!(GridSpec::new(32, 256, 5e-3).is_ok());
        assert!(GridSpec::new(32, 128, 5e-3).is_err());
        assert!(GridSpec::new(32, 200, 5e-3).is_err());
        assert!(GridSpec::new(8, 64, 0.0).is_err());
        assert!(GridSpec::new(32, 256, 1e-2).is_err());
        assert_eq!(GridSpec::with_band(16, 0.01).unwrap().n, 128);
    }

    #[test]
    fn single_mode_snapshots() {
        let g = GridSpec::new(4, 32, 1e-3).unwrap();
        let mut s = FourierState::zero(&g);
        s.set(0, Complex64::new(1.0, 0.0)).unwrap();
        let c = conserved(&s, &g, Normalization::Pde);
        assert!((c.mass - 1.0).abs() < 1e-15 && c.momentum == 0.0 && (c.energy - 1.0 / 3.0).abs() < 1e-15);
        let mut s = FourierState::zero(&g);
        s.set(1, Complex64::new(1.0, 0.0)).unwrap();
        let c = conserved(&s, &g, Normalization::Pde);
        assert!((c.mass - 1.0).abs() < 1e-15 && (c.momentum - 1.0).abs() < 1e-15);
        assert!((c.energy - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn torus_state_snapshot() {
        let spec = TorusSpec::new(vec![-3, 10, -6], vec![2.0, 1.0, 9.0], 0.01).unwrap();
        let g = GridSpec::new(32, 256, 5e-3).unwrap();
        let s = prepare_torus_state(&spec, &[], 0.0, SeedPhase::Fixed(0.0), &g).unwrap();
        let c = conserved(&s, &g, Normalization::Pde);
        assert!((c.mass - 0.12).abs() < 1e-15);
        assert!((c.momentum + 0.50).abs() < 1e-15);
    }

    #[test]
    fn single_mode_step_is_a_phase() {
        let g = GridSpec::new(4, 32, 1e-2).unwrap();
        let c = Complex64::from_polar(0.8, 0.3);
        let mut s = FourierState::zero(&g);
        s.set(2, c).unwrap();
        let mut solver = Solver::new(g, Normalization::Pde);
        solver.step(&mut s).unwrap();
        let theta = 4.0 * g.dt + c.norm().powi(4) * g.dt;
        let exact = c * Complex64::from_polar(1.0, -theta);
        assert!((s.get(2).norm() - c.norm()).abs() < 1e-15);
        // midpoint rotates by 2·atan(θ/2) instead of θ in the nonlinear part
        let nl = c.norm().powi(4) * g.dt;
        assert!((s.get(2) - exact).norm() < nl.powi(3));
        assert!(s.a.iter().enumerate().all(|(i, v)| i == 6 || v.norm() < 1e-15));
    }

    #[test]
    fn mass_and_momentum_per_step() {
        let g = GridSpec::new(8, 64, 1e-2).unwrap();
        let mut s = random_state(&g, 0.5, 7);
        let mut solver = Solver::new(g, Normalization::NormalForm);
        let c0 = solver.conserved(&s);
        for _ in 0..100 {
            solver.step(&mut s).unwrap();
        }
        let c1 = solver.conserved(&s);
        assert!((c1.mass - c0.mass).abs() <= 1e-13 * c0.mass);
        assert!((c1.momentum - c0.momentum).abs() <= 1e-13 * c0.mass);
    }

    #[test]
    fn second_order_convergence() {
        let g = GridSpec::new(8, 64, 0.02).unwrap();
        let s0 = random_state(&g, 0.6, 11);
        let run = |dt: f64, steps: usize| {
            let mut solver = Solver::new(g, Normalization::NormalForm);
            solver.set_dt(dt);
            let mut s = s0.clone();
            for _ in 0..steps {
                solver.step(&mut s).unwrap();
            }
            s
        };
        let err = |a: &FourierState, b: &FourierState| a.a.iter().zip(&b.a).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        let reference = run(0.0025, 160);
        let e1 = err(&run(0.02, 20), &reference);
        let e2 = err(&run(0.01, 40), &reference);
        let e3 = err(&run(0.005, 80), &reference);
        let r1 = e1 / e2;
        let r2 = e2 / e3;
        assert!((3.0..5.5).contains(&r1) && (3.0..5.5).contains(&r2), "{r1} {r2}");
    }

    #[test]
    fn reverses() {
        let g = GridSpec::new(8, 64, 1e-2).unwrap();
        let s0 = random_state(&g, 0.6, 3);
        let mut s = s0.clone();
        let mut fwd = Solver::new(g, Normalization::NormalForm);
        let mut back = fwd.reversed();
        for _ in 0..500 {
            fwd.step(&mut s).unwrap();
        }
        for _ in 0..500 {
            back.step(&mut s).unwrap();
        }
        let d = s.a.iter().zip(&s0.a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d < 1e-12, "{d}");
        assert!(s.t.abs() < 1e-12);
    }
}
