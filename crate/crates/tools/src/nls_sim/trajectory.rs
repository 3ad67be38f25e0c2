use std::f64::consts::TAU;

use num_complex::Complex64;
use quintic_core::{ModeIndex, TorusSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ConservedSnapshot, FourierState, GridSpec, Result, SimError, Solver};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedPhase {
    Fixed(f64),
    /// Uniform phases from a ChaCha8 stream with this seed.
    Random(u64),
}

/// Torus point with `|a_p|² = νρ_i` at zero phase plus small seeds on external modes.
pub fn prepare_torus_state(
    spec: &TorusSpec,
    seeds: &[ModeIndex],
    seed_amp: f64,
    phase: SeedPhase,
    grid: &GridSpec,
) -> Result<FourierState> {
    if !(seed_amp >= 0.0 && seed_amp.is_finite()) {
        return Err(SimError::InvalidGrid(format!("seed amplitude {seed_amp} must be non-negative")));
    }
    let mut s = FourierState::zero(grid);
    for (&p, &r) in spec.internal.iter().zip(&spec.rho) {
        s.set(p, Complex64::new((spec.nu * r).sqrt(), 0.0))?;
    }
    let mut rng = match phase {
        SeedPhase::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        SeedPhase::Fixed(_) => None,
    };
    for &j in seeds {
        if spec.is_internal(j) {
            return Err(SimError::InternalSeed(j));
        }
        let phi = match (&mut rng, phase) {
            (Some(r), _) => r.gen_range(0.0..TAU),
            (None, SeedPhase::Fixed(phi)) => phi,
            (None, SeedPhase::Random(_)) => unreachable!(),
        };
        s.set(j, Complex64::from_polar(seed_amp, phi))?;
    }
    Ok(s)
}

/// What to record besides the conserved quantities.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Observables {
    pub internal: Vec<ModeIndex>,
    pub watch: Vec<ModeIndex>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Trajectory {
    pub internal: Vec<ModeIndex>,
    pub watch: Vec<ModeIndex>,
    pub times: Vec<f64>,
    pub conserved: Vec<ConservedSnapshot>,
    /// `|a_p|²` per internal mode.
    pub actions: Vec<Vec<f64>>,
    pub external_mass: Vec<f64>,
    /// `|a_j|` per watched mode.
    pub watch_abs: Vec<Vec<f64>>,
    /// `|a_j|²` over the whole band, `j = -K..=K`.
    #[serde(skip)]
    pub spectrum: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn band(&self) -> usize {
        self.spectrum.first().map_or(0, |s| s.len() / 2)
    }

    /// Mass in the watched modes, or the external mass when nothing is watched.
    pub fn tracked_mass(&self) -> Vec<f64> {
        if self.watch.is_empty() {
            return self.external_mass.clone();
        }
        self.watch_abs.iter().map(|w| w.iter().map(|x| x * x).sum()).collect()
    }

    fn record(&mut self, state: &FourierState, c: ConservedSnapshot) {
        self.times.push(state.t);
        self.conserved.push(c);
        self.actions.push(self.internal.iter().map(|&p| state.mass_of(p)).collect());
        let k = state.band() as ModeIndex;
        let external = (-k..=k).zip(&state.a).filter(|(j, _)| !self.internal.contains(j)).map(|(_, v)| v.norm_sqr()).sum();
        self.external_mass.push(external);
        self.watch_abs.push(self.watch.iter().map(|&j| state.get(j).norm()).collect());
        self.spectrum.push(state.a.iter().map(|v| v.norm_sqr()).collect());
    }

    /// Header `t,mass,momentum,energy,I_p,I_q[,I_m],ext_mass,<watch modes>` then one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,mass,momentum,energy");
        for name in ["I_p", "I_q", "I_m"].iter().take(self.internal.len()) {
            out.push(',');
            out.push_str(name);
        }
        out.push_str(",ext_mass");
        for j in &self.watch {
            out.push_str(&format!(",a_{j}"));
        }
        out.push('\n');
        for i in 0..self.len() {
            let c = &self.conserved[i];
            out.push_str(&format!("{:?},{:?},{:?},{:?}", self.times[i], c.mass, c.momentum, c.energy));
            for v in &self.actions[i] {
                out.push_str(&format!(",{v:?}"));
            }
            out.push_str(&format!(",{:?}", self.external_mass[i]));
            for v in &self.watch_abs[i] {
                out.push_str(&format!(",{v:?}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Step to `t_end`, sampling every `sample_every` steps and at the end.
///
/// Mass is an exact invariant of the scheme, so a relative drift above 1e-6
/// means the integrator failed and the run aborts.
pub fn evolve(
    state: &mut FourierState,
    solver: &mut Solver,
    obs: &Observables,
    t_end: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    if !(t_end > 0.0) || sample_every == 0 {
        return Err(SimError::InvalidGrid("t_end and sample_every must be positive".into()));
    }
    for &j in obs.internal.iter().chain(&obs.watch) {
        if !solver.grid().contains(j) {
            return Err(SimError::OutOfBand(j));
        }
    }
    let steps = (t_end / solver.dt().abs()).round() as usize;
    let mut traj = Trajectory { internal: obs.internal.clone(), watch: obs.watch.clone(), ..Default::default() };
    let c0 = solver.conserved(state);
    traj.record(state, c0);
    for n in 1..=steps {
        solver.step(state)?;
        if n % sample_every == 0 || n == steps {
            let c = solver.conserved(state);
            let drift = (c.mass - c0.mass).abs();
            if !c.energy.is_finite() || drift > 1e-6 * c0.mass.max(f64::MIN_POSITIVE) {
                return Err(SimError::BlowUp { t: state.t, why: format!("mass drift {drift:e}") });
            }
            traj.record(state, c);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nls_sim::Normalization;

    fn spec3() -> TorusSpec {
        TorusSpec::new(vec![-3, 10, -6], vec![2.0, 1.0, 9.0], 0.01).unwrap()
    }

    #[test]
    fn seeded_state() {
        let g = GridSpec::new(32, 256, 5e-3).unwrap();
        let s = prepare_torus_state(&spec3(), &[1, 9], 1e-8, SeedPhase::Random(42), &g).unwrap();
        let ext: f64 = [1, 9].iter().map(|&j| s.mass_of(j)).sum();
        assert!((ext - 2e-16).abs() < 1e-30);
        assert_eq!(s, prepare_torus_state(&spec3(), &[1, 9], 1e-8, SeedPhase::Random(42), &g).unwrap());
        assert_ne!(s, prepare_torus_state(&spec3(), &[1, 9], 1e-8, SeedPhase::Random(43), &g).unwrap());
        assert_eq!(
            prepare_torus_state(&spec3(), &[10], 1e-8, SeedPhase::Fixed(0.0), &g),
            Err(SimError::InternalSeed(10))
        );
        assert_eq!(
            prepare_torus_state(&spec3(), &[40], 1e-8, SeedPhase::Fixed(0.0), &g),
            Err(SimError::OutOfBand(40))
        );
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = GridSpec::new(4, 32, 0.01).unwrap();
        let mut s = FourierState::zero(&g);
        let mut solver = Solver::new(g, Normalization::Pde);
        let t = evolve(&mut s, &mut solver, &Observables { internal: vec![0], watch: vec![1] }, 1.0, 10).unwrap();
        assert_eq!(t.len(), 11);
        assert!(t.conserved.iter().all(|c| c.mass == 0.0 && c.energy == 0.0));
        assert!(t.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_internal_mode_keeps_its_modulus() {
        let g = GridSpec::new(4, 32, 0.01).unwrap();
        let mut s = FourierState::zero(&g);
        s.set(0, Complex64::new(1.0, 0.0)).unwrap();
        let mut solver = Solver::new(g, Normalization::Pde);
        let t = evolve(&mut s, &mut solver, &Observables { internal: vec![0], watch: vec![] }, 5.0, 50).unwrap();
        assert!(t.actions.iter().all(|a| (a[0] - 1.0).abs() < 1e-14));
    }

    #[test]
    fn csv_layout() {
        let g = GridSpec::new(32, 256, 5e-3).unwrap();
        let mut s = prepare_torus_state(&spec3(), &[1, 9], 1e-9, SeedPhase::Fixed(0.0), &g).unwrap();
        let mut solver = Solver::new(g, Normalization::NormalForm);
        let obs = Observables { internal: vec![-3, 10, -6], watch: vec![1, 9] };
        let t = evolve(&mut s, &mut solver, &obs, 0.05, 5).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,mass,momentum,energy,I_p,I_q,I_m,ext_mass,a_1,a_9"));
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(row.len(), 10);
        assert_eq!(row[1], t.conserved[0].mass);
        assert_eq!(csv.lines().count(), t.len() + 1);
    }
}
