use quintic_core::{ModeIndex, TorusSpec};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    evolve, prepare_torus_state, GridSpec, Normalization, Observables, Result, SeedPhase, SimError, Solver, Trajectory,
};

/// Window selection for the growth fit.
///
/// The tracked mass (watched modes, or all external modes when nothing is
/// watched) first settles onto a background set by the non-resonant dressing of
/// the torus. The baseline is its maximum over `t <= settle_time`; the window
/// opens at `start_factor` times the baseline and closes at
/// `end_fraction · saturation_scale`, before the nonlinear saturation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitOptions {
    pub settle_time: f64,
    pub start_factor: f64,
    pub end_fraction: f64,
    pub saturation_scale: f64,
    pub dominant_share: f64,
}

impl FitOptions {
    /// Settling over `0.01/ν²` and saturation scale `ν·min ρ`.
    pub fn for_spec(spec: &TorusSpec) -> Self {
        let min_rho = spec.rho.iter().copied().fold(f64::INFINITY, f64::min);
        FitOptions {
            settle_time: 0.01 / (spec.nu * spec.nu),
            start_factor: 100.0,
            end_fraction: 1e-2,
            saturation_scale: spec.nu * min_rho,
            dominant_share: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitOutcome {
    Growth,
    WindowNotFound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub outcome: FitOutcome,
    /// Slope of `(1/2) log(tracked mass)`, i.e. an amplitude growth rate.
    pub rate: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub dominant_modes: Vec<ModeIndex>,
    pub baseline: f64,
    pub start_threshold: f64,
    pub end_threshold: f64,
    pub window_samples: usize,
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    let stderr = if x.len() > 2 { (resid / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, stderr)
}

fn dominant_modes(traj: &Trajectory, at: usize, share: f64) -> Vec<ModeIndex> {
    let Some(spec) = traj.spectrum.get(at) else { return Vec::new() };
    let k = (spec.len() / 2) as ModeIndex;
    let mut ext: Vec<(ModeIndex, f64)> =
        (-k..=k).zip(spec.iter().copied()).filter(|(j, _)| !traj.internal.contains(j)).collect();
    let total: f64 = ext.iter().map(|e| e.1).sum();
    ext.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut out = Vec::new();
    let mut acc = 0.0;
    for (j, m) in ext {
        if acc >= share * total {
            break;
        }
        acc += m;
        out.push(j);
    }
    out.sort_unstable();
    out
}

pub fn fit_growth_rate(traj: &Trajectory, opts: &FitOptions) -> Result<GrowthFit> {
    if traj.len() < 50 {
        return Err(SimError::TooFewSamples(traj.len()));
    }
    let tracked = traj.tracked_mass();
    let baseline =
        traj.times.iter().zip(&tracked).filter(|(t, _)| **t <= opts.settle_time).map(|(_, m)| *m).fold(tracked[0], f64::max);
    let start_threshold = opts.start_factor * baseline;
    let end_threshold = opts.end_fraction * opts.saturation_scale;
    let not_found = GrowthFit {
        outcome: FitOutcome::WindowNotFound,
        rate: 0.0,
        stderr: 0.0,
        window: (traj.times[0], traj.times[0]),
        dominant_modes: Vec::new(),
        baseline,
        start_threshold,
        end_threshold,
        window_samples: 0,
    };
    let start = (0..traj.len()).find(|&i| traj.times[i] > opts.settle_time && tracked[i] >= start_threshold);
    let Some(start) = start else { return Ok(not_found) };
    let end = (start..traj.len()).find(|&i| tracked[i] >= end_threshold).unwrap_or(traj.len() - 1);
    if end < start + 3 {
        return Ok(not_found);
    }
    let x = &traj.times[start..=end];
    let y: Vec<f64> = tracked[start..=end].iter().map(|m| 0.5 * m.ln()).collect();
    let (rate, stderr) = linear_fit(x, &y);
    Ok(GrowthFit {
        outcome: FitOutcome::Growth,
        rate,
        stderr,
        window: (traj.times[start], traj.times[end]),
        dominant_modes: dominant_modes(traj, end, opts.dominant_share),
        baseline,
        start_threshold,
        end_threshold,
        window_samples: end - start + 1,
    })
}

/// Everything needed to turn a torus spec into a seeded run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPolicy {
    pub grid: GridSpec,
    pub normalization: Normalization,
    pub seeds: Vec<ModeIndex>,
    /// Seed amplitude is `seed_factor · √ν`.
    pub seed_factor: f64,
    pub phase: SeedPhase,
    /// Run length is `horizon / ν²`.
    pub horizon: f64,
    /// Target number of samples per trajectory.
    pub samples: usize,
}

impl ScalingPolicy {
    pub fn t_end(&self, nu: f64) -> f64 {
        self.horizon / (nu * nu)
    }

    /// Seed, evolve and fit one torus.
    pub fn run(&self, spec: &TorusSpec) -> Result<(Trajectory, GrowthFit)> {
        let mut state =
            prepare_torus_state(spec, &self.seeds, self.seed_factor * spec.nu.sqrt(), self.phase, &self.grid)?;
        let mut solver = Solver::new(self.grid, self.normalization);
        let t_end = self.t_end(spec.nu);
        let steps = (t_end / self.grid.dt).round().max(1.0) as usize;
        let every = (steps / self.samples.max(1)).max(1);
        let obs = Observables { internal: spec.internal.clone(), watch: self.seeds.clone() };
        let traj = evolve(&mut state, &mut solver, &obs, t_end, every)?;
        let fit = fit_growth_rate(&traj, &FitOptions::for_spec(spec))?;
        Ok((traj, fit))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResult {
    pub nus: Vec<f64>,
    pub fits: Vec<GrowthFit>,
    /// Least-squares slope of `log rate` against `log ν`.
    pub slope: f64,
    pub stderr: f64,
}

/// Largest `ν·max ρ` accepted by [`scaling_experiment`].
pub const MAX_NU_RHO: f64 = 0.2;

/// Growth rate for each ν, in parallel, and the log-log slope.
pub fn scaling_experiment(
    spec: &TorusSpec,
    nus: &[f64],
    policy: &ScalingPolicy,
    jobs: Option<usize>,
) -> Result<ScalingResult> {
    let mut distinct = nus.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(SimError::InvalidScaling(format!("need at least 3 distinct values of nu, got {}", distinct.len())));
    }
    // 0.2 rather than 0.1 so that ρ = (2,1,9) can be swept up to ν = 0.02;
    // the rate there is still within 10% of the normal-form value
    let max_rho = spec.rho.iter().copied().fold(0.0, f64::max);
    if let Some(nu) = nus.iter().find(|&&nu| !(nu > 0.0 && nu * max_rho <= MAX_NU_RHO)) {
        return Err(SimError::InvalidScaling(format!("nu = {nu} violates 0 < nu·max rho <= {MAX_NU_RHO}")));
    }
    let specs: Vec<TorusSpec> = nus
        .iter()
        .map(|&nu| TorusSpec::with_domain(spec.internal.clone(), spec.rho.clone(), nu, spec.domain.clone()))
        .collect::<core::result::Result<_, _>>()?;
    let work = || specs.par_iter().map(|s| policy.run(s).map(|r| r.1)).collect::<Result<Vec<_>>>();
    let fits = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| SimError::InvalidScaling(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    if fits.iter().any(|f| f.outcome == FitOutcome::WindowNotFound) {
        return Err(SimError::WindowNotFound);
    }
    let x: Vec<f64> = nus.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = fits.iter().map(|f| f.rate.ln()).collect();
    let (slope, stderr) = linear_fit(&x, &y);
    Ok(ScalingResult { nus: nus.to_vec(), fits, slope, stderr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nls_sim::ConservedSnapshot;

    fn synthetic(rate: f64) -> Trajectory {
        let k = 10usize;
        let mut t = Trajectory { internal: vec![0], watch: vec![3], ..Default::default() };
        for i in 0..400 {
            let time = i as f64;
            let m = 1e-14 * if time <= 20.0 { 1.0 } else { (2.0 * rate * (time - 20.0)).exp() };
            t.times.push(time);
            t.conserved.push(ConservedSnapshot { mass: 1.0, momentum: 0.0, energy: 1.0 });
            t.actions.push(vec![1.0 - m]);
            t.external_mass.push(m);
            t.watch_abs.push(vec![m.sqrt()]);
            let mut spec = vec![0.0; 2 * k + 1];
            spec[k] = 1.0 - m;
            spec[k + 3] = m;
            t.spectrum.push(spec);
        }
        t
    }

    fn opts() -> FitOptions {
        FitOptions { settle_time: 20.0, start_factor: 100.0, end_fraction: 1e-2, saturation_scale: 1e-2, dominant_share: 0.9 }
    }

    #[test]
    fn recovers_synthetic_exponent() {
        let f = fit_growth_rate(&synthetic(0.0375), &opts()).unwrap();
        assert_eq!(f.outcome, FitOutcome::Growth);
        assert!((f.rate - 0.0375).abs() < 1e-6, "{}", f.rate);
        assert_eq!(f.dominant_modes, vec![3]);
        assert!(f.window.0 > 20.0 && f.window.1 > f.window.0);
    }

    #[test]
    fn flat_trajectory_has_no_window() {
        let f = fit_growth_rate(&synthetic(0.0), &opts()).unwrap();
        assert_eq!(f.outcome, FitOutcome::WindowNotFound);
        assert_eq!(f.rate, 0.0);
    }

    #[test]
    fn short_trajectory_is_refused() {
        let mut t = synthetic(0.01);
        t.times.truncate(10);
        assert_eq!(fit_growth_rate(&t, &opts()), Err(SimError::TooFewSamples(10)));
    }

    #[test]
    fn scaling_preconditions() {
        let spec = TorusSpec::new(vec![-3, 10, -6], vec![2.0, 1.0, 9.0], 0.01).unwrap();
        let policy = ScalingPolicy {
            grid: GridSpec::new(32, 256, 5e-3).unwrap(),
            normalization: Normalization::NormalForm,
            seeds: vec![1, 9],
            seed_factor: 1e-8,
            phase: SeedPhase::Random(1),
            horizon: 0.15,
            samples: 2000,
        };
        assert!(matches!(scaling_experiment(&spec, &[0.01], &policy, None), Err(SimError::InvalidScaling(_))));
        assert!(matches!(scaling_experiment(&spec, &[0.01, 0.01, 0.01], &policy, None), Err(SimError::InvalidScaling(_))));
        assert!(matches!(scaling_experiment(&spec, &[0.01, 0.02, 0.05], &policy, None), Err(SimError::InvalidScaling(_))));
    }
}
