//! Galerkin-truncated spectral simulation of `i u_t + u_xx = g |u|^4 u` on the circle.
//!
//! The state is the band `a_j`, `|j| <= K`. One step is a Strang composition:
//! exact linear half step, a nonlinear substep, exact linear half step. The
//! nonlinear substep integrates the band-projected flow `i a' = g P_K(|u|^4 u)`
//! with the implicit midpoint rule, so mass and momentum (quadratic invariants of
//! that flow) are kept to round-off and the whole step stays time-symmetric.

mod fit;
mod solver;
mod trajectory;

pub use fit::{fit_growth_rate, scaling_experiment, FitOptions, FitOutcome, GrowthFit, ScalingPolicy, ScalingResult};
pub use solver::{conserved, Solver};
pub use trajectory::{evolve, prepare_torus_state, Observables, SeedPhase, Trajectory};

use std::f64::consts::TAU;

use num_complex::Complex64;
use quintic_core::ModeIndex;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("mode {0} lies outside the band")]
    OutOfBand(ModeIndex),
    #[error("seed mode {0} is internal")]
    InternalSeed(ModeIndex),
    #[error("integration blew up at t = {t}: {why}")]
    BlowUp { t: f64, why: String },
    #[error("trajectory has {0} samples, the fit needs at least 50")]
    TooFewSamples(usize),
    #[error("no growth window: the tracked mass never left its baseline")]
    WindowNotFound,
    #[error("invalid scaling experiment: {0}")]
    InvalidScaling(String),
    #[error(transparent)]
    Core(#[from] quintic_core::Error),
}

pub type Result<T> = core::result::Result<T, SimError>;

/// Which coefficient multiplies the quintic term.
///
/// `Pde` is the equation with unit coefficient, Hamiltonian `∫|u_x|² + (1/3)|u|⁶`.
/// `NormalForm` uses coefficient 3, whose resonant part is the unit-weight sum over
/// resonant sextuples that the normal-form block formulas are built on; growth
/// rates from `normal_form` apply to this normalization verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Pde,
    NormalForm,
}

impl Normalization {
    pub fn coupling(self) -> f64 {
        match self {
            Normalization::Pde => 1.0,
            Normalization::NormalForm => 3.0,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pde" => Some(Normalization::Pde),
            "normal-form" => Some(Normalization::NormalForm),
            _ => None,
        }
    }
}

/// Band half-width `k`, collocation points `n` and time step.
///
/// `n` must be a power of two with `n > 6k`: the quintic product of a band-`k`
/// field reaches `5k`, and `n > 6k` keeps aliases off the band, which makes the
/// projected nonlinearity exact and the grid mean of `|u|^6` exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub k: usize,
    pub n: usize,
    pub dt: f64,
}

impl GridSpec {
    pub fn new(k: usize, n: usize, dt: f64) -> Result<Self> {
        if k == 0 {
            return Err(SimError::InvalidGrid("band half-width must be positive".into()));
        }
        if !n.is_power_of_two() || n <= 6 * k {
            return Err(SimError::InvalidGrid(format!("n = {n} must be a power of two above 6k = {}", 6 * k)));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(SimError::InvalidGrid(format!("dt = {dt} must be positive")));
        }
        // Past k²·dt = 2π linear phase differences alias onto multiples of 2π
        // and the splitting stops conserving energy.
        if (k * k) as f64 * dt >= TAU {
            return Err(SimError::InvalidGrid(format!("k²·dt = {} must stay below 2π", (k * k) as f64 * dt)));
        }
        Ok(GridSpec { k, n, dt })
    }

    /// Smallest admissible `n` for the band.
    pub fn with_band(k: usize, dt: f64) -> Result<Self> {
        Self::new(k, (6 * k + 1).next_power_of_two(), dt)
    }

    pub fn len(&self) -> usize {
        2 * self.k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, j: ModeIndex) -> bool {
        j.unsigned_abs() as usize <= self.k
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> {
        let k = self.k as ModeIndex;
        -k..=k
    }
}

/// Band coefficients `a_j` stored at `j + K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    pub a: Vec<Complex64>,
    pub t: f64,
}

impl FourierState {
    pub fn zero(grid: &GridSpec) -> Self {
        FourierState { a: vec![Complex64::new(0.0, 0.0); grid.len()], t: 0.0 }
    }

    pub fn band(&self) -> usize {
        self.a.len() / 2
    }

    fn slot(&self, j: ModeIndex) -> Option<usize> {
        let k = self.band() as ModeIndex;
        (-k..=k).contains(&j).then(|| (j + k) as usize)
    }

    pub fn get(&self, j: ModeIndex) -> Complex64 {
        self.slot(j).map_or(Complex64::new(0.0, 0.0), |i| self.a[i])
    }

    pub fn set(&mut self, j: ModeIndex, v: Complex64) -> Result<()> {
        let i = self.slot(j).ok_or(SimError::OutOfBand(j))?;
        self.a[i] = v;
        Ok(())
    }

    pub fn mass_of(&self, j: ModeIndex) -> f64 {
        self.get(j).norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedSnapshot {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}
