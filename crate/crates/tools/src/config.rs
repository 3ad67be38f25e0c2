//! Flat `key = value` run configuration with embedded defaults and presets.
//!
//! Layers apply in order: defaults, preset, config file, command-line flags.
//! Every key has a textual form, so a printed configuration can be read back.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use quintic_core::resonance::default_bound;
use quintic_core::{ModeIndex, RhoBox, TorusSpec};

use crate::nls_sim::{GridSpec, Normalization, ScalingPolicy, SeedPhase};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {value:?} ({why})")]
    BadValue { key: String, value: String, why: String },
    #[error("unknown preset `{0}` (known: thm2-stable, thm3-unstable, paper-appendixA-setA)")]
    UnknownPreset(String),
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainChoice {
    /// `[1,2]^n` when it contains ρ, otherwise the box of half-width `1e-2` around ρ.
    Auto,
    Cube(f64, f64),
    Around(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub p: Option<ModeIndex>,
    pub q: Option<ModeIndex>,
    pub m: Option<ModeIndex>,
    pub rho: Option<Vec<f64>>,
    pub nu: f64,
    pub domain: DomainChoice,
    pub bound: Option<i64>,
    pub delta: Option<f64>,
    pub kmax: i64,
    pub grid_resolution: usize,
    pub measure_resolution: usize,
    pub conic: bool,
    pub conic_range: i64,
    pub band: usize,
    pub n: Option<usize>,
    pub dt: f64,
    pub t_end: Option<f64>,
    pub horizon: f64,
    pub samples: usize,
    pub seeds: Vec<ModeIndex>,
    pub seed_factor: f64,
    pub seed: u64,
    pub normalization: Normalization,
    pub scaling_nus: Vec<f64>,
    pub report_dynamics: bool,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

pub const KEYS: &[&str] = &[
    "preset",
    "p",
    "q",
    "m",
    "rho",
    "nu",
    "domain",
    "bound",
    "delta",
    "kmax",
    "grid_resolution",
    "measure_resolution",
    "conic",
    "conic_range",
    "band",
    "n",
    "dt",
    "t_end",
    "horizon",
    "samples",
    "seeds",
    "seed_factor",
    "seed",
    "normalization",
    "scaling_nus",
    "report_dynamics",
    "jobs",
    "out",
];

const THM3_UNSTABLE: &[(&str, &str)] = &[
    ("p", "-3"),
    ("q", "10"),
    ("m", "-6"),
    ("rho", "2,1,9"),
    ("nu", "0.01"),
    ("domain", "around:0.01"),
    ("band", "32"),
    ("n", "256"),
    ("dt", "0.005"),
    ("horizon", "0.15"),
    ("seeds", "1,9"),
    ("seed_factor", "1e-8"),
    ("normalization", "normal-form"),
    ("scaling_nus", "0.005,0.01,0.02"),
];

const THM2_STABLE: &[(&str, &str)] = &[
    ("p", "0"),
    ("q", "1"),
    ("m", "none"),
    ("rho", "1.5,1.5"),
    ("nu", "0.01"),
    ("domain", "cube:1:2"),
    ("band", "16"),
    ("n", "128"),
    ("dt", "0.02"),
    ("horizon", "10"),
    ("samples", "4000"),
    ("seeds", "-1,2"),
    ("seed_factor", "1e-8"),
    ("normalization", "normal-form"),
];

fn preset_pairs(name: &str) -> Result<Vec<(&'static str, &'static str)>, ConfigError> {
    match name {
        "thm3-unstable" => Ok(THM3_UNSTABLE.to_vec()),
        "thm2-stable" => Ok(THM2_STABLE.to_vec()),
        "paper-appendixA-setA" => {
            let mut v = THM3_UNSTABLE.to_vec();
            v.extend([("conic", "true"), ("conic_range", "1000")]);
            Ok(v)
        }
        other => Err(ConfigError::UnknownPreset(other.to_string())),
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: None,
            p: None,
            q: None,
            m: None,
            rho: None,
            nu: 0.01,
            domain: DomainChoice::Auto,
            bound: None,
            delta: None,
            kmax: 10,
            grid_resolution: 16,
            measure_resolution: 0,
            conic: false,
            conic_range: 1000,
            band: 32,
            n: None,
            dt: 5e-3,
            t_end: None,
            horizon: 0.15,
            samples: 2000,
            seeds: Vec::new(),
            seed_factor: 1e-8,
            seed: 0x5eed,
            normalization: Normalization::NormalForm,
            scaling_nus: vec![0.005, 0.01, 0.02],
            report_dynamics: true,
            jobs: None,
            out: None,
        }
    }
}

fn bad(key: &str, value: &str, why: impl ToString) -> ConfigError {
    ConfigError::BadValue { key: key.into(), value: value.into(), why: why.to_string() }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: ToString,
{
    value.trim().parse().map_err(|e: T::Err| bad(key, value, e))
}

fn auto<T: FromStr>(key: &str, value: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: ToString,
{
    match value.trim() {
        "auto" | "none" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: ToString,
{
    let v = value.trim();
    if v.is_empty() || v == "none" {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse(key, x)).collect()
}

fn show_list<T: ToString>(v: &[T]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
    }
}

fn show_opt<T: ToString>(v: &Option<T>, none: &str) -> String {
    v.as_ref().map_or(none.to_string(), T::to_string)
}

impl RunConfig {
    /// Set one key from its textual value. `preset` applies the whole preset.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "preset" if v == "none" => self.preset = None,
            "preset" => {
                for (k, val) in preset_pairs(v)? {
                    self.set(k, val)?;
                }
                self.preset = Some(v.to_string());
            }
            "p" => self.p = auto(key, v)?,
            "q" => self.q = auto(key, v)?,
            "m" => self.m = auto(key, v)?,
            "rho" => self.rho = if v == "auto" { None } else { Some(list(key, v)?) },
            "nu" => self.nu = parse(key, v)?,
            "domain" => {
                self.domain = match v.split(':').collect::<Vec<_>>()[..] {
                    ["auto"] => DomainChoice::Auto,
                    ["cube", lo, hi] => DomainChoice::Cube(parse(key, lo)?, parse(key, hi)?),
                    ["around", eps] => DomainChoice::Around(parse(key, eps)?),
                    _ => return Err(bad(key, v, "expected auto, cube:LO:HI or around:EPS")),
                }
            }
            "bound" => self.bound = auto(key, v)?,
            "delta" => self.delta = auto(key, v)?,
            "kmax" => self.kmax = parse(key, v)?,
            "grid_resolution" => self.grid_resolution = parse(key, v)?,
            "measure_resolution" => self.measure_resolution = parse(key, v)?,
            "conic" => self.conic = parse(key, v)?,
            "conic_range" => self.conic_range = parse(key, v)?,
            "band" => self.band = parse(key, v)?,
            "n" => self.n = auto(key, v)?,
            "dt" => self.dt = parse(key, v)?,
            "t_end" => self.t_end = auto(key, v)?,
            "horizon" => self.horizon = parse(key, v)?,
            "samples" => self.samples = parse(key, v)?,
            "seeds" => self.seeds = list(key, v)?,
            "seed_factor" => self.seed_factor = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "normalization" => {
                self.normalization = Normalization::parse(v).ok_or_else(|| bad(key, v, "expected pde or normal-form"))?
            }
            "scaling_nus" => self.scaling_nus = list(key, v)?,
            "report_dynamics" => self.report_dynamics = parse(key, v)?,
            "jobs" => self.jobs = auto(key, v)?,
            "out" => self.out = if v == "none" { None } else { Some(PathBuf::from(v)) },
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Apply a `key = value` text; `#` starts a comment. A `preset` line applies first.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        pairs.sort_by_key(|(k, _)| k != "preset");
        for (k, v) in pairs {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let domain = match self.domain {
            DomainChoice::Auto => "auto".to_string(),
            DomainChoice::Cube(lo, hi) => format!("cube:{lo}:{hi}"),
            DomainChoice::Around(eps) => format!("around:{eps}"),
        };
        let rows: Vec<(&str, String)> = vec![
            ("preset", show_opt(&self.preset, "none")),
            ("p", show_opt(&self.p, "none")),
            ("q", show_opt(&self.q, "none")),
            ("m", show_opt(&self.m, "none")),
            ("rho", self.rho.as_ref().map_or("auto".into(), |r| show_list(r))),
            ("nu", self.nu.to_string()),
            ("domain", domain),
            ("bound", show_opt(&self.bound, "auto")),
            ("delta", show_opt(&self.delta, "auto")),
            ("kmax", self.kmax.to_string()),
            ("grid_resolution", self.grid_resolution.to_string()),
            ("measure_resolution", self.measure_resolution.to_string()),
            ("conic", self.conic.to_string()),
            ("conic_range", self.conic_range.to_string()),
            ("band", self.band.to_string()),
            ("n", show_opt(&self.n, "auto")),
            ("dt", self.dt.to_string()),
            ("t_end", show_opt(&self.t_end, "auto")),
            ("horizon", self.horizon.to_string()),
            ("samples", self.samples.to_string()),
            ("seeds", show_list(&self.seeds)),
            ("seed_factor", self.seed_factor.to_string()),
            ("seed", self.seed.to_string()),
            ("normalization", match self.normalization {
                Normalization::Pde => "pde".into(),
                Normalization::NormalForm => "normal-form".into(),
            }),
            ("scaling_nus", show_list(&self.scaling_nus)),
            ("report_dynamics", self.report_dynamics.to_string()),
            ("jobs", show_opt(&self.jobs, "auto")),
            ("out", self.out.as_ref().map_or("none".into(), |p| p.display().to_string())),
        ];
        debug_assert_eq!(rows.len(), KEYS.len());
        let mut s = String::new();
        for (k, v) in rows {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn internal(&self) -> Result<Vec<ModeIndex>, ConfigError> {
        match (self.p, self.q) {
            (Some(p), Some(q)) => Ok([Some(p), Some(q), self.m].into_iter().flatten().collect()),
            _ => Err(ConfigError::Invalid("internal modes missing: give -p and -q (and -m for a 3-torus) or a preset".into())),
        }
    }

    pub fn torus(&self) -> Result<TorusSpec, ConfigError> {
        self.torus_at(self.nu)
    }

    pub fn torus_at(&self, nu: f64) -> Result<TorusSpec, ConfigError> {
        let internal = self.internal()?;
        let rho = self.rho.clone().unwrap_or_else(|| vec![1.5; internal.len()]);
        let n = rho.len();
        let domain = match self.domain {
            DomainChoice::Cube(lo, hi) => RhoBox::cube(n, lo, hi),
            DomainChoice::Around(eps) => RhoBox::around(&rho, eps),
            DomainChoice::Auto => {
                let cube = RhoBox::cube(n, 1.0, 2.0);
                if cube.contains(&rho) {
                    cube
                } else {
                    RhoBox::around(&rho, 1e-2)
                }
            }
        };
        TorusSpec::with_domain(internal, rho, nu, domain).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn resonance_bound(&self) -> Result<i64, ConfigError> {
        Ok(self.bound.unwrap_or_else(|| default_bound(&self.internal().unwrap_or_default())))
    }

    /// `ν²` for 3-tori and `4ν²` for 2-tori unless set.
    pub fn delta_for(&self, spec: &TorusSpec) -> f64 {
        let factor = if spec.dim() == 2 { 4.0 } else { 1.0 };
        self.delta.unwrap_or(factor * spec.nu * spec.nu)
    }

    pub fn grid(&self) -> Result<GridSpec, ConfigError> {
        let g = match self.n {
            Some(n) => GridSpec::new(self.band, n, self.dt),
            None => GridSpec::with_band(self.band, self.dt),
        };
        g.map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn policy(&self) -> Result<ScalingPolicy, ConfigError> {
        Ok(ScalingPolicy {
            grid: self.grid()?,
            normalization: self.normalization,
            seeds: self.seeds.clone(),
            seed_factor: self.seed_factor,
            phase: SeedPhase::Random(self.seed),
            horizon: self.t_end.map_or(self.horizon, |t| t * self.nu * self.nu),
            samples: self.samples,
        })
    }

    /// Checks that do not need the analysis itself.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.torus()?;
        if self.kmax <= 0 {
            return Err(ConfigError::Invalid("kmax must be positive".into()));
        }
        if self.grid_resolution == 0 {
            return Err(ConfigError::Invalid("grid_resolution must be positive".into()));
        }
        if self.delta.is_some_and(|d| !(d > 0.0)) {
            return Err(ConfigError::Invalid("delta must be positive".into()));
        }
        if !(self.horizon > 0.0) || self.samples == 0 || self.t_end.is_some_and(|t| !(t > 0.0)) {
            return Err(ConfigError::Invalid("horizon, t_end and samples must be positive".into()));
        }
        self.grid()?;
        Ok(())
    }
}
