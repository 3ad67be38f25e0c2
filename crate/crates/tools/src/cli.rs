//! The `quintic` command line: subcommands, exit codes and output files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use quintic_core::normal_form::{classify_torus, Classification, EffectiveHamiltonian, Verdict};
use quintic_core::quoted::{block_discrepancies, catalog_discrepancies};
use quintic_core::resonance::{enumerate_sets, ResonanceCatalog};
use quintic_core::small_divisors::{check_a0, check_a1, check_a2, conic_search, measure_scan, ConicSystem};
use quintic_core::{Error as CoreError, TorusSpec};
use serde_json::{json, Value};

use crate::config::{ConfigError, RunConfig};
use crate::json;
use crate::nls_sim::{scaling_experiment, FitOptions, FitOutcome, GrowthFit, ScalingPolicy, SimError};

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const BOUND_TOO_SMALL: i32 = 2;
    pub const UNSTABLE: i32 = 3;
    pub const REFUSED: i32 = 4;
    pub const VIOLATED: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "quintic", version, about = "Resonances, normal forms, small divisors and dynamics of quintic NLS tori")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Named parameter set: thm2-stable, thm3-unstable, paper-appendixA-setA.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
    #[arg(short = 'p', global = true, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(short = 'q', global = true, allow_hyphen_values = true)]
    q: Option<String>,
    /// Third internal mode; `none` for a 2-torus.
    #[arg(short = 'm', global = true, allow_hyphen_values = true)]
    m: Option<String>,
    /// Actions, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    rho: Option<String>,
    #[arg(long, global = true)]
    nu: Option<String>,
    #[arg(long, global = true)]
    delta: Option<String>,
    #[arg(long, global = true)]
    kmax: Option<String>,
    /// Simulation band half-width K.
    #[arg(long, global = true)]
    band: Option<String>,
    #[arg(long, global = true)]
    dt: Option<String>,
    #[arg(long = "t-end", global = true)]
    t_end: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Seeded external modes, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    seeds: Option<String>,
    #[arg(long, global = true)]
    normalization: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    jobs: Option<String>,
    /// Any configuration key, as KEY=VALUE.
    #[arg(long = "set", global = true)]
    set: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Resonance catalog of the torus.
    Resonances,
    /// Effective quadratic Hamiltonian with its blocks.
    NormalForm,
    /// Elliptic/hyperbolic verdict (exit 3 when unstable).
    Classify,
    /// Small-divisor hypotheses (exit 5 on a violation).
    Hypotheses,
    /// Seeded simulation with growth fit.
    Simulate,
    /// Growth rate against ν.
    Scaling,
    /// Everything above in one document.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Resonances => "resonances",
            Command::NormalForm => "normal-form",
            Command::Classify => "classify",
            Command::Hypotheses => "hypotheses",
            Command::Simulate => "simulate",
            Command::Scaling => "scaling",
            Command::Report => "report",
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure { code: exit::FAILURE, message: e.to_string() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::BoundTooSmall { .. } => exit::BOUND_TOO_SMALL,
            CoreError::PreconditionViolated(_) | CoreError::DegenerateBlock { .. } | CoreError::NonStationaryCoupling => {
                exit::REFUSED
            }
            _ => exit::FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Core(c) => c.into(),
            other => Failure { code: exit::FAILURE, message: other.to_string() },
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: exit::FAILURE, message: e.to_string() }
    }
}

struct Outcome {
    stdout: Value,
    files: Vec<(&'static str, String)>,
    code: i32,
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &cli.preset {
        cfg.set("preset", p)?;
    }
    if let Some(path) = &cli.config {
        cfg.apply_text(&std::fs::read_to_string(path)?)?;
    }
    // internal modes given on the command line replace the preset's set
    if cli.p.is_some() || cli.q.is_some() {
        cfg.set("m", "none")?;
    }
    let flags = [
        ("p", &cli.p),
        ("q", &cli.q),
        ("m", &cli.m),
        ("rho", &cli.rho),
        ("nu", &cli.nu),
        ("delta", &cli.delta),
        ("kmax", &cli.kmax),
        ("band", &cli.band),
        ("dt", &cli.dt),
        ("t_end", &cli.t_end),
        ("seed", &cli.seed),
        ("seeds", &cli.seeds),
        ("normalization", &cli.normalization),
        ("out", &cli.out),
        ("jobs", &cli.jobs),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure { code: exit::FAILURE, message: format!("--set expects KEY=VALUE, got {kv:?}") })?;
        cfg.set(k.trim(), v)?;
    }
    Ok(cfg)
}

fn catalog_for(cfg: &RunConfig) -> Result<ResonanceCatalog, Failure> {
    Ok(enumerate_sets(&cfg.internal()?, cfg.resonance_bound()?)?)
}

fn analysed(cfg: &RunConfig) -> Result<(TorusSpec, ResonanceCatalog, EffectiveHamiltonian, Classification), Failure> {
    let spec = cfg.torus()?;
    let cat = catalog_for(cfg)?;
    let (eff, class) = classify_torus(&spec, &cat)?;
    Ok((spec, cat, eff, class))
}

/// Amplitude growth rate implied by the normal form for the simulated equation.
fn predicted_rate(class: &Classification, cfg: &RunConfig) -> f64 {
    class.max_im * cfg.normalization.coupling() / 3.0
}

fn all_discrepancies(cat: &ResonanceCatalog, eff: Option<&EffectiveHamiltonian>) -> Value {
    let mut notes = catalog_discrepancies(cat);
    if let Some(e) = eff {
        notes.extend(block_discrepancies(e));
    }
    json::discrepancies(&notes)
}

fn cmd_resonances(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let cat = catalog_for(cfg)?;
    let v = json!({ "catalog": json::catalog(&cat), "discrepancies": all_discrepancies(&cat, None) });
    Ok(Outcome { files: vec![("catalog.json", json::render(&v))], stdout: v, code: exit::OK })
}

fn cmd_normal_form(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let (_, cat, eff, _) = analysed(cfg)?;
    let v = json!({
        "effective_hamiltonian": json::effective_hamiltonian(&eff),
        "discrepancies": all_discrepancies(&cat, Some(&eff)),
    });
    Ok(Outcome { files: vec![("normal_form.json", json::render(&v))], stdout: v, code: exit::OK })
}

fn classification_value(class: &Classification, cfg: &RunConfig) -> Value {
    let mut v = json::classification(class);
    v["predicted_rate"] = json!(predicted_rate(class, cfg));
    v["normalization"] = json::to_value(&cfg.normalization);
    v
}

fn cmd_classify(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let (spec, _, _, class) = analysed(cfg)?;
    let mut v = classification_value(&class, cfg);
    v["spec"] = json::spec(&spec);
    let code = if class.verdict == Verdict::Unstable { exit::UNSTABLE } else { exit::OK };
    Ok(Outcome { files: vec![("classification.json", json::render(&v))], stdout: v, code })
}

fn hypotheses_value(cfg: &RunConfig, spec: &TorusSpec, eff: &EffectiveHamiltonian) -> Result<(Value, String, bool), Failure> {
    let delta = cfg.delta_for(spec);
    let a0 = check_a0(eff);
    let a1 = check_a1(eff, delta);
    let a2 = check_a2(eff, delta, cfg.kmax, &spec.domain.grid(cfg.grid_resolution));
    let mut v = json!({
        "A0": json::a0(&a0),
        "A1": json::a1(&a1),
        "A2": json::hypothesis_summary(&a2),
        "grid_resolution": cfg.grid_resolution,
    });
    if cfg.measure_resolution > 0 {
        v["excluded_fraction"] = json!(measure_scan(eff, delta, cfg.kmax, cfg.measure_resolution));
        v["measure_resolution"] = json!(cfg.measure_resolution);
    }
    if cfg.conic {
        let sols = conic_search(&ConicSystem::set_a_literal(), cfg.conic_range)?;
        v["conic"] = json!({
            "system": "set-A literal offsets (2, 4)",
            "range": cfg.conic_range,
            "solutions": json::conic_solutions(&sols),
            "minimal": sols.first().map(|s| json!({ "k": s.k, "j": s.j })),
        });
    }
    Ok((v, json::verdict_lines(&a2), a0.pass && a1.pass && a2.pass()))
}

fn cmd_hypotheses(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let (spec, _, eff, _) = analysed(cfg)?;
    let (v, lines, pass) = hypotheses_value(cfg, &spec, &eff)?;
    let code = if pass { exit::OK } else { exit::VIOLATED };
    Ok(Outcome { files: vec![("hypotheses.json", json::render(&v)), ("hypotheses.jsonl", lines)], stdout: v, code })
}

fn growth_value(fit: &GrowthFit, prediction: Option<f64>, policy: &ScalingPolicy, spec: &TorusSpec) -> Value {
    json!({
        "fit": json::to_value(fit),
        "window_found": fit.outcome == FitOutcome::Growth,
        "predicted_rate": prediction,
        "ratio": prediction.filter(|p| *p > 0.0 && fit.outcome == FitOutcome::Growth).map(|p| fit.rate / p),
        "options": json::to_value(&FitOptions::for_spec(spec)),
        "policy": json::to_value(policy),
    })
}

/// Configured policy; with no seeds configured, the hyperbolic modes are seeded.
fn policy_for(cfg: &RunConfig, class: Option<&Classification>) -> Result<ScalingPolicy, Failure> {
    let mut policy = cfg.policy()?;
    if policy.seeds.is_empty() {
        if let Some(c) = class {
            policy.seeds = c.hyperbolic_modes.clone();
        }
    }
    Ok(policy)
}

fn cmd_simulate(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let spec = cfg.torus()?;
    let class = catalog_for(cfg).ok().and_then(|cat| classify_torus(&spec, &cat).ok()).map(|(_, c)| c);
    let prediction = class.as_ref().map(|c| predicted_rate(c, cfg));
    let policy = policy_for(cfg, class.as_ref())?;
    let (traj, fit) = policy.run(&spec)?;
    let v = growth_value(&fit, prediction, &policy, &spec);
    Ok(Outcome {
        files: vec![("trajectory.csv", traj.to_csv()), ("growth.json", json::render(&v))],
        stdout: v,
        code: exit::OK,
    })
}

fn cmd_scaling(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let spec = cfg.torus()?;
    let class = catalog_for(cfg).ok().and_then(|cat| classify_torus(&spec, &cat).ok()).map(|(_, c)| c);
    let policy = policy_for(cfg, class.as_ref())?;
    let res = scaling_experiment(&spec, &cfg.scaling_nus, &policy, cfg.jobs)?;
    let predictions: Vec<Option<f64>> = cfg
        .scaling_nus
        .iter()
        .map(|&nu| {
            let s = cfg.torus_at(nu).ok()?;
            let cat = catalog_for(cfg).ok()?;
            classify_torus(&s, &cat).ok().map(|(_, c)| predicted_rate(&c, cfg))
        })
        .collect();
    let v = json!({
        "nus": res.nus,
        "rates": res.fits.iter().map(|f| f.rate).collect::<Vec<_>>(),
        "predicted_rates": predictions,
        "fits": json::to_value(&res.fits),
        "slope": res.slope,
        "slope_stderr": res.stderr,
    });
    Ok(Outcome { files: vec![("scaling.json", json::render(&v))], stdout: v, code: exit::OK })
}

fn config_value(cfg: &RunConfig) -> Value {
    let map: serde_json::Map<String, Value> = cfg
        .to_text()
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
        .collect();
    Value::Object(map)
}

fn cmd_report(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let spec = cfg.torus()?;
    let cat = catalog_for(cfg)?;
    let mut v = json!({ "config": config_value(cfg), "catalog": json::catalog(&cat) });
    match classify_torus(&spec, &cat) {
        Ok((eff, class)) => {
            v["effective_hamiltonian"] = json::effective_hamiltonian(&eff);
            v["classification"] = classification_value(&class, cfg);
            v["hypotheses"] = hypotheses_value(cfg, &spec, &eff)?.0;
            v["discrepancies"] = all_discrepancies(&cat, Some(&eff));
            if cfg.report_dynamics {
                let policy = policy_for(cfg, Some(&class))?;
                let (_, fit) = policy.run(&spec)?;
                v["growth"] = growth_value(&fit, Some(predicted_rate(&class, cfg)), &policy, &spec);
            }
        }
        Err(e) => {
            v["refused"] = json!(e.to_string());
            v["discrepancies"] = all_discrepancies(&cat, None);
        }
    }
    Ok(Outcome { files: vec![("report.json", json::render(&v))], stdout: v, code: exit::OK })
}

fn write_files(dir: &Path, command: Command, files: &[(&'static str, String)], code: i32) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in files {
        std::fs::write(dir.join(name), body)?;
    }
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let names: Vec<&str> = files.iter().map(|f| f.0).collect();
    let mut log = std::fs::OpenOptions::new().create(true).append(true).open(dir.join("run.log"))?;
    writeln!(log, "unix_time={stamp} command={} exit={code} files={}", command.name(), names.join(","))?;
    Ok(())
}

/// Run the command line; returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { exit::FAILURE } else { exit::OK };
        }
    };
    let result = resolve(&cli).and_then(|cfg| {
        if cli.print_config {
            return Ok((cfg.to_text(), exit::OK));
        }
        let Some(command) = cli.command else {
            return Err(Failure { code: exit::FAILURE, message: "no subcommand given (see --help)".into() });
        };
        cfg.validate()?;
        let outcome = match command {
            Command::Resonances => cmd_resonances(&cfg),
            Command::NormalForm => cmd_normal_form(&cfg),
            Command::Classify => cmd_classify(&cfg),
            Command::Hypotheses => cmd_hypotheses(&cfg),
            Command::Simulate => cmd_simulate(&cfg),
            Command::Scaling => cmd_scaling(&cfg),
            Command::Report => cmd_report(&cfg),
        }?;
        if let Some(dir) = &cfg.out {
            write_files(dir, command, &outcome.files, outcome.code)?;
        }
        Ok((json::render(&outcome.stdout), outcome.code))
    });
    match result {
        Ok((text, code)) => {
            let _ = stdout.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
