//! `tchlab`: experiment runner for the cavity-network simulations.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad flags or parameters,
//! 3 numeric failure, 4 dark and light hypotheses indistinguishable.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tchlab::dark::{
    adjacent_pairing, classify_dark, emission_density, mean_and_error, sample_emission_times, singlet_product,
    DetectorError,
};
use tchlab::gate::{
    area_rule_alpha, branch_phases, find_resonance, resonance_candidates, sweep, Convention, SweepSpec,
};
use tchlab::report::{ExperimentReport, Table};
use tchlab::walk::simulate_walk;
use tchlab::{AtomicState, DecayConfig, EmissionReport, GateConfig, TwoQubitState, WalkConfig};

#[derive(Parser, Debug)]
#[command(name = "tchlab", version, about = "Tavis-Cummings-Hubbard cavity network experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Directory receiving CSV tables and the JSON summary.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TCHLAB_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the coCSign gate over pulse amplitude, width and resonance pair.
    Gate(GateArgs),
    /// Single-photon walk imitating a free massive particle.
    Walk(WalkArgs),
    /// Photon emission statistics for dark and light atomic ensembles.
    Dark(DarkArgs),
    /// Best (n1, n2) pairs for the central free segment.
    Resonance(ResonanceArgs),
}

/// Inclusive `start:stop:step` range.
#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("expected start:stop:step, got {s:?}"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if !(a.is_finite() && b.is_finite() && step.is_finite()) || step <= 0.0 || b < a {
        return Err("grid needs finite start <= stop and step > 0".into());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    if n > 100_000 {
        return Err(format!("grid of {} points is too large", n + 1));
    }
    Ok(Grid((0..=n).map(|k| a + k as f64 * step).collect()))
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected n1:n2, got {s:?}"))?;
    let n = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// (−1)^{(x⊕1)y}: negates |01⟩.
    ZeroOne,
    /// (−1)^{x(y⊕1)}: negates |10⟩.
    OneZero,
}

#[derive(Args, Debug)]
struct GateArgs {
    #[arg(long, default_value_t = 1e-3)]
    g: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Pulse width.
    #[arg(long, conflicts_with = "sigma_grid")]
    sigma: Option<f64>,
    #[arg(long, value_parser = parse_grid)]
    sigma_grid: Option<Grid>,
    /// Pulse peak (default: area rule for each σ).
    #[arg(long, conflicts_with = "alpha_grid")]
    alpha: Option<f64>,
    /// Absolute α values; without --alpha or --alpha-grid the sweep covers
    /// 0 … 2α* in steps of α*/10.
    #[arg(long, value_parser = parse_grid)]
    alpha_grid: Option<Grid>,
    /// Resonance search bound.
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    /// Number of best resonance pairs to sweep.
    #[arg(long, default_value_t = 1)]
    pairs: usize,
    /// Explicit pair n1:n2, bypassing the search.
    #[arg(long, value_parser = parse_pair, conflicts_with_all = ["n_max", "pairs"])]
    pair: Option<(usize, usize)>,
    /// Input register: 00, 01, 10, 11, uniform or psi0.
    #[arg(long, default_value = "psi0")]
    input: String,
    #[arg(long, value_enum, default_value = "zero-one")]
    convention: ConventionArg,
    /// Integration step (default min(σ/50, τ₁/200)).
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(long, default_value_t = 128)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// End of the time grid (default 2πm/8).
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Starting cavity (default N/2).
    #[arg(long)]
    q0: Option<usize>,
    /// Kernel normalisation A.
    #[arg(long, default_value_t = 1.0)]
    kernel_a: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StateArg {
    Singlet,
    Ground,
    Triplet,
    Excited,
}

#[derive(Args, Debug)]
struct DarkArgs {
    #[arg(long, default_value_t = 2)]
    atoms: usize,
    /// Atomic state the sampled photons come from.
    #[arg(long, value_enum, default_value = "singlet")]
    state: StateArg,
    #[arg(long, default_value_t = 1e-3)]
    g: f64,
    /// Cavity decay rate (default g/10).
    #[arg(long)]
    kappa: Option<f64>,
    /// Censoring time (default 20/κ).
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 4001)]
    grid_points: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Detector misreading probability.
    #[arg(long, default_value_t = DetectorError::<f64>::DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args, Debug)]
struct ResonanceArgs {
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[arg(long, default_value_t = 5)]
    top: usize,
    #[arg(long, default_value_t = 1e-3)]
    g: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Indistinguishable,
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Indistinguishable => 4,
        }
    }
}

impl From<tchlab::Error> for Failure {
    fn from(e: tchlab::Error) -> Self {
        use tchlab::Error as E;
        match e {
            E::NotHermitian(_) | E::NormDrift { .. } | E::NormIncrease(_) | E::GridResolution(_) => {
                Failure::Numeric(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn write(report: &ExperimentReport, dir: &Path, summary: &str) -> Outcome {
    report.write_to_dir(dir, summary).with_context(|| format!("writing results to {}", dir.display()))?;
    Ok(())
}

fn require(ok: bool, msg: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Usage(msg.to_string()))
    }
}

fn run_gate(args: &GateArgs, common: &Common) -> Outcome {
    require(args.g > 0.0 && args.omega > 0.0, "g and omega must be positive")?;
    let sigmas = match (&args.sigma_grid, args.sigma) {
        (Some(grid), _) => grid.0.clone(),
        (None, s) => vec![s.unwrap_or(0.5)],
    };
    require(sigmas.iter().all(|s| *s > 0.0), "sigma must be positive")?;
    let pairs: Vec<(usize, usize)> = match args.pair {
        Some(p) => vec![p],
        None => {
            require(args.n_max >= 1, "--n-max must be at least 1")?;
            resonance_candidates(args.g, args.n_max).iter().take(args.pairs).map(|r| (r.n1, r.n2)).collect()
        }
    };
    require(!pairs.is_empty(), "no resonance pairs selected")?;
    let input = TwoQubitState::from_label(&args.input)?;
    let convention = match args.convention {
        ConventionArg::ZeroOne => Convention::NegateZeroOne,
        ConventionArg::OneZero => Convention::NegateOneZero,
    };
    let mut base = GateConfig::new(args.g, sigmas[0], pairs[0].0, pairs[0].1).with_omega(args.omega);
    base.convention = convention;
    base.dt = args.dt;

    let mut warnings: Vec<String> = Vec::new();
    let mut rows: Vec<(f64, Vec<f64>)> = Vec::new();
    for &sigma in &sigmas {
        let alphas = match (&args.alpha_grid, args.alpha) {
            (Some(grid), _) => grid.0.clone(),
            (None, Some(a)) => vec![a],
            (None, None) => (0..=20).map(|k| area_rule_alpha(sigma) * k as f64 / 10.0).collect(),
        };
        for w in base.with_sigma(sigma).warnings() {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        rows.push((sigma, alphas));
    }

    let mut table = Table::new(tchlab::gate::SWEEP_COLUMNS);
    let mut best: Option<(f64, Value)> = None;
    let mut alpha_grids = Vec::new();
    for (sigma, alphas) in &rows {
        let spec = SweepSpec { alphas: alphas.clone(), sigmas: vec![*sigma], pairs: pairs.clone(), input };
        let part = sweep(&base, &spec)?;
        let t = part.table("gate_sweep").expect("sweep table");
        for row in &t.rows {
            table.push(row.clone()).map_err(Failure::from)?;
        }
        if let Some(b) = part.summary.get("best") {
            let d = b["d_mod"].as_f64().unwrap_or(f64::INFINITY);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, b.clone()));
            }
        }
        alpha_grids.push(json!({ "sigma": sigma, "alphas": alphas }));
    }

    let params = json!({
        "g": args.g,
        "omega": args.omega,
        "hbar": 1.0,
        "sigmas": sigmas,
        "alpha_grids": alpha_grids,
        "pairs": pairs,
        "n_max": args.pair.map_or(Some(args.n_max), |_| None),
        "input": args.input,
        "input_amplitudes": input.amplitudes.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "convention": convention,
        "dt": args.dt,
        "norm_tolerance": base.norm_tolerance,
    });
    let mut report = ExperimentReport::new("gate", params);
    report.rng_seed = Some(common.seed);
    report.set("points", table.rows.len());
    report.set("warnings", &warnings);
    if args.pair.is_none() {
        let r = find_resonance(args.g, args.n_max)?;
        report.set("resonance", json!({ "n1": r.n1, "n2": r.n2, "residual": r.residual }));
    }
    if let Some((_, b)) = best {
        let basis_index = match args.input.as_str() {
            "00" => Some(0),
            "01" => Some(1),
            "10" => Some(2),
            "11" => Some(3),
            _ => None,
        };
        if let Some(k) = basis_index {
            let cfg = base
                .with_sigma(b["sigma"].as_f64().expect("sigma"))
                .with_alpha(b["alpha"].as_f64().expect("alpha"))
                .with_pair(b["n1"].as_u64().expect("n1") as usize, b["n2"].as_u64().expect("n2") as usize);
            let phase = branch_phases(&cfg)?[k];
            report.set("branch_phase", json!({ "re": phase.re, "im": phase.im, "arg": phase.arg() }));
        }
        report.set("best", b);
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let report = report.with_table("gate_sweep", table);
    write(&report, &common.out_dir, "gate_summary.json")
}

fn run_walk(args: &WalkArgs, common: &Common) -> Outcome {
    let mut cfg = WalkConfig::new(args.n, args.mass);
    if let Some(t) = args.t_max {
        cfg.t_max = t;
    }
    if let Some(q0) = args.q0 {
        cfg.q0 = q0;
    }
    cfg.steps = args.steps;
    cfg.kernel_constant = args.kernel_a;
    let walk = simulate_walk(&cfg)?;
    let mut report = walk.to_experiment_report()?;
    report.set("variance_end", walk.variances.last().copied());
    write(&report, &common.out_dir, "walk_summary.json")
}

fn atomic_state(kind: StateArg, atoms: usize) -> Outcome<AtomicState> {
    match kind {
        StateArg::Singlet => Ok(singlet_product(&adjacent_pairing(atoms), atoms)?),
        StateArg::Ground => Ok(AtomicState::ground(atoms)),
        StateArg::Excited => Ok(AtomicState::basis(atoms, (1 << atoms) - 1)),
        StateArg::Triplet if atoms == 2 => Ok(AtomicState::triplet()),
        StateArg::Triplet => Err(Failure::Usage("triplet state needs --atoms 2".into())),
    }
}

fn run_dark(args: &DarkArgs, common: &Common) -> Outcome {
    require(args.atoms <= 10, "--atoms above 10 is not supported")?;
    let mut cfg = DecayConfig::new(args.g, args.atoms).with_grid_points(args.grid_points).with_trials(args.trials, common.seed);
    if let Some(k) = args.kappa {
        cfg = cfg.with_kappa(k);
    }
    if let Some(t) = args.t_max {
        cfg = cfg.with_t_max(t);
    }
    cfg.validate()?;
    let detector = DetectorError::new(args.epsilon, common.seed.wrapping_add(1))?;
    let dark_state = atomic_state(StateArg::Singlet, args.atoms)?;
    let light_state = AtomicState::ground(args.atoms);
    let state = atomic_state(args.state, args.atoms)?;

    let dark = emission_density(&dark_state, &cfg)?;
    let light = emission_density(&light_state, &cfg)?;
    let sampled = emission_density(&state, &cfg)?;
    let samples = sample_emission_times(&sampled, args.trials, common.seed);

    let mut table = Table::new(["t", "p_dark", "p_light", "p_state", "s_dark", "s_light", "s_state"]);
    for k in 0..dark.times.len() {
        table
            .push(vec![
                dark.times[k],
                dark.density[k],
                light.density[k],
                sampled.density[k],
                dark.survival[k],
                light.survival[k],
                sampled.survival[k],
            ])
            .map_err(Failure::from)?;
    }
    let describe = |r: &EmissionReport| json!({ "mean": r.mean, "escape_probability": r.escape_probability });
    let params = json!({
        "atoms": args.atoms,
        "state": format!("{:?}", args.state).to_lowercase(),
        "g": cfg.g,
        "kappa": cfg.kappa,
        "omega": cfg.omega,
        "t_max": cfg.t_max(),
        "grid_points": cfg.grid_points,
        "n_trials": args.trials,
        "epsilon": args.epsilon,
        "hbar": 1.0,
        "seed": common.seed,
        "detector_seed": detector.seed,
    });
    let mut report = ExperimentReport::new("dark", params);
    report.rng_seed = Some(common.seed);
    report.set("n_trials", args.trials);
    report.set("seed", common.seed);
    report.set("dark", describe(&dark));
    report.set("light", describe(&light));
    report.set("sampled", describe(&sampled));
    report.set("censored", samples.censored_count());

    require(!samples.is_empty(), "--trials must be at least 1")?;
    let (_, std_error) = mean_and_error(&samples.times);
    let gap = light.mean - dark.mean;
    let separable = gap > 0.0 && gap >= 3.0 * std_error;
    let verdict = if separable {
        let c = classify_dark(&samples.times, dark.mean, light.mean, Some(detector))?;
        report.set("decision", c.decision);
        report.set("z_score", c.z_score);
        report.set("sample_mean", c.mean);
        report.set("std_error", c.std_error);
        report.set("threshold", c.threshold);
        report.set("flipped", c.flipped);
        Ok(())
    } else {
        report.set("decision", Value::Null);
        report.set("std_error", std_error);
        eprintln!("dark and light means differ by {gap:e}, below three standard errors ({:e})", 3.0 * std_error);
        Err(Failure::Indistinguishable)
    };
    report.set("distinguishable", separable);
    let report = report.with_table("emission_density", table);
    write(&report, &common.out_dir, "classify.json")?;
    verdict
}

fn run_resonance(args: &ResonanceArgs, common: &Common) -> Outcome {
    require(args.g > 0.0, "g must be positive")?;
    require(args.n_max >= 1, "--n-max must be at least 1")?;
    let top: Vec<_> = resonance_candidates(args.g, args.n_max).into_iter().take(args.top).collect();
    println!("n1 n2 residual");
    for r in &top {
        println!("{} {} {}", r.n1, r.n2, r.residual);
    }
    let mut report = ExperimentReport::new("resonance", json!({ "g": args.g, "n_max": args.n_max, "top": args.top }));
    report.set("pairs", &top);
    write(&report, &common.out_dir, "resonance_summary.json")
}

fn run(cli: &Cli) -> Outcome {
    let common = &cli.common;
    match &cli.command {
        Command::Gate(a) => run_gate(a, common),
        Command::Walk(a) => run_walk(a, common),
        Command::Dark(a) => run_dark(a, common),
        Command::Resonance(a) => run_resonance(a, common),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.common.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Numeric(m) => eprintln!("numeric failure: {m}"),
                Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Indistinguishable => {}
            }
            ExitCode::from(f.code())
        }
    }
}
