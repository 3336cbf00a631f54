//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use copylink_core::experiments::{generate_instance, JfChoice};
use copylink_core::ground::Solver;
use copylink_core::precision::ErrorModel;
use copylink_core::qwalk::{WalkParams, DEFAULT_QUBIT_CAP};
use copylink_core::{jf_min, Family};
use serde_json::json;

use crate::config::{parse_topology, schema, ExperimentConfig, SolverSpec};
use crate::error::{CliError, CliResult};
use crate::fit::{fit_csv, fit_json, fit_report, Curve};
use crate::io::{instances_json, read_instances, write_text};
use crate::manifest::{hash_str, RunManifest};
use crate::report::{read_report, write_report, ReportMeta};
use crate::run::{check_gate, run_config};
use crate::walk::{gamma_sweep, log_grid, lookalike_model, select_lookalikes, walk_case, walk_csv};

#[derive(Debug, Parser)]
#[command(name = "copylink", version, about = "Linked-copy error suppression experiments for Ising Hamiltonians")]
pub struct Cli {
    /// Master seed; overrides the seed in a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Allow runs with more than 18 qubits per trial.
    #[arg(long, global = true)]
    pub long_run: bool,
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Exact ground states of every instance in a file.
    Ground(GroundArgs),
    /// Fraction correct against precision.
    Fraction(ConfigArgs),
    /// Fraction correct against link strength.
    JfSweep(ConfigArgs),
    /// Cross-tabulation of single-copy and linked verdicts.
    Decomposition(ConfigArgs),
    /// Exponential fit of a sweep CSV and the precision improvement.
    Fit(FitArgs),
    /// Quantum-walk success probability against hopping rate.
    Qwalk(QwalkArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Output file (default: <out-dir>/instances.json).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroundArgs {
    #[arg(long)]
    pub instances: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub solver: SolverArg,
    #[arg(long, default_value_t = copylink_core::DEFAULT_DEG_TOL)]
    pub deg_tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverArg {
    Auto,
    BruteForce,
    BranchAndBound,
}

impl From<SolverArg> for SolverSpec {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Auto => SolverSpec::Auto,
            SolverArg::BruteForce => SolverSpec::BruteForce,
            SolverArg::BranchAndBound => SolverSpec::BranchAndBound,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Experiment config (JSON).
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV written by `fraction`, `jf-sweep` or `decomposition`.
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, value_enum, default_value = "single-or-any")]
    pub curve: Curve,
    /// Linked rows to use when a precision has several J_F values
    /// (default: J_F = -2^(1-p)).
    #[arg(long, allow_hyphen_values = true)]
    pub jf: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Midpoint,
    DetRandom,
}

#[derive(Debug, Args)]
pub struct QwalkArgs {
    /// Instance file; without it a generated lookalike instance is used.
    #[arg(long)]
    pub instances: Option<PathBuf>,
    /// Index into the instance file or the lookalike list.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Size of generated lookalike instances.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    #[arg(long, value_enum, default_value = "det-random")]
    pub model: ModelArg,
    /// Seed of the error model (default: derived from --seed).
    #[arg(long)]
    pub model_seed: Option<u64>,
    #[arg(long, default_value = "triangle")]
    pub topology: String,
    /// `min` or a number.
    #[arg(long, default_value = "min", allow_hyphen_values = true)]
    pub jf: String,
    /// Comma separated hopping rates; overrides the log grid.
    #[arg(long, value_delimiter = ',')]
    pub gammas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.01)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 16)]
    pub gamma_points: usize,
    #[arg(long, default_value_t = 30.0)]
    pub t: f64,
    #[arg(long, default_value_t = 70.0)]
    pub dt: f64,
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: copylink_core::Error| e.to_string())
}

/// Run the parsed command; returns the files written.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let master = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Gen(a) => {
            if a.family == Family::Custom {
                return Err(CliError::Schema("custom instances cannot be generated".into()));
            }
            let instances = (0..a.count)
                .map(|i| generate_instance(a.family, a.n, master, i))
                .collect::<copylink_core::Result<Vec<_>>>()
                .map_err(schema)?;
            let path = a.out.clone().unwrap_or_else(|| cli.out_dir.join("instances.json"));
            let text = instances_json(&instances);
            let mut m = RunManifest::start("gen", hash_str(&format!("{:?}", a)), master);
            write_text(&path, &text)?;
            m.add_output(&path)?;
            finish(m, cli, vec![path])
        }
        Command::Ground(a) => {
            let instances = read_instances(&a.instances)?;
            let solver: Solver = SolverSpec::from(a.solver).into();
            let mut out = Vec::new();
            for inst in &instances {
                check_gate(inst.n(), cli.long_run)?;
                let gs = solver.solve(inst, a.deg_tol).map_err(|e| e.for_instance(inst.id()))?;
                let states: Vec<String> = gs.states().iter().map(|s| s.to_string()).collect();
                out.push(json!({ "id": inst.id(), "n": inst.n(), "energy": gs.energy(), "states": states }));
            }
            let path = cli.out_dir.join("ground.json");
            let mut text = serde_json::to_string_pretty(&out).expect("json");
            text.push('\n');
            let mut m = RunManifest::start("ground", hash_str(&instances_json(&instances)), master);
            write_text(&path, &text)?;
            m.add_output(&path)?;
            finish(m, cli, vec![path])
        }
        Command::Fraction(a) => sweep_command(cli, "fraction", &a.config),
        Command::JfSweep(a) => sweep_command(cli, "jf_sweep", &a.config),
        Command::Decomposition(a) => sweep_command(cli, "decomposition", &a.config),
        Command::Fit(a) => {
            let rows = read_report(&a.report)?;
            let out = fit_report(&rows, a.curve, a.jf)?;
            let json_path = cli.out_dir.join("fit.json");
            let csv_path = cli.out_dir.join("fit.csv");
            let input = std::fs::read_to_string(&a.report).map_err(|e| CliError::io(&a.report, e))?;
            let mut m = RunManifest::start("fit", hash_str(&format!("{input}{:?}{:?}", a.curve, a.jf)), master);
            write_text(&json_path, &fit_json(&out))?;
            write_text(&csv_path, &fit_csv(&out))?;
            m.add_output(&json_path)?;
            m.add_output(&csv_path)?;
            finish(m, cli, vec![json_path, csv_path])
        }
        Command::Qwalk(a) => qwalk_command(cli, a, master),
    }
}

fn finish(m: RunManifest, cli: &Cli, mut outputs: Vec<PathBuf>) -> CliResult<Vec<PathBuf>> {
    outputs.push(m.finish(&cli.out_dir)?);
    Ok(outputs)
}

fn sweep_command(cli: &Cli, name: &str, config: &Path) -> CliResult<Vec<PathBuf>> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
        cfg.validate()?;
    }
    let topology = cfg.topology()?;
    match name {
        "jf_sweep" => {
            let grid = matches!(cfg.sweep_spec()?.linking.map(|l| l.jf), Some(JfChoice::Grid(_) | JfChoice::NonPositiveMidpoints));
            if !grid {
                return Err(CliError::Schema("jf-sweep needs a topology and a J_F grid".into()));
            }
        }
        "decomposition" if topology.is_none() => {
            return Err(CliError::Schema("decomposition needs a topology".into()));
        }
        _ => {}
    }
    let mut m = RunManifest::start(name, cfg.hash(), cfg.seed);
    let report = run_config(&cfg, cli.threads, cli.long_run)?;
    let label = topology.as_ref().map(|t| t.label());
    let meta = ReportMeta { instance_count: cfg.instances, family: cfg.family(), n: cfg.n, topology: label.as_deref() };
    let path = cli.out_dir.join(format!("{name}.csv"));
    write_report(&path, &report, &meta)?;
    m.add_output(&path)?;
    let mut outputs = vec![path];
    if name == "jf_sweep" {
        let mut text = String::from("p,j_f,frac_any_copy,frac_any_copy_at_zero\n");
        for &p in &cfg.precisions {
            if let Some(best) = report.argmax_jf(p) {
                let zero = report.cell(p, Some(0.0)).map(|c| c.counts.fraction(c.counts.any_copy));
                let c = &best.counts;
                text.push_str(&format!(
                    "{p},{},{},{}\n",
                    best.cell.jf.unwrap(),
                    c.fraction(c.any_copy),
                    zero.map(|z| z.to_string()).unwrap_or_default()
                ));
            }
        }
        let argmax = cli.out_dir.join("jf_argmax.csv");
        write_text(&argmax, &text)?;
        m.add_output(&argmax)?;
        outputs.push(argmax);
    }
    finish(m, cli, outputs)
}

fn qwalk_command(cli: &Cli, a: &QwalkArgs, master: u64) -> CliResult<Vec<PathBuf>> {
    let topology = parse_topology(&a.topology)?;
    let jf = match a.jf.as_str() {
        "min" => jf_min(a.p).map_err(schema)?,
        s => s.parse::<f64>().map_err(|_| CliError::Schema(format!("bad jf {s:?}")))?,
    };
    let model = match (a.model, a.model_seed) {
        (ModelArg::Midpoint, _) => ErrorModel::midpoint(),
        (ModelArg::DetRandom, Some(s)) => ErrorModel::deterministic_random(s),
        (ModelArg::DetRandom, None) => lookalike_model(master),
    };
    let exact = match &a.instances {
        Some(path) => {
            let all = read_instances(path)?;
            all.get(a.index)
                .cloned()
                .ok_or_else(|| CliError::Schema(format!("{}: no instance at index {}", path.display(), a.index)))?
        }
        None => {
            select_lookalikes(a.index + 1, a.n, master, a.p, &model, &topology, jf)?.pop().expect("selected")
        }
    };
    let qubits = exact.n() * topology.copies();
    if qubits > DEFAULT_QUBIT_CAP {
        return Err(CliError::Gated(format!("{qubits} qubits exceeds the {DEFAULT_QUBIT_CAP}-qubit walk cap")));
    }
    let gammas = match &a.gammas {
        Some(g) if g.iter().all(|&x| x > 0.0 && x.is_finite()) && !g.is_empty() => g.clone(),
        Some(_) => return Err(CliError::Schema("gammas must be positive and finite".into())),
        None => log_grid(a.gamma_min, a.gamma_max, a.gamma_points)?,
    };
    let template = WalkParams { gamma: gammas[0], t: a.t, dt: a.dt, samples: a.samples, tol: a.tol };
    if !(a.t >= 0.0 && a.dt > 0.0 && a.samples >= 2 && a.tol > 0.0) {
        return Err(CliError::Schema("need t >= 0, dt > 0, samples >= 2 and tol > 0".into()));
    }
    let key = format!("{}|{:?}|{}|{}|{jf}|{gammas:?}|{template:?}", exact.id(), model, a.p, topology.label());
    let mut m = RunManifest::start("qwalk", hash_str(&key), master);
    let case = walk_case(&exact, a.p, &model, &topology, jf, copylink_core::DEFAULT_DEG_TOL)?;
    let rows = gamma_sweep(&case, &gammas, &template, cli.threads)?;
    let path = cli.out_dir.join("qwalk.csv");
    write_text(&path, &walk_csv(&rows, topology.copies()))?;
    m.add_output(&path)?;
    let inst_path = cli.out_dir.join("qwalk_instance.json");
    write_text(&inst_path, &instances_json(std::slice::from_ref(&exact)))?;
    m.add_output(&inst_path)?;
    finish(m, cli, vec![path, inst_path])
}
