//! Parallel sweep runner.

use copylink_core::experiments::{evaluate_instance, generate_instance, FractionReport, SweepSpec};
use copylink_core::IsingInstance;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

/// Largest system (qubits per trial) allowed without `--long-run`.
pub const LONG_RUN_QUBITS: usize = 18;

pub fn check_gate(qubits: usize, long_run: bool) -> CliResult<()> {
    if qubits > LONG_RUN_QUBITS && !long_run {
        return Err(CliError::Gated(format!(
            "{qubits} qubits per trial exceeds {LONG_RUN_QUBITS}; rerun with --long-run"
        )));
    }
    Ok(())
}

/// Run `f` on a pool of the given width, or the global pool.
pub fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Other(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Instances named by the config: read from its file (truncated to
/// `instances`) or generated from the master seed.
pub fn load_instances(cfg: &ExperimentConfig) -> CliResult<Vec<IsingInstance>> {
    if let Some(path) = &cfg.instance_file {
        let mut all = crate::io::read_instances(path)?;
        if all.iter().any(|i| i.n() != cfg.n) {
            return Err(CliError::Schema(format!("{}: every instance must have n = {}", path.display(), cfg.n)));
        }
        all.truncate(cfg.instances as usize);
        return Ok(all);
    }
    (0..cfg.instances).map(|i| Ok(generate_instance(cfg.family(), cfg.n, cfg.seed, i)?)).collect()
}

/// Evaluate every instance in parallel and sum the counts in instance
/// order. The result does not depend on the pool width.
pub fn run_sweep(instances: &[IsingInstance], spec: &SweepSpec, threads: Option<usize>) -> CliResult<FractionReport> {
    let cells = spec.cells()?;
    let per_instance = with_pool(threads, || {
        instances.par_iter().map(|inst| evaluate_instance(inst, spec, &cells)).collect::<Vec<_>>()
    })?;
    let mut report = FractionReport::empty(spec)?;
    for counts in per_instance {
        report.absorb(&counts?)?;
    }
    Ok(report)
}

pub fn run_config(cfg: &ExperimentConfig, threads: Option<usize>, long_run: bool) -> CliResult<FractionReport> {
    check_gate(cfg.qubits()?, long_run)?;
    let instances = load_instances(cfg)?;
    log::info!("evaluating {} instances", instances.len());
    run_sweep(&instances, &cfg.sweep_spec()?, threads.or(cfg.threads))
}
