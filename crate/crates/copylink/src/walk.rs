//! Hopping-rate sweeps of the quantum walk on one instance.

use copylink_core::experiments::generate_instance;
use copylink_core::ground::{single_correct, verdict, Solver};
use copylink_core::precision::{apply_error, ErrorModel};
use copylink_core::qwalk::{GammaRow, WalkCase, WalkParams};
use copylink_core::{build_linked, seed, CopyTopology, Family, IsingInstance};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::run::with_pool;

/// Exact, imprecise and linked-imprecise versions of `exact`.
pub fn walk_case(
    exact: &IsingInstance,
    p: u32,
    model: &ErrorModel,
    topology: &CopyTopology,
    jf: f64,
    deg_tol: f64,
) -> CliResult<WalkCase> {
    let reduced = apply_error(exact, p, model, 0)?;
    let linked = build_linked(&reduced, topology, jf)?.into_composite();
    let ground = Solver::BruteForce.solve(exact, deg_tol)?;
    Ok(WalkCase { exact: exact.clone(), reduced, linked, copies: topology.copies(), ground })
}

/// `points` log-spaced values from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(min > 0.0 && max >= min && max.is_finite()) || points == 0 {
        return Err(CliError::Schema("gamma grid needs 0 < min <= max and at least one point".into()));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let (a, b) = (min.ln(), max.ln());
    Ok((0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect())
}

/// One row per hopping rate, computed in parallel and returned in grid order.
pub fn gamma_sweep(case: &WalkCase, gammas: &[f64], template: &WalkParams, threads: Option<usize>) -> CliResult<Vec<GammaRow>> {
    let rows = with_pool(threads, || {
        gammas.par_iter().map(|&gamma| case.gamma_row(&WalkParams { gamma, ..*template })).collect::<Vec<_>>()
    })?;
    rows.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

pub fn walk_csv(rows: &[GammaRow], copies: usize) -> String {
    let mut s = format!(
        "gamma,p_exact_single,p_exact_r{copies},p_reduced_single,p_reduced_linked,max_norm_error,max_energy_drift\n"
    );
    for r in rows {
        let outcomes = [&r.exact_single, &r.reduced_single, &r.reduced_linked];
        let norm = outcomes.iter().map(|o| o.norm_error).fold(0.0, f64::max);
        let drift = outcomes.iter().map(|o| o.energy_drift).fold(0.0, f64::max);
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.gamma, r.exact_single.mean, r.exact_repeated, r.reduced_single.mean, r.reduced_linked.mean, norm, drift
        ));
    }
    s
}

/// Error model used for lookalike selection under a master seed.
pub fn lookalike_model(master_seed: u64) -> ErrorModel {
    ErrorModel::deterministic_random(seed::derive(master_seed, "error-model", 0))
}

/// The first `count` generated SK instances of size `n` whose single copy
/// is broken at precision `p` under `model` while the linked system at
/// `jf` keeps at least one correct copy.
pub fn select_lookalikes(
    count: usize,
    n: usize,
    master_seed: u64,
    p: u32,
    model: &ErrorModel,
    topology: &CopyTopology,
    jf: f64,
) -> CliResult<Vec<IsingInstance>> {
    const SCAN: u64 = 100_000;
    let tol = copylink_core::DEFAULT_DEG_TOL;
    let mut found = Vec::new();
    for i in 0..SCAN {
        if found.len() == count {
            break;
        }
        let exact = generate_instance(Family::Sk, n, master_seed, i)?;
        let ground = Solver::BruteForce.solve(&exact, tol)?;
        let reduced = apply_error(&exact, p, model, 0)?;
        let single = Solver::BruteForce.solve(&reduced, tol)?;
        if single_correct(&ground, &single)? {
            continue;
        }
        let linked = Solver::Auto.solve(build_linked(&reduced, topology, jf)?.composite(), tol)?;
        if verdict(&ground, &single, &linked, topology.copies(), n)?.any_copy_correct {
            found.push(exact);
        }
    }
    if found.len() < count {
        return Err(CliError::Other(format!("only {} lookalike instances in {SCAN} seeds", found.len())));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = log_grid(0.01, 10.0, 4).unwrap();
        assert!((g[0] - 0.01).abs() < 1e-15 && (g[3] - 10.0).abs() < 1e-12);
        assert!((g[1] - 0.1).abs() < 1e-12);
        assert!(log_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn lookalikes_meet_the_selection_rule() {
        let model = lookalike_model(5);
        let topo = CopyTopology::triangle();
        let jf = copylink_core::jf_min(3).unwrap();
        let picks = select_lookalikes(2, 5, 5, 3, &model, &topo, jf).unwrap();
        for exact in &picks {
            let case = walk_case(exact, 3, &model, &topo, jf, 1e-9).unwrap();
            let single = Solver::BruteForce.solve(&case.reduced, 1e-9).unwrap();
            assert!(!single_correct(&case.ground, &single).unwrap());
        }
    }
}
