//! Exact ground-state search and the correctness predicates built on it.
//!
//! Two independent solvers are provided: exhaustive Gray-code enumeration
//! and depth-first branch-and-bound. Both collect every configuration
//! whose energy lies within `deg_tol` of the minimum; candidate energies
//! are recomputed from scratch before the final selection so incremental
//! rounding never decides membership.

mod bnb;
mod brute;

pub use bnb::{branch_and_bound_ground, branch_and_bound_with_stats, SearchStats};
pub use brute::{brute_force_ground, brute_force_ground_capped, DEFAULT_BRUTE_FORCE_CAP};

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::instances::IsingInstance;
use crate::replication::extract_copy;
use crate::spin::SpinConfiguration;

/// Minimum energy and every configuration within `deg_tol` of it.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    energy: f64,
    states: Vec<SpinConfiguration>,
    deg_tol: f64,
}

impl GroundStateResult {
    /// Assemble a result by hand. States are sorted and deduplicated.
    pub fn new(energy: f64, mut states: Vec<SpinConfiguration>, deg_tol: f64) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid!("ground-state set must not be empty"));
        }
        let n = states[0].len();
        if states.iter().any(|s| s.len() != n) {
            return Err(invalid!("ground states have mixed lengths"));
        }
        states.sort_unstable();
        states.dedup();
        Ok(Self { energy, states, deg_tol })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn states(&self) -> &[SpinConfiguration] {
        &self.states
    }

    pub fn deg_tol(&self) -> f64 {
        self.deg_tol
    }

    pub fn n(&self) -> usize {
        self.states[0].len()
    }

    pub fn contains(&self, config: &SpinConfiguration) -> bool {
        self.states.binary_search(config).is_ok()
    }
}

/// Slack added to pruning and candidate thresholds to absorb rounding in
/// incremental energies. Candidates are re-evaluated exactly afterwards.
pub(crate) fn rounding_slack(instance: &IsingInstance) -> f64 {
    let total: f64 = instance.parameters().map(f64::abs).sum();
    1e-10 * (1.0 + total)
}

pub(crate) fn check_tol(deg_tol: f64) -> Result<()> {
    if !(deg_tol >= 0.0 && deg_tol.is_finite()) {
        return Err(invalid!("degeneracy tolerance must be finite and non-negative, got {deg_tol}"));
    }
    Ok(())
}

/// Exact re-evaluation of candidate configurations and final selection.
pub(crate) fn finalize(instance: &IsingInstance, candidates: &[u64], deg_tol: f64) -> Result<GroundStateResult> {
    let scored: Vec<(u64, f64)> = candidates.iter().map(|&b| (b, instance.energy_bits(b))).collect();
    let min = scored.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::Numerical(alloc::format!("no finite ground energy for {}", instance.id())));
    }
    let states = scored
        .into_iter()
        .filter(|&(_, e)| e <= min + deg_tol)
        .map(|(b, _)| SpinConfiguration::from_raw(b, instance.n()))
        .collect();
    GroundStateResult::new(min, states, deg_tol)
}

/// Which exact solver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    BruteForce,
    BranchAndBound,
    /// Enumeration up to 16 qubits, branch-and-bound beyond.
    #[default]
    Auto,
}

impl Solver {
    pub fn solve(&self, instance: &IsingInstance, deg_tol: f64) -> Result<GroundStateResult> {
        match self {
            Solver::BruteForce => brute_force_ground(instance, deg_tol),
            Solver::BranchAndBound => branch_and_bound_ground(instance, deg_tol),
            Solver::Auto if instance.n() <= 16 => brute_force_ground(instance, deg_tol),
            Solver::Auto => branch_and_bound_ground(instance, deg_tol),
        }
    }
}

/// Correctness of one imprecise instance against the exact one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorrectnessVerdict {
    pub single_correct: bool,
    pub copies_correct_count: usize,
    pub any_copy_correct: bool,
}

/// Number of copies of `linked_state` that are exact ground states.
pub fn correct_copies(exact: &GroundStateResult, linked_state: &SpinConfiguration, copies: usize) -> Result<usize> {
    let n = exact.n();
    let mut count = 0;
    for c in 0..copies {
        if exact.contains(&extract_copy(linked_state, c, n)?) {
            count += 1;
        }
    }
    Ok(count)
}

/// Compare the imprecise single copy and linked system against the exact
/// ground states. For degenerate linked ground states the state with the
/// most correct copies counts.
pub fn verdict(
    exact: &GroundStateResult,
    approx_single: &GroundStateResult,
    approx_linked: &GroundStateResult,
    copies: usize,
    n: usize,
) -> Result<CorrectnessVerdict> {
    if exact.n() != n || approx_single.n() != n {
        return Err(Error::LengthMismatch { expected: n, actual: approx_single.n().max(exact.n()) });
    }
    if approx_linked.n() != copies * n {
        return Err(Error::LengthMismatch { expected: copies * n, actual: approx_linked.n() });
    }
    let single_correct = approx_single.states().iter().any(|s| exact.contains(s));
    let mut best = 0;
    for s in approx_linked.states() {
        best = best.max(correct_copies(exact, s, copies)?);
        if best == copies {
            break;
        }
    }
    Ok(CorrectnessVerdict { single_correct, copies_correct_count: best, any_copy_correct: best >= 1 })
}

/// Single-copy correctness only.
pub fn single_correct(exact: &GroundStateResult, approx: &GroundStateResult) -> Result<bool> {
    if exact.n() != approx.n() {
        return Err(Error::LengthMismatch { expected: exact.n(), actual: approx.n() });
    }
    Ok(approx.states().iter().any(|s| exact.contains(s)))
}
