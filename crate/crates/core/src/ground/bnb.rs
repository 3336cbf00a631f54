use alloc::vec;
use alloc::vec::Vec;

use super::{check_tol, finalize, rounding_slack, GroundStateResult};
use crate::error::Result;
use crate::instances::{Adjacency, IsingInstance};

/// Counters from one branch-and-bound run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned: u64,
    /// Variable and spin value tried first at the root.
    pub first_branch: Option<(usize, i8)>,
}

/// Exact ground states by depth-first branch-and-bound.
pub fn branch_and_bound_ground(instance: &IsingInstance, deg_tol: f64) -> Result<GroundStateResult> {
    branch_and_bound_with_stats(instance, deg_tol).map(|(g, _)| g)
}

/// Variables are fixed in descending order of total incident weight
/// `|h_j| + sum_k |J_jk|`. A partial assignment is discarded when
///
/// ```text
/// E_assigned - sum_{u free} |h_u + sum_{k fixed} J_uk s_k| - sum_{u<v free} |J_uv|
/// ```
///
/// exceeds the incumbent by more than `deg_tol`, so every state inside
/// the degeneracy window survives.
pub fn branch_and_bound_with_stats(instance: &IsingInstance, deg_tol: f64) -> Result<(GroundStateResult, SearchStats)> {
    check_tol(deg_tol)?;
    let n = instance.n();
    let mut weight: Vec<f64> = instance.h().iter().map(|h| h.abs()).collect();
    for c in instance.couplings() {
        weight[c.j] += c.value.abs();
        weight[c.k] += c.value.abs();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weight[b].total_cmp(&weight[a]).then(a.cmp(&b)));
    let mut pos = vec![0usize; n];
    for (d, &v) in order.iter().enumerate() {
        pos[v] = d;
    }
    // free_pairs[d]: sum of |J| over couplings with both ends at depth >= d
    let mut free_pairs = vec![0.0; n + 1];
    for c in instance.couplings() {
        free_pairs[pos[c.j].min(pos[c.k])] += c.value.abs();
    }
    for d in (0..n).rev() {
        free_pairs[d] += free_pairs[d + 1];
    }

    let slack = rounding_slack(instance);
    let mut search = Search {
        order,
        pos,
        adj: instance.adjacency(),
        lf: instance.h().to_vec(),
        saved: Vec::with_capacity(n * n),
        free_pairs,
        bits: 0,
        best: f64::INFINITY,
        window: deg_tol + slack,
        candidates: Vec::new(),
        filter_at: 1024,
        stats: SearchStats::default(),
    };
    search.descend(0, 0.0);
    let Search { candidates, stats, .. } = search;
    let bits: Vec<u64> = candidates.into_iter().map(|(b, _)| b).collect();
    Ok((finalize(instance, &bits, deg_tol)?, stats))
}

struct Search {
    order: Vec<usize>,
    pos: Vec<usize>,
    adj: Adjacency,
    /// h plus contributions of fixed neighbours, valid on free variables
    lf: Vec<f64>,
    /// previous local fields, restored exactly on backtrack
    saved: Vec<f64>,
    free_pairs: Vec<f64>,
    bits: u64,
    best: f64,
    window: f64,
    candidates: Vec<(u64, f64)>,
    filter_at: usize,
    stats: SearchStats,
}

impl Search {
    fn descend(&mut self, depth: usize, energy: f64) {
        self.stats.nodes += 1;
        let n = self.order.len();
        if depth == n {
            if energy < self.best {
                self.best = energy;
            }
            if energy <= self.best + self.window {
                self.candidates.push((self.bits, energy));
                if self.candidates.len() >= self.filter_at {
                    let limit = self.best + self.window;
                    self.candidates.retain(|&(_, e)| e <= limit);
                    self.filter_at = 2 * self.candidates.len() + 1024;
                }
            }
            return;
        }
        let free_fields: f64 = self.order[depth..].iter().map(|&u| self.lf[u].abs()).sum();
        let bound = energy - free_fields - self.free_pairs[depth];
        if bound > self.best + self.window {
            self.stats.pruned += 1;
            return;
        }
        let v = self.order[depth];
        let first: i8 = if self.lf[v] > 0.0 { -1 } else { 1 };
        if depth == 0 {
            self.stats.first_branch = Some((v, first));
        }
        let mark = self.saved.len();
        for s in [first, -first] {
            let sf = s as f64;
            if s < 0 {
                self.bits |= 1 << v;
            }
            for &(u, w) in self.adj.neighbors(v) {
                if self.pos[u] > depth {
                    self.saved.push(self.lf[u]);
                    self.lf[u] += w * sf;
                }
            }
            self.descend(depth + 1, energy + sf * self.lf[v]);
            let mut i = mark;
            for &(u, _) in self.adj.neighbors(v) {
                if self.pos[u] > depth {
                    self.lf[u] = self.saved[i];
                    i += 1;
                }
            }
            self.saved.truncate(mark);
            self.bits &= !(1 << v);
        }
    }
}
