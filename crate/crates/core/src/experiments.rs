//! Per-instance evaluation of the precision sweeps and the counting that
//! turns verdicts into fractions correct.
//!
//! A sweep is a list of cells, one per `(p, J_F)` pair. For every
//! instance the exact ground states are solved once; then for each
//! precision and error sample the single imprecise copy and each linked
//! system are solved and compared against them. Counts from different
//! instances are plain integer sums, so any evaluation order gives the
//! same report.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::ground::{single_correct, verdict, Solver};
use crate::instances::{gen_chain, gen_mis, gen_sk, random_graph, Family, IsingInstance};
use crate::precision::{apply_error, ErrorModel, PrecisionGrid};
use crate::replication::{build_linked, build_linked_with_errors, jf_min, CopyTopology, LinkNoise};
use crate::seed;

/// Choice of link strength per precision.
#[derive(Debug, Clone, PartialEq)]
pub enum JfChoice {
    /// `-2^(1-p)`.
    Min,
    Fixed(f64),
    /// The same explicit values at every precision.
    Grid(Vec<f64>),
    /// Every grid midpoint of precision `p` in `[-1, 0]`.
    NonPositiveMidpoints,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Linking {
    pub topology: CopyTopology,
    pub jf: JfChoice,
    pub noise: LinkNoise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub precisions: Vec<u32>,
    pub model: ErrorModel,
    pub linking: Option<Linking>,
    pub deg_tol: f64,
    pub solver: Solver,
}

/// One `(p, J_F)` cell; `jf` is `None` for single-copy sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub p: u32,
    pub jf: Option<f64>,
}

impl SweepSpec {
    pub fn cells(&self) -> Result<Vec<Cell>> {
        if self.precisions.is_empty() {
            return Err(invalid!("sweep needs at least one precision"));
        }
        let mut cells = Vec::new();
        for &p in &self.precisions {
            let grid = PrecisionGrid::new(p)?;
            let Some(link) = &self.linking else {
                cells.push(Cell { p, jf: None });
                continue;
            };
            let values = match &link.jf {
                JfChoice::Min => vec![jf_min(p)?],
                JfChoice::Fixed(v) => vec![*v],
                JfChoice::Grid(vs) => {
                    let min = jf_min(p)?;
                    if !vs.contains(&0.0) || !vs.contains(&min) {
                        return Err(invalid!("J_F grid must contain 0 and {min} for p = {p}"));
                    }
                    vs.clone()
                }
                JfChoice::NonPositiveMidpoints => grid.midpoints().into_iter().filter(|&m| m <= 0.0).collect(),
            };
            for jf in values {
                if !(jf.abs() <= 1.0) {
                    return Err(invalid!("link strength {jf} outside [-1, 1]"));
                }
                cells.push(Cell { p, jf: Some(jf) });
            }
        }
        Ok(cells)
    }

    pub fn copies(&self) -> usize {
        self.linking.as_ref().map_or(0, |l| l.topology.copies())
    }
}

/// Verdict counts for one cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellCounts {
    pub total: u64,
    pub single: u64,
    pub any_copy: u64,
    pub single_or_any: u64,
    pub both: u64,
    pub single_only: u64,
    pub copies_only: u64,
    /// `by_copies[k]`: trials whose best linked ground state had exactly
    /// `k` correct copies. Empty for single-copy sweeps.
    pub by_copies: Vec<u64>,
}

impl CellCounts {
    fn new(copies: usize) -> Self {
        Self { by_copies: vec![0; if copies > 0 { copies + 1 } else { 0 }], ..Default::default() }
    }

    fn record_single(&mut self, single: bool) {
        self.total += 1;
        self.single += single as u64;
        self.single_or_any += single as u64;
    }

    fn record_linked(&mut self, single: bool, correct_copies: usize) {
        let any = correct_copies >= 1;
        self.total += 1;
        self.single += single as u64;
        self.any_copy += any as u64;
        self.single_or_any += (single || any) as u64;
        self.both += (single && any) as u64;
        self.single_only += (single && !any) as u64;
        self.copies_only += (!single && any) as u64;
        self.by_copies[correct_copies] += 1;
    }

    pub fn merge(&mut self, other: &CellCounts) {
        self.total += other.total;
        self.single += other.single;
        self.any_copy += other.any_copy;
        self.single_or_any += other.single_or_any;
        self.both += other.both;
        self.single_only += other.single_only;
        self.copies_only += other.copies_only;
        if self.by_copies.len() < other.by_copies.len() {
            self.by_copies.resize(other.by_copies.len(), 0);
        }
        for (a, b) in self.by_copies.iter_mut().zip(&other.by_copies) {
            *a += b;
        }
    }

    pub fn fraction(&self, count: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            count as f64 / self.total as f64
        }
    }

    /// Binomial standard error `sqrt(f (1 - f) / total)`.
    pub fn stderr(&self, count: u64) -> f64 {
        let f = self.fraction(count);
        if self.total == 0 {
            0.0
        } else {
            libm::sqrt(f * (1.0 - f) / self.total as f64)
        }
    }

    /// Trials with exactly `k` correct copies.
    pub fn copies_correct(&self, k: usize) -> u64 {
        self.by_copies.get(k).copied().unwrap_or(0)
    }

    pub fn all_copies_correct(&self) -> u64 {
        self.by_copies.last().copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub cell: Cell,
    pub counts: CellCounts,
}

/// Aggregated counts for every cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionReport {
    pub copies: usize,
    pub cells: Vec<CellReport>,
}

impl FractionReport {
    pub fn empty(spec: &SweepSpec) -> Result<Self> {
        let copies = spec.copies();
        let cells = spec.cells()?.into_iter().map(|cell| CellReport { cell, counts: CellCounts::new(copies) }).collect();
        Ok(Self { copies, cells })
    }

    /// Add one instance's counts, cell by cell.
    pub fn absorb(&mut self, counts: &[CellCounts]) -> Result<()> {
        if counts.len() != self.cells.len() {
            return Err(Error::LengthMismatch { expected: self.cells.len(), actual: counts.len() });
        }
        for (cell, c) in self.cells.iter_mut().zip(counts) {
            cell.counts.merge(c);
        }
        Ok(())
    }

    pub fn cell(&self, p: u32, jf: Option<f64>) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.cell.p == p && c.cell.jf == jf)
    }

    pub fn cells_at(&self, p: u32) -> impl Iterator<Item = &CellReport> {
        self.cells.iter().filter(move |c| c.cell.p == p)
    }

    /// Cell with the highest any-copy-correct count at precision `p`;
    /// ties go to the smallest `|J_F|`.
    pub fn argmax_jf(&self, p: u32) -> Option<&CellReport> {
        self.cells_at(p).filter(|c| c.cell.jf.is_some()).fold(None, |best: Option<&CellReport>, c| match best {
            None => Some(c),
            Some(b) => {
                let (cb, cc) = (b.counts.any_copy, c.counts.any_copy);
                let (jb, jc) = (b.cell.jf.unwrap().abs(), c.cell.jf.unwrap().abs());
                if cc > cb || (cc == cb && jc < jb) {
                    Some(c)
                } else {
                    Some(b)
                }
            }
        })
    }
}

/// `1 - (1 - p1)^r`: success probability of `r` independent repeats.
pub fn unconnected_baseline(p1: f64, r: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(invalid!("probability {p1} outside [0, 1]"));
    }
    if r == 0 {
        return Err(invalid!("need at least one repeat"));
    }
    Ok(1.0 - libm::pow(1.0 - p1, r as f64))
}

/// Instance `index` of a generated family with the given master seed.
pub fn generate_instance(family: Family, n: usize, master_seed: u64, index: u64) -> Result<IsingInstance> {
    let seed = seed::derive(master_seed, "instance", index);
    match family {
        Family::Sk => gen_sk(n, 1.0, seed),
        Family::Chain => gen_chain(n, seed),
        Family::Mis => Ok(gen_mis(&random_graph(n, 0.5, seed)?)?.with_id(format!("mis-n{n}-s{seed}"))),
        Family::Custom => Err(invalid!("custom instances cannot be generated")),
    }
}

/// Counts for every cell of `spec` contributed by one exact instance.
pub fn evaluate_instance(exact: &IsingInstance, spec: &SweepSpec, cells: &[Cell]) -> Result<Vec<CellCounts>> {
    evaluate_inner(exact, spec, cells).map_err(|e| e.for_instance(exact.id()))
}

fn evaluate_inner(exact: &IsingInstance, spec: &SweepSpec, cells: &[Cell]) -> Result<Vec<CellCounts>> {
    let copies = spec.copies();
    let n = exact.n();
    let exact_gs = spec.solver.solve(exact, spec.deg_tol)?;
    let mut out: Vec<CellCounts> = cells.iter().map(|_| CellCounts::new(copies)).collect();
    let mut done = vec![false; cells.len()];
    for i in 0..cells.len() {
        if done[i] {
            continue;
        }
        let p = cells[i].p;
        let group: Vec<usize> = (i..cells.len()).filter(|&k| cells[k].p == p && !done[k]).collect();
        for sample in 0..spec.model.samples() {
            let approx = apply_error(exact, p, &spec.model, sample)?;
            let single_gs = spec.solver.solve(&approx, spec.deg_tol)?;
            let single = single_correct(&exact_gs, &single_gs)?;
            for &k in &group {
                let (Some(link), Some(jf)) = (&spec.linking, cells[k].jf) else {
                    out[k].record_single(single);
                    continue;
                };
                let linked = if link.noise == LinkNoise::default() {
                    build_linked(&approx, &link.topology, jf)?
                } else {
                    build_linked_with_errors(exact, &link.topology, jf, p, &spec.model, sample, link.noise)?
                };
                let linked_gs = spec.solver.solve(linked.composite(), spec.deg_tol)?;
                let v = verdict(&exact_gs, &single_gs, &linked_gs, copies, n)?;
                out[k].record_linked(single, v.copies_correct_count);
            }
        }
        for &k in &group {
            done[k] = true;
        }
    }
    Ok(out)
}
