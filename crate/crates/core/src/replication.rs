//! Linked copies of an Ising instance.
//!
//! `C` copies of a base instance are placed side by side (copy `c`, qubit
//! `j` becomes composite qubit `c*n + j`) and corresponding qubits of the
//! copies joined by a topology graph `G` are linked with strength `J_F`.
//! The link term enters the Hamiltonian as `-J_F Z Z`, so the stored
//! coupling is `-J_F`: `J_F < 0` is anti-ferromagnetic.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::instances::{Family, IsingInstance};
use crate::precision::{apply_error, ErrorModel, PrecisionGrid};
use crate::spin::SpinConfiguration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Pair,
    Chain,
    Triangle,
    Cycle,
    Custom,
}

impl Shape {
    pub fn as_str(&self) -> &'static str {
        match self {
            Shape::Pair => "pair",
            Shape::Chain => "chain",
            Shape::Triangle => "triangle",
            Shape::Cycle => "cycle",
            Shape::Custom => "custom",
        }
    }
}

/// Graph connecting the copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyTopology {
    copies: usize,
    edges: Vec<(usize, usize)>,
    shape: Shape,
}

impl CopyTopology {
    pub fn new(copies: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::with_shape(copies, edges, Shape::Custom)
    }

    fn with_shape(copies: usize, edges: impl IntoIterator<Item = (usize, usize)>, shape: Shape) -> Result<Self> {
        if copies < 2 {
            return Err(invalid!("need at least two copies, got {copies}"));
        }
        let mut stored: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            let e = if a < b { (a, b) } else { (b, a) };
            if e.0 == e.1 || e.1 >= copies {
                return Err(invalid!("invalid copy edge ({a}, {b}) for {copies} copies"));
            }
            if stored.contains(&e) {
                return Err(invalid!("duplicate copy edge ({}, {})", e.0, e.1));
            }
            stored.push(e);
        }
        Ok(Self { copies, edges: stored, shape })
    }

    pub fn pair() -> Self {
        Self::with_shape(2, [(0, 1)], Shape::Pair).unwrap()
    }

    /// Path through `copies` copies.
    pub fn chain(copies: usize) -> Result<Self> {
        Self::with_shape(copies, (1..copies).map(|c| (c - 1, c)), Shape::Chain)
    }

    pub fn chain3() -> Self {
        Self::chain(3).unwrap()
    }

    pub fn triangle() -> Self {
        Self::with_shape(3, [(0, 1), (1, 2), (0, 2)], Shape::Triangle).unwrap()
    }

    /// Ring of `len >= 3` copies.
    pub fn cycle(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(invalid!("cycle needs at least three copies, got {len}"));
        }
        Self::with_shape(len, (0..len).map(|c| (c, (c + 1) % len)), Shape::Cycle)
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Short label such as `triangle` or `cycle5`.
    pub fn label(&self) -> alloc::string::String {
        match self.shape {
            Shape::Cycle | Shape::Chain | Shape::Custom => format!("{}{}", self.shape.as_str(), self.copies),
            _ => self.shape.as_str().into(),
        }
    }
}

/// Smallest-magnitude anti-ferromagnetic link on the precision grid,
/// `-2^(1-p)`.
pub fn jf_min(p: u32) -> Result<f64> {
    Ok(-PrecisionGrid::new(p)?.spacing())
}

/// How a linked system picks up precision errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinkNoise {
    /// Pass link values through the error model as well.
    pub noisy_links: bool,
    /// Draw errors independently for every copy instead of copying one
    /// imprecise base instance.
    pub independent_copies: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkedSystem {
    base: IsingInstance,
    topology: CopyTopology,
    jf: f64,
    composite: IsingInstance,
}

impl LinkedSystem {
    pub fn base(&self) -> &IsingInstance {
        &self.base
    }

    pub fn topology(&self) -> &CopyTopology {
        &self.topology
    }

    pub fn jf(&self) -> f64 {
        self.jf
    }

    pub fn composite(&self) -> &IsingInstance {
        &self.composite
    }

    pub fn into_composite(self) -> IsingInstance {
        self.composite
    }

    /// `sum_c E_base(s^(c)) - J_F sum_{(c,c') in G} sum_j s_j^(c) s_j^(c')`.
    pub fn decomposed_energy(&self, config: &SpinConfiguration) -> Result<f64> {
        let n = self.base.n();
        let parts = (0..self.topology.copies)
            .map(|c| extract_copy(config, c, n))
            .collect::<Result<Vec<_>>>()?;
        let mut e = 0.0;
        for part in &parts {
            e += self.base.energy(part)?;
        }
        for &(a, b) in self.topology.edges() {
            let overlap: i32 = (0..n).map(|j| (parts[a].spin(j) * parts[b].spin(j)) as i32).sum();
            e -= self.jf * overlap as f64;
        }
        Ok(e)
    }
}

fn check_link(jf: f64) -> Result<()> {
    if !(jf.abs() <= 1.0) {
        return Err(invalid!("link strength {jf} outside [-1, 1]"));
    }
    Ok(())
}

fn assemble(
    copies: &[IsingInstance],
    topology: &CopyTopology,
    mut link_value: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<IsingInstance> {
    let n = copies[0].n();
    let total = n * copies.len();
    let mut h = Vec::with_capacity(total);
    let mut couplings = Vec::new();
    for (c, copy) in copies.iter().enumerate() {
        h.extend_from_slice(copy.h());
        couplings.extend(copy.couplings().iter().map(|x| (c * n + x.j, c * n + x.k, x.value)));
    }
    for (e, &(a, b)) in topology.edges().iter().enumerate() {
        for j in 0..n {
            couplings.push((a * n + j, b * n + j, link_value(e, j)?));
        }
    }
    let base = &copies[0];
    IsingInstance::new(
        format!("{}/{}", base.id(), topology.label()),
        Family::Custom,
        base.seed(),
        h,
        couplings,
    )
}

/// Composite Hamiltonian of `topology.copies()` identical copies of `base`
/// joined with link strength `jf`. Links are applied exactly.
pub fn build_linked(base: &IsingInstance, topology: &CopyTopology, jf: f64) -> Result<LinkedSystem> {
    check_link(jf)?;
    if base.n() * topology.copies() > crate::spin::MAX_SPINS {
        return Err(invalid!("linked system exceeds {} qubits", crate::spin::MAX_SPINS));
    }
    let copies = alloc::vec![base.clone(); topology.copies()];
    let composite = assemble(&copies, topology, |_, _| Ok(-jf))?;
    Ok(LinkedSystem { base: base.clone(), topology: topology.clone(), jf, composite })
}

/// Linked system built from the exact instance with precision errors
/// applied according to `noise`. With the default `LinkNoise` this equals
/// `build_linked(apply_error(exact, ..), topology, jf)`.
pub fn build_linked_with_errors(
    exact: &IsingInstance,
    topology: &CopyTopology,
    jf: f64,
    p: u32,
    model: &ErrorModel,
    sample: u32,
    noise: LinkNoise,
) -> Result<LinkedSystem> {
    check_link(jf)?;
    let base = apply_error(exact, p, model, sample)?;
    let copies = if noise.independent_copies {
        let mut v = alloc::vec![base.clone()];
        for c in 1..topology.copies() {
            let shifted = exact.clone().with_id(format!("{}#copy{c}", exact.id()));
            v.push(apply_error(&shifted, p, model, sample)?.with_id(exact.id()));
        }
        v
    } else {
        alloc::vec![base.clone(); topology.copies()]
    };
    let grid = PrecisionGrid::new(p)?;
    let link_id = format!("{}#links", exact.id());
    let n = exact.n();
    let composite = assemble(&copies, topology, |e, j| {
        if noise.noisy_links {
            model.perturb(&grid, -jf, &link_id, sample, e * n + j)
        } else {
            Ok(-jf)
        }
    })?;
    Ok(LinkedSystem { base, topology: topology.clone(), jf, composite })
}

/// Bits `[c*n, (c+1)*n)` of a composite configuration.
pub fn extract_copy(config: &SpinConfiguration, c: usize, n: usize) -> Result<SpinConfiguration> {
    if n == 0 || (c + 1) * n > config.len() {
        return Err(invalid!("copy {c} of width {n} outside configuration of length {}", config.len()));
    }
    config.slice(c * n, n)
}
