//! Ising problem instances and the generators for the three problem
//! families (SK spin glass, random spin chain, maximum independent set).
//!
//! Each unordered pair is stored once, and the energy of a spin
//! configuration is
//!
//! ```text
//! E(s) = sum_j h_j s_j + sum_{j<k} J_jk s_j s_k,    s_j in {-1, +1}.
//! ```

mod generate;
mod graph;

pub use generate::{gen_chain, gen_mis, gen_sk, random_graph, sk_unscaled};
pub use graph::Graph;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::spin::{SpinConfiguration, MAX_SPINS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sk,
    Chain,
    Mis,
    Custom,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Sk => "sk",
            Family::Chain => "chain",
            Family::Mis => "mis",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sk" => Ok(Family::Sk),
            "chain" => Ok(Family::Chain),
            "mis" => Ok(Family::Mis),
            "custom" => Ok(Family::Custom),
            other => Err(invalid!("unknown family {other:?}")),
        }
    }
}

/// A coupling `J_jk` between qubits `j < k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// Fields and pairwise couplings of an Ising Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingInstance {
    id: String,
    family: Family,
    seed: Option<u64>,
    h: Vec<f64>,
    couplings: Vec<Coupling>,
}

impl IsingInstance {
    /// Validates structure: pairs are normalised to `j < k`, self-loops,
    /// duplicates, out-of-range indices and non-finite values are rejected.
    /// Magnitudes are not checked here; see [`IsingInstance::check_unit_range`].
    pub fn new(
        id: impl Into<String>,
        family: Family,
        seed: Option<u64>,
        h: Vec<f64>,
        couplings: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let n = h.len();
        if n == 0 {
            return Err(invalid!("instance must have at least one qubit"));
        }
        if n > MAX_SPINS {
            return Err(invalid!("instance has {n} qubits, limit is {MAX_SPINS}"));
        }
        if let Some(j) = h.iter().position(|x| !x.is_finite()) {
            return Err(invalid!("field h_{j} is not finite"));
        }
        let mut seen = vec![false; n * n];
        let mut stored = Vec::new();
        for (a, b, value) in couplings {
            let (j, k) = if a <= b { (a, b) } else { (b, a) };
            if j == k {
                return Err(invalid!("self coupling on qubit {j}"));
            }
            if k >= n {
                return Err(invalid!("coupling ({j}, {k}) out of range for n = {n}"));
            }
            if !value.is_finite() {
                return Err(invalid!("coupling ({j}, {k}) is not finite"));
            }
            if core::mem::replace(&mut seen[j * n + k], true) {
                return Err(invalid!("duplicate coupling ({j}, {k})"));
            }
            stored.push(Coupling { j, k, value });
        }
        if family == Family::Chain {
            if let Some(c) = stored.iter().find(|c| c.k != c.j + 1) {
                return Err(invalid!("chain coupling ({}, {}) is not nearest-neighbour", c.j, c.k));
            }
        }
        Ok(Self { id: id.into(), family, seed, h, couplings: stored })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// All parameters in a fixed order: fields first, then couplings in
    /// storage order. Error-model draws are indexed by this order.
    pub fn parameters(&self) -> impl Iterator<Item = f64> + '_ {
        self.h.iter().copied().chain(self.couplings.iter().map(|c| c.value))
    }

    pub fn max_abs_parameter(&self) -> f64 {
        self.parameters().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Same structure with every parameter replaced by `f(index, value)`.
    pub fn map_parameters(&self, mut f: impl FnMut(usize, f64) -> f64) -> Self {
        let n = self.n();
        let h = self.h.iter().enumerate().map(|(i, &x)| f(i, x)).collect();
        let couplings = self
            .couplings
            .iter()
            .enumerate()
            .map(|(i, c)| Coupling { value: f(n + i, c.value), ..*c })
            .collect();
        Self { id: self.id.clone(), family: self.family, seed: self.seed, h, couplings }
    }

    pub fn check_unit_range(&self) -> Result<()> {
        if self.parameters().all(|x| x.abs() <= 1.0) {
            Ok(())
        } else {
            Err(invalid!("instance {} has parameters outside [-1, 1]", self.id))
        }
    }

    /// Energy of `config`.
    pub fn energy(&self, config: &SpinConfiguration) -> Result<f64> {
        if config.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: config.len() });
        }
        Ok(self.energy_bits(config.bits()))
    }

    /// Energy of the configuration encoded in `bits` (no length check).
    pub fn energy_bits(&self, bits: u64) -> f64 {
        let spin = |j: usize| if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
        let fields: f64 = self.h.iter().enumerate().map(|(j, &h)| h * spin(j)).sum();
        let pairs: f64 = self.couplings.iter().map(|c| c.value * spin(c.j) * spin(c.k)).sum();
        fields + pairs
    }

    /// Local field `h_j + sum_k J_jk s_k` on every qubit.
    pub fn local_fields(&self, bits: u64) -> Vec<f64> {
        let spin = |j: usize| if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
        let mut lf = self.h.clone();
        for c in &self.couplings {
            lf[c.j] += c.value * spin(c.k);
            lf[c.k] += c.value * spin(c.j);
        }
        lf
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }
}

/// Compressed neighbour lists, one row per qubit.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(usize, f64)>,
}

impl Adjacency {
    fn new(instance: &IsingInstance) -> Self {
        let n = instance.n();
        let mut degree = vec![0usize; n];
        for c in instance.couplings() {
            degree[c.j] += 1;
            degree[c.k] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for j in 0..n {
            offsets[j + 1] = offsets[j] + degree[j];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0usize, 0.0); offsets[n]];
        for c in instance.couplings() {
            entries[fill[c.j]] = (c.k, c.value);
            fill[c.j] += 1;
            entries[fill[c.k]] = (c.j, c.value);
            fill[c.k] += 1;
        }
        Self { offsets, entries }
    }

    #[inline]
    pub fn neighbors(&self, j: usize) -> &[(usize, f64)] {
        &self.entries[self.offsets[j]..self.offsets[j + 1]]
    }
}

/// Divide every parameter by the largest magnitude so the extreme values
/// sit at +1 or -1. A positive common factor leaves the ground-state set
/// unchanged.
pub fn rescale(instance: &IsingInstance) -> Result<IsingInstance> {
    let m = instance.max_abs_parameter();
    if m == 0.0 {
        return Err(invalid!("cannot rescale all-zero instance {}", instance.id()));
    }
    Ok(instance.map_parameters(|_, x| x / m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Key;
    use proptest::prelude::*;

    fn cfg(s: &str) -> SpinConfiguration {
        s.parse().unwrap()
    }

    fn triangle() -> IsingInstance {
        IsingInstance::new("tri", Family::Custom, None, vec![0.0; 3], [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])
            .unwrap()
    }

    #[test]
    fn energy_examples() {
        let one = IsingInstance::new("a", Family::Custom, None, vec![0.5], []).unwrap();
        assert_eq!(one.energy(&cfg("1")).unwrap(), -0.5);

        let pair = IsingInstance::new("b", Family::Custom, None, vec![0.0, 0.0], [(0, 1, 1.0)]).unwrap();
        assert_eq!(pair.energy(&cfg("01")).unwrap(), -1.0);

        let tri = triangle();
        let energies: Vec<f64> = (0..8).map(|b| tri.energy_bits(b)).collect();
        let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, -1.0);
        assert_eq!(energies.iter().filter(|&&e| e == min).count(), 6);
    }

    #[test]
    fn energy_rejects_length_mismatch() {
        let tri = triangle();
        assert!(matches!(
            tri.energy(&cfg("01")),
            Err(Error::LengthMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn construction_rejects_bad_couplings() {
        let h = vec![0.0; 3];
        assert!(IsingInstance::new("x", Family::Custom, None, h.clone(), [(1, 1, 0.5)]).is_err());
        assert!(IsingInstance::new("x", Family::Custom, None, h.clone(), [(0, 3, 0.5)]).is_err());
        assert!(IsingInstance::new("x", Family::Custom, None, h.clone(), [(0, 1, 0.5), (1, 0, 0.2)]).is_err());
        assert!(IsingInstance::new("x", Family::Chain, None, h.clone(), [(0, 2, 0.5)]).is_err());
        assert!(IsingInstance::new("x", Family::Custom, None, vec![], []).is_err());
        // reversed pair order is normalised
        let inst = IsingInstance::new("x", Family::Custom, None, h, [(2, 0, 0.5)]).unwrap();
        assert_eq!((inst.couplings()[0].j, inst.couplings()[0].k), (0, 2));
    }

    #[test]
    fn rescale_examples() {
        let a = IsingInstance::new("a", Family::Custom, None, vec![0.5], []).unwrap();
        assert_eq!(rescale(&a).unwrap().h(), &[1.0]);

        let b = IsingInstance::new("b", Family::Custom, None, vec![0.2, -0.4], [(0, 1, 0.8)]).unwrap();
        let r = rescale(&b).unwrap();
        assert_eq!(r.h(), &[0.25, -0.5]);
        assert_eq!(r.couplings()[0].value, 1.0);

        let zero = IsingInstance::new("z", Family::Custom, None, vec![0.0, 0.0], [(0, 1, 0.0)]).unwrap();
        assert!(matches!(rescale(&zero), Err(Error::InvalidArgument(_))));
    }

    fn random_instance(n: usize, seed: u64) -> IsingInstance {
        let key = Key::new(seed);
        let h = (0..n).map(|j| 2.0 * key.tag("h").word(j as u64).unit() - 1.0).collect();
        let mut couplings = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                let v = 2.0 * key.tag("J").word((j * n + k) as u64).unit() - 1.0;
                couplings.push((j, k, v));
            }
        }
        IsingInstance::new("r", Family::Custom, None, h, couplings).unwrap()
    }

    #[test]
    fn incremental_flip_matches_full_evaluation() {
        let inst = random_instance(9, 11);
        let adj = inst.adjacency();
        let mut bits = 0u64;
        let mut energy = inst.energy_bits(bits);
        let mut lf = inst.local_fields(bits);
        for step in 0..1000u64 {
            let j = (Key::new(step).unit() * 9.0) as usize;
            let s = if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
            energy -= 2.0 * s * lf[j];
            for &(k, w) in adj.neighbors(j) {
                lf[k] -= 2.0 * w * s;
            }
            bits ^= 1 << j;
            let full = inst.energy_bits(bits);
            assert!((energy - full).abs() <= 1e-12 * full.abs().max(1.0), "step {step}");
        }
    }

    proptest! {
        #[test]
        fn global_flip_without_fields_preserves_energy(seed in any::<u64>(), bits in 0u64..512) {
            let inst = random_instance(9, seed).map_parameters(|i, x| if i < 9 { 0.0 } else { x });
            prop_assert_eq!(inst.energy_bits(bits), inst.energy_bits(!bits & 511));
        }

        #[test]
        fn rescale_is_idempotent_and_order_preserving(seed in any::<u64>()) {
            let inst = random_instance(5, seed);
            let once = rescale(&inst).unwrap();
            prop_assert_eq!(&rescale(&once).unwrap(), &once);
            prop_assert_eq!(once.max_abs_parameter(), 1.0);
            let argmin = |x: &IsingInstance| {
                (0..32u64).min_by(|&a, &b| x.energy_bits(a).total_cmp(&x.energy_bits(b))).unwrap()
            };
            prop_assert_eq!(argmin(&inst), argmin(&once));
        }
    }
}
