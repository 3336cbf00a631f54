use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use super::{rescale, Family, Graph, IsingInstance};
use crate::error::{invalid, Result};

fn normal(sigma: f64) -> Result<Normal<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid!("sigma must be positive, got {sigma}"));
    }
    Normal::new(0.0, sigma).map_err(|e| invalid!("normal distribution: {e}"))
}

/// SK spin glass before rescaling.
///
/// Draws the fields `h_j` (in qubit order) and then the couplings `J_jk`
/// (lexicographic `j < k`) from `Normal(0, sigma)`. The SK Hamiltonian
/// `-1/2 sum_{j != k} J_jk Z_j Z_k - sum_j h_j Z_j` counts each pair
/// twice with a factor one half, so the stored single-pair values are
/// `-J_jk` and `-h_j`.
pub fn sk_unscaled(n: usize, sigma: f64, seed: u64) -> Result<IsingInstance> {
    if n < 2 {
        return Err(invalid!("SK instance needs n >= 2, got {n}"));
    }
    let dist = normal(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Vec<f64> = (0..n).map(|_| -dist.sample(&mut rng)).collect();
    let mut couplings = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for k in j + 1..n {
            couplings.push((j, k, -dist.sample(&mut rng)));
        }
    }
    IsingInstance::new(format!("sk-n{n}-s{seed}"), Family::Sk, Some(seed), h, couplings)
}

/// SK spin glass on the complete graph, rescaled into `[-1, 1]`.
pub fn gen_sk(n: usize, sigma: f64, seed: u64) -> Result<IsingInstance> {
    rescale(&sk_unscaled(n, sigma, seed)?)
}

/// Open spin chain with `Normal(0, 1)` fields and nearest-neighbour
/// couplings, rescaled into `[-1, 1]`.
pub fn gen_chain(n: usize, seed: u64) -> Result<IsingInstance> {
    if n < 2 {
        return Err(invalid!("chain needs n >= 2, got {n}"));
    }
    let dist = normal(1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
    let couplings: Vec<_> = (0..n - 1).map(|j| (j, j + 1, dist.sample(&mut rng))).collect();
    let raw = IsingInstance::new(format!("chain-n{n}-s{seed}"), Family::Chain, Some(seed), h, couplings)?;
    rescale(&raw)
}

/// Maximum independent set encoding, rescaled.
///
/// `h_j = -(d_j - 1/2)`, `J_jk = +1` per edge. Bit 1 (spin -1) marks a
/// vertex inside the set.
pub fn gen_mis(graph: &Graph) -> Result<IsingInstance> {
    if graph.vertices() == 0 {
        return Err(invalid!("MIS graph must have at least one vertex"));
    }
    let h = graph.degrees().into_iter().map(|d| -(d as f64 - 0.5)).collect();
    let couplings = graph.edges().iter().map(|&(j, k)| (j, k, 1.0));
    let raw = IsingInstance::new(
        format!("mis-v{}-e{}", graph.vertices(), graph.edges().len()),
        Family::Mis,
        None,
        h,
        couplings,
    )?;
    rescale(&raw)
}

/// Erdős–Rényi graph `G(n, prob)`, edges visited in lexicographic order.
pub fn random_graph(vertices: usize, prob: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(invalid!("edge probability {prob} outside [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Uniform::new(0.0, 1.0).map_err(|e| invalid!("{e}"))?;
    let mut edges = Vec::new();
    for j in 0..vertices {
        for k in j + 1..vertices {
            if unit.sample(&mut rng) < prob {
                edges.push((j, k));
            }
        }
    }
    Graph::new(vertices, edges)
}
