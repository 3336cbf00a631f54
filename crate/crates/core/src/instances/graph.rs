use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Simple undirected graph: no self-loops, no repeated edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; vertices * vertices];
        let mut stored = Vec::new();
        for (a, b) in edges {
            let (j, k) = if a <= b { (a, b) } else { (b, a) };
            if j == k {
                return Err(invalid!("self-loop on vertex {j}"));
            }
            if k >= vertices {
                return Err(invalid!("edge ({j}, {k}) out of range for {vertices} vertices"));
            }
            if core::mem::replace(&mut seen[j * vertices + k], true) {
                return Err(invalid!("duplicate edge ({j}, {k})"));
            }
            stored.push((j, k));
        }
        Ok(Self { vertices, edges: stored })
    }

    pub fn path(vertices: usize) -> Self {
        Self::new(vertices, (1..vertices).map(|k| (k - 1, k))).expect("path edges are valid")
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(j, k) in &self.edges {
            d[j] += 1;
            d[k] += 1;
        }
        d
    }

    pub fn is_independent(&self, members: u64) -> bool {
        self.edges.iter().all(|&(j, k)| members >> j & 1 == 0 || members >> k & 1 == 0)
    }
}
