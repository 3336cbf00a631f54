use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::instances::IsingInstance;

/// Default qubit limit for state-vector simulation.
pub const DEFAULT_QUBIT_CAP: usize = 16;

/// `gamma * H0 + H_P` with `H0 = -sum_j X_j` and `H_P` diagonal in the
/// computational basis. Basis index `i` has qubit `j` in state `|1>`
/// (spin -1) when bit `j` of `i` is set.
#[derive(Debug, Clone)]
pub struct WalkHamiltonian {
    qubits: usize,
    gamma: f64,
    diag: Vec<f64>,
}

impl WalkHamiltonian {
    pub fn new(instance: &IsingInstance, gamma: f64) -> Result<Self> {
        Self::with_cap(instance, gamma, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(instance: &IsingInstance, gamma: f64, cap: usize) -> Result<Self> {
        let n = instance.n();
        if n > cap {
            return Err(Error::Resource(format!("{n} qubits exceeds walk cap {cap}")));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(invalid!("hopping rate must be finite and non-negative, got {gamma}"));
        }
        Ok(Self::from_diagonal(problem_diagonal(instance), gamma))
    }

    pub(crate) fn from_diagonal(diag: Vec<f64>, gamma: f64) -> Self {
        let qubits = diag.len().trailing_zeros() as usize;
        debug_assert_eq!(diag.len(), 1 << qubits);
        Self { qubits, gamma, diag }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Interval containing the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.diag.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| (lo.min(d), hi.max(d)));
        let spread = self.gamma * self.qubits as f64;
        (lo - spread, hi + spread)
    }

    /// `out = (H v - shift v) * scale`.
    pub fn apply_shifted(&self, v: &[Complex64], out: &mut [Complex64], shift: f64, scale: f64) {
        assert_eq!(v.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        let g = self.gamma;
        for (i, o) in out.iter_mut().enumerate() {
            let mut hop = Complex64::new(0.0, 0.0);
            for j in 0..self.qubits {
                hop += v[i ^ (1 << j)];
            }
            *o = ((self.diag[i] - shift) * v[i] - g * hop) * scale;
        }
    }

    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        self.apply_shifted(v, out, 0.0, 1.0);
    }

    /// `<v|H|v>`.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let mut hv = alloc::vec![Complex64::new(0.0, 0.0); self.dim()];
        self.apply(v, &mut hv);
        v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

/// Energies of every basis state of `instance`, in basis order.
pub fn problem_diagonal(instance: &IsingInstance) -> Vec<f64> {
    (0..1u64 << instance.n()).map(|b| instance.energy_bits(b)).collect()
}
