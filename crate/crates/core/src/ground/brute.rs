use alloc::format;
use alloc::vec::Vec;

use super::{check_tol, finalize, rounding_slack, GroundStateResult};
use crate::error::{Error, Result};
use crate::instances::IsingInstance;

/// Default qubit limit for exhaustive enumeration.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 30;

// Energies and local fields are recomputed from scratch this often.
const RESYNC_INTERVAL: u64 = 1 << 16;

pub fn brute_force_ground(instance: &IsingInstance, deg_tol: f64) -> Result<GroundStateResult> {
    brute_force_ground_capped(instance, deg_tol, DEFAULT_BRUTE_FORCE_CAP)
}

/// Exhaustive search over all `2^N` configurations in Gray-code order,
/// one spin flip and one local-field update per step.
pub fn brute_force_ground_capped(instance: &IsingInstance, deg_tol: f64, cap: usize) -> Result<GroundStateResult> {
    check_tol(deg_tol)?;
    let n = instance.n();
    if n > cap {
        return Err(Error::Resource(format!("{n} qubits exceeds enumeration cap {cap}")));
    }
    let adj = instance.adjacency();
    let slack = rounding_slack(instance);
    let window = deg_tol + slack;

    let mut bits = 0u64;
    let mut energy = instance.energy_bits(0);
    let mut lf = instance.local_fields(0);
    let mut best = energy;
    let mut candidates: Vec<u64> = alloc::vec![0];
    let mut filter_at = 1024usize;

    for step in 1u64..(1u64 << n) {
        let j = step.trailing_zeros() as usize;
        let s = if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
        energy -= 2.0 * s * lf[j];
        for &(k, w) in adj.neighbors(j) {
            lf[k] -= 2.0 * w * s;
        }
        bits ^= 1 << j;
        if step % RESYNC_INTERVAL == 0 {
            energy = instance.energy_bits(bits);
            lf = instance.local_fields(bits);
        }
        if energy <= best + window {
            if energy < best {
                best = energy;
            }
            candidates.push(bits);
            if candidates.len() >= filter_at {
                candidates.retain(|&b| instance.energy_bits(b) <= best + window + slack);
                filter_at = 2 * candidates.len() + 1024;
            }
        }
    }
    finalize(instance, &candidates, deg_tol)
}
