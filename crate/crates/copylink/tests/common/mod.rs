//! Reference implementations used as oracles by the integration tests.
//! Deliberately naive: they share no code with the solvers under test.

#![allow(dead_code)]

use copylink_core::IsingInstance;

/// Energy of bit pattern `bits` (bit j set means spin -1) summed term by term.
pub fn naive_energy(inst: &IsingInstance, bits: u64) -> f64 {
    let s = |j: usize| if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
    let mut e = 0.0;
    for (j, &h) in inst.h().iter().enumerate() {
        e += h * s(j);
    }
    for c in inst.couplings() {
        e += c.value * s(c.j) * s(c.k);
    }
    e
}

/// Minimum energy and every state within `tol` of it, by full enumeration.
pub fn naive_ground(inst: &IsingInstance, tol: f64) -> (f64, Vec<u64>) {
    let n = inst.n();
    let energies: Vec<f64> = (0..1u64 << n).map(|b| naive_energy(inst, b)).collect();
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let states = (0..1u64 << n).filter(|&b| energies[b as usize] <= min + tol).collect();
    (min, states)
}

/// Ground energy and all states within `tol` of it for an open chain, by
/// dynamic programming over the two spin values of each site.
pub fn chain_dp(inst: &IsingInstance, tol: f64) -> (f64, Vec<u64>) {
    let n = inst.n();
    let h = inst.h();
    let mut bond = vec![0.0; n.saturating_sub(1)];
    for c in inst.couplings() {
        assert_eq!(c.k, c.j + 1, "not a chain");
        bond[c.j] = c.value;
    }
    let spin = |b: usize| if b == 1 { -1.0 } else { 1.0 };
    // suffix[j][b]: least energy of sites j.. given site j has bit b,
    // counting h_j and every bond to the right of j.
    let mut suffix = vec![[0.0f64; 2]; n];
    for j in (0..n).rev() {
        for b in 0..2 {
            let mut best = 0.0;
            if j + 1 < n {
                best = f64::INFINITY;
                for b2 in 0..2 {
                    best = best.min(bond[j] * spin(b) * spin(b2) + suffix[j + 1][b2]);
                }
            }
            suffix[j][b] = h[j] * spin(b) + best;
        }
    }
    let min = suffix[0][0].min(suffix[0][1]);
    let mut states = Vec::new();
    fn walk(
        j: usize,
        prev: usize,
        acc: f64,
        bits: u64,
        ctx: (&[f64], &[f64], &[[f64; 2]], f64),
        out: &mut Vec<u64>,
    ) {
        let (h, bond, suffix, limit) = ctx;
        let n = h.len();
        if j == n {
            out.push(bits);
            return;
        }
        let spin = |b: usize| if b == 1 { -1.0 } else { 1.0 };
        for b in 0..2 {
            let link = if j > 0 { bond[j - 1] * spin(prev) * spin(b) } else { 0.0 };
            if acc + link + suffix[j][b] <= limit {
                walk(j + 1, b, acc + link + h[j] * spin(b), bits | (b as u64) << j, ctx, out);
            }
        }
    }
    walk(0, 0, 0.0, 0, (h, &bond, &suffix, min + tol + 1e-12), &mut states);
    // exact re-check against the term-by-term energy
    let exact: Vec<f64> = states.iter().map(|&b| naive_energy(inst, b)).collect();
    let emin = exact.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut kept: Vec<u64> = states.iter().zip(&exact).filter(|(_, &e)| e <= emin + tol).map(|(&b, _)| b).collect();
    kept.sort_unstable();
    (emin, kept)
}

/// Probability of measuring basis state `target` at time `t` for one qubit
/// under `H = -gamma X + h Z`, starting from `|+>`.
pub fn rabi_probability(gamma: f64, h: f64, target: u64, t: f64) -> f64 {
    let omega = (gamma * gamma + h * h).sqrt();
    // <b|H|+> = ((+-h) - gamma)/sqrt 2, with +h for bit 0.
    let hb = if target == 0 { h - gamma } else { -h - gamma };
    let (c, s) = ((omega * t).cos(), (omega * t).sin());
    0.5 * (c * c + s * s * hb * hb / (omega * omega))
}
