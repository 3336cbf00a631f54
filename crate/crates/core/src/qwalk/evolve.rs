//! Time evolution by Chebyshev expansion of the propagator:
//!
//! ```text
//! exp(-i H tau) = exp(-i c tau) [ J_0(a tau) + 2 sum_{k>=1} (-i)^k J_k(a tau) T_k((H - c) / a) ]
//! ```
//!
//! where `[c - a, c + a]` encloses the spectrum. Long durations are split
//! into steps with `a tau <= MAX_STEP_PHASE`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::WalkHamiltonian;
use crate::error::{invalid, Error, Result};

const MAX_STEP_PHASE: f64 = 16.0;
const MAX_TERMS: usize = 256;

/// `exp(-i H duration) state`, accurate to `tol` in the L2 norm.
pub fn evolve(state: &[Complex64], h: &WalkHamiltonian, duration: f64, tol: f64) -> Result<Vec<Complex64>> {
    let mut out = state.to_vec();
    evolve_in_place(&mut out, h, duration, tol)?;
    Ok(out)
}

pub fn evolve_in_place(state: &mut [Complex64], h: &WalkHamiltonian, duration: f64, tol: f64) -> Result<()> {
    if state.len() != h.dim() {
        return Err(Error::LengthMismatch { expected: h.dim(), actual: state.len() });
    }
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(invalid!("duration must be finite and non-negative, got {duration}"));
    }
    if !(tol > 0.0) {
        return Err(invalid!("tolerance must be positive, got {tol}"));
    }
    let (lo, hi) = h.spectral_bounds();
    let centre = 0.5 * (lo + hi);
    // margin keeps the scaled spectrum strictly inside [-1, 1]
    let radius = 0.5 * (hi - lo) * 1.01 + 1e-12;
    if duration == 0.0 {
        return Ok(());
    }
    let steps = libm::ceil(radius * duration / MAX_STEP_PHASE).max(1.0) as usize;
    let tau = duration / steps as f64;
    let step_tol = tol / steps as f64;
    let mut work = ChebyshevWork::new(h.dim());
    for _ in 0..steps {
        work.step(state, h, centre, radius, tau, step_tol)?;
    }
    Ok(())
}

struct ChebyshevWork {
    prev: Vec<Complex64>,
    cur: Vec<Complex64>,
    next: Vec<Complex64>,
    acc: Vec<Complex64>,
}

impl ChebyshevWork {
    fn new(dim: usize) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { prev: vec![z; dim], cur: vec![z; dim], next: vec![z; dim], acc: vec![z; dim] }
    }

    fn step(
        &mut self,
        state: &mut [Complex64],
        h: &WalkHamiltonian,
        centre: f64,
        radius: f64,
        tau: f64,
        tol: f64,
    ) -> Result<()> {
        let x = radius * tau;
        let norm = libm::sqrt(state.iter().map(|c| c.norm_sqr()).sum::<f64>());
        let c0 = libm::jn(0, x);
        self.prev.copy_from_slice(state);
        for (a, v) in self.acc.iter_mut().zip(state.iter()) {
            *a = v * c0;
        }
        h.apply_shifted(state, &mut self.cur, centre, 1.0 / radius);
        let mut phase = Complex64::new(0.0, -1.0);
        let mut small = 0;
        let mut k = 1;
        loop {
            let coeff = phase * (2.0 * libm::jn(k as i32, x));
            for (a, v) in self.acc.iter_mut().zip(self.cur.iter()) {
                *a += v * coeff;
            }
            // |T_k(H)| <= 1, so the tail is bounded by the coefficients
            if (k as f64) > x && coeff.norm() * norm < tol * 1e-2 {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
            k += 1;
            if k > MAX_TERMS {
                return Err(Error::Numerical(format!(
                    "Chebyshev expansion did not converge in {MAX_TERMS} terms (phase {x:.3}, last |c_k| {:.3e})",
                    coeff.norm()
                )));
            }
            h.apply_shifted(&self.cur, &mut self.next, centre, 2.0 / radius);
            for (n, p) in self.next.iter_mut().zip(self.prev.iter()) {
                *n -= p;
            }
            core::mem::swap(&mut self.prev, &mut self.cur);
            core::mem::swap(&mut self.cur, &mut self.next);
            phase *= Complex64::new(0.0, -1.0);
        }
        let global = Complex64::from_polar(1.0, -centre * tau);
        for (s, a) in state.iter_mut().zip(self.acc.iter()) {
            *s = a * global;
        }
        Ok(())
    }
}
