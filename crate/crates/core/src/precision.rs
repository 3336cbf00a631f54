//! Limited-precision control model.
//!
//! At precision `p` the range `[-1, 1]` is split into `2^p + 1` divisions
//! labelled by their midpoints `k * 2^(1-p)`, `k = -2^(p-1) ..= 2^(p-1)`.
//! Interior divisions have half-width `2^-p`; the two end divisions are
//! truncated at `±1`. Zero is always a midpoint.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::instances::IsingInstance;
use crate::seed::Key;

/// Highest precision accepted; keeps every midpoint exactly representable.
pub const MAX_PRECISION: u32 = 52;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionGrid {
    p: u32,
}

impl PrecisionGrid {
    pub fn new(p: u32) -> Result<Self> {
        if p == 0 || p > MAX_PRECISION {
            return Err(invalid!("precision {p} outside 1..={MAX_PRECISION}"));
        }
        Ok(Self { p })
    }

    pub fn bits(&self) -> u32 {
        self.p
    }

    /// Spacing between neighbouring midpoints, `2^(1-p)`.
    pub fn spacing(&self) -> f64 {
        libm::ldexp(1.0, 1 - self.p as i32)
    }

    /// Half-width of an interior division, `2^-p`.
    pub fn half_width(&self) -> f64 {
        libm::ldexp(1.0, -(self.p as i32))
    }

    pub fn midpoint_count(&self) -> usize {
        (1usize << self.p) + 1
    }

    pub fn midpoints(&self) -> Vec<f64> {
        let half = 1i64 << (self.p - 1);
        let step = self.spacing();
        (-half..=half).map(|k| k as f64 * step).collect()
    }

    /// Division `[lo, hi]` belonging to midpoint `m`, truncated at `±1`.
    pub fn division(&self, m: f64) -> (f64, f64) {
        let w = self.half_width();
        ((m - w).max(-1.0), (m + w).min(1.0))
    }

    /// Midpoint of the division containing `x`. Points on a boundary
    /// between two divisions go to the midpoint nearer zero.
    pub fn nearest_midpoint(&self, x: f64) -> Result<f64> {
        if !(x.abs() <= 1.0) {
            return Err(invalid!("value {x} outside [-1, 1]"));
        }
        // x / spacing is exact: the spacing is a power of two
        let q = libm::ldexp(x.abs(), self.p as i32 - 1);
        let whole = libm::floor(q);
        let k = if q - whole > 0.5 { whole + 1.0 } else { whole };
        Ok(libm::copysign(k * self.spacing(), x))
    }
}

/// Midpoint of the division containing `x` at precision `p`.
pub fn nearest_midpoint(x: f64, p: u32) -> Result<f64> {
    PrecisionGrid::new(p)?.nearest_midpoint(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// Round to the division midpoint.
    Midpoint,
    /// One fixed uniform draw inside the division per parameter.
    DeterministicRandom,
    /// Several independent uniform draws inside the division.
    UniformRandom,
}

impl ErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorKind::Midpoint => "midpoint",
            ErrorKind::DeterministicRandom => "det_random",
            ErrorKind::UniformRandom => "uniform_random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorModel {
    kind: ErrorKind,
    seed: u64,
    samples: u32,
}

impl ErrorModel {
    pub fn midpoint() -> Self {
        Self { kind: ErrorKind::Midpoint, seed: 0, samples: 1 }
    }

    pub fn deterministic_random(seed: u64) -> Self {
        Self { kind: ErrorKind::DeterministicRandom, seed, samples: 1 }
    }

    pub fn uniform_random(seed: u64, samples: u32) -> Result<Self> {
        if samples == 0 {
            return Err(invalid!("uniform random model needs at least one sample"));
        }
        Ok(Self { kind: ErrorKind::UniformRandom, seed, samples })
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> u32 {
        self.samples
    }

    /// Hardware value obtained when asking for `x`.
    ///
    /// Random draws are keyed by `(seed, instance id, p, sample, parameter)`.
    pub fn perturb(
        &self,
        grid: &PrecisionGrid,
        x: f64,
        instance_id: &str,
        sample: u32,
        parameter: usize,
    ) -> Result<f64> {
        let m = grid.nearest_midpoint(x)?;
        match self.kind {
            ErrorKind::Midpoint => Ok(m),
            ErrorKind::DeterministicRandom | ErrorKind::UniformRandom => {
                let u = Key::new(self.seed)
                    .tag(instance_id)
                    .word(grid.bits() as u64)
                    .word(sample as u64)
                    .word(parameter as u64)
                    .unit();
                let (lo, hi) = grid.division(m);
                Ok((lo + u * (hi - lo)).clamp(lo, hi))
            }
        }
    }
}

/// Replace every field and coupling of `instance` by its value at
/// precision `p` under `model`.
pub fn apply_error(
    instance: &IsingInstance,
    p: u32,
    model: &ErrorModel,
    sample_index: u32,
) -> Result<IsingInstance> {
    let grid = PrecisionGrid::new(p)?;
    instance.check_unit_range()?;
    if sample_index >= model.samples {
        return Err(invalid!("sample index {sample_index} >= model samples {}", model.samples));
    }
    let mut failure = None;
    let out = instance.map_parameters(|i, x| {
        model.perturb(&grid, x, instance.id(), sample_index, i).unwrap_or_else(|e| {
            failure = Some(e);
            x
        })
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Mean absolute parameter error averaged over `x`: `2^-p / 2` for the
/// midpoint model and `(2/3) 2^-p` for the uniform models.
pub fn mean_abs_error(kind: ErrorKind, p: u32) -> Result<f64> {
    let w = PrecisionGrid::new(p)?.half_width();
    Ok(match kind {
        ErrorKind::Midpoint => 0.5 * w,
        ErrorKind::DeterministicRandom | ErrorKind::UniformRandom => 2.0 / 3.0 * w,
    })
}

/// Mean absolute error for a given `x` inside an interior division:
/// `|x - m|` for the midpoint model and `2^(p-1) ((x - m)^2 + 2^-2p)` for
/// the uniform models.
pub fn mean_abs_error_at(kind: ErrorKind, x: f64, p: u32) -> Result<f64> {
    let grid = PrecisionGrid::new(p)?;
    let d = x - grid.nearest_midpoint(x)?;
    let w = grid.half_width();
    Ok(match kind {
        ErrorKind::Midpoint => d.abs(),
        ErrorKind::DeterministicRandom | ErrorKind::UniformRandom => (d * d + w * w) / (2.0 * w),
    })
}
