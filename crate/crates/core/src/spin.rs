use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest number of spins a configuration can hold.
pub const MAX_SPINS: usize = 64;

/// A computational basis state over `len` qubits.
///
/// Bit `j` set means spin `s_j = -1` (Pauli-Z eigenvalue -1); a clear bit
/// means `s_j = +1`. The textual form lists qubit 0 first, so `"10"` is
/// `s_0 = -1, s_1 = +1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SpinConfiguration {
    bits: u64,
    len: u32,
}

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl SpinConfiguration {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_SPINS {
            return Err(invalid!("configuration length {len} outside 1..={MAX_SPINS}"));
        }
        if bits & !low_mask(len) != 0 {
            return Err(invalid!("bits set beyond length {len}"));
        }
        Ok(Self { bits, len: len as u32 })
    }

    pub(crate) fn from_raw(bits: u64, len: usize) -> Self {
        debug_assert!(len >= 1 && len <= MAX_SPINS && bits & !low_mask(len) == 0);
        Self { bits, len: len as u32 }
    }

    /// Build from spins in `{-1, +1}`.
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        let mut bits = 0u64;
        for (j, &s) in spins.iter().enumerate().take(MAX_SPINS) {
            match s {
                1 => {}
                -1 => bits |= 1 << j,
                other => return Err(invalid!("spin value {other} is not +1 or -1")),
            }
        }
        Self::new(bits, spins.len())
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Spin value of qubit `j`.
    #[inline]
    pub fn spin(&self, j: usize) -> i8 {
        if self.bits >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.len()).map(|j| self.spin(j)).collect()
    }

    pub fn flipped(&self, j: usize) -> Self {
        assert!(j < self.len());
        Self { bits: self.bits ^ (1 << j), len: self.len }
    }

    /// Bits `[start, start + len)` as a configuration of their own.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if len == 0 || start + len > self.len() {
            return Err(invalid!(
                "slice [{start}, {}) outside configuration of length {}",
                start + len,
                self.len()
            ));
        }
        Ok(Self::from_raw((self.bits >> start) & low_mask(len), len))
    }

    /// Concatenate configurations, first element occupying the low qubits.
    pub fn concat(parts: &[SpinConfiguration]) -> Result<Self> {
        let mut bits = 0u64;
        let mut len = 0usize;
        for part in parts {
            if len + part.len() > MAX_SPINS {
                return Err(invalid!("concatenation exceeds {MAX_SPINS} spins"));
            }
            bits |= part.bits << len;
            len += part.len();
        }
        Self::new(bits, len)
    }
}

impl fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len())
            .map(|j| if self.bits >> j & 1 == 1 { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for SpinConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut len = 0usize;
        for (j, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' if j < MAX_SPINS => bits |= 1 << j,
                '1' => {}
                _ => return Err(invalid!("invalid character {c:?} in bit string")),
            }
            len += 1;
        }
        Self::new(bits, len)
    }
}
