//! Resource caps shared by every dense operation.
//!
//! State vectors hold `2^n` amplitudes, distribution tables `4^n` reals and
//! the stabilizer enumeration grows like `2^(n^2/2)`. The caps below keep
//! every operation desk-sized. They are process-wide so that a front-end can
//! adjust them once (for instance from an environment variable) without
//! threading a configuration value through every call.

use std::sync::RwLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest qubit count for a dense state vector.
    pub max_state_qubits: usize,
    /// Largest qubit count for a full `4^n` distribution table.
    pub max_table_qubits: usize,
    /// Largest qubit count for stabilizer-state enumeration.
    pub max_enum_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_state_qubits: 14, max_table_qubits: 11, max_enum_qubits: 4 }
    }
}

impl Limits {
    /// Derive state and table caps from a memory budget in megabytes.
    ///
    /// A table at `n` qubits needs `4^n * 8` bytes and is built alongside a
    /// scratch copy, a state needs `2^n * 16` bytes. The enumeration cap is
    /// left untouched.
    pub fn from_mem_cap_mb(mb: u64) -> Self {
        let bytes = mb.saturating_mul(1 << 20);
        let fits = |per_n: &dyn Fn(u32) -> u64| {
            (1..=30u32).take_while(|&n| per_n(n) <= bytes).last().unwrap_or(0) as usize
        };
        Self {
            max_state_qubits: fits(&|n| 16u64 << n),
            max_table_qubits: fits(&|n| 16u64 << (2 * n)),
            ..Self::default()
        }
    }
}

static LIMITS: RwLock<Limits> = RwLock::new(Limits {
    max_state_qubits: 14,
    max_table_qubits: 11,
    max_enum_qubits: 4,
});

pub fn get() -> Limits {
    *LIMITS.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set(limits: Limits) {
    *LIMITS.write().unwrap_or_else(|e| e.into_inner()) = limits;
}

pub(crate) fn check_state(what: &'static str, n: usize) -> Result<()> {
    let cap = get().max_state_qubits;
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}

pub(crate) fn check_table(what: &'static str, n: usize) -> Result<()> {
    let cap = get().max_table_qubits;
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}

pub(crate) fn check_enum(what: &'static str, n: usize) -> Result<()> {
    let cap = get().max_enum_qubits;
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}
