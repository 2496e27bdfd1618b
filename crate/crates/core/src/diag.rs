//! Process-wide counters for numeric edge events.
//!
//! Boundary p-values are clamped before logarithms and likelihood-ratio
//! e-values are capped before overflow. Both events are legitimate in
//! extreme inputs but should never occur in desk-scale experiments, so the
//! counters exist to let test suites assert "this never fired" instead of
//! silently absorbing the clamp.

use std::sync::atomic::{AtomicU64, Ordering};

static PVALUE_CLAMP_LOW: AtomicU64 = AtomicU64::new(0);
static PVALUE_CLAMP_HIGH: AtomicU64 = AtomicU64::new(0);
static EVALUE_OVERFLOW: AtomicU64 = AtomicU64::new(0);

/// Point-in-time copy of all counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Snapshot {
    /// p-values clamped up to the lower bound before a logarithm.
    pub pvalue_clamp_low: u64,
    /// p-values clamped down below 1 before `ln(1 - p)`.
    pub pvalue_clamp_high: u64,
    /// Likelihood-ratio e-values capped to avoid `f64` overflow.
    pub evalue_overflow: u64,
}

impl Snapshot {
    /// True when no counter has fired since the last reset.
    pub fn is_clean(&self) -> bool {
        self.pvalue_clamp_low == 0 && self.pvalue_clamp_high == 0 && self.evalue_overflow == 0
    }
}

/// Read all counters.
pub fn snapshot() -> Snapshot {
    Snapshot {
        pvalue_clamp_low: PVALUE_CLAMP_LOW.load(Ordering::Relaxed),
        pvalue_clamp_high: PVALUE_CLAMP_HIGH.load(Ordering::Relaxed),
        evalue_overflow: EVALUE_OVERFLOW.load(Ordering::Relaxed),
    }
}

/// Zero all counters.
pub fn reset() {
    PVALUE_CLAMP_LOW.store(0, Ordering::Relaxed);
    PVALUE_CLAMP_HIGH.store(0, Ordering::Relaxed);
    EVALUE_OVERFLOW.store(0, Ordering::Relaxed);
}

pub(crate) fn note_pvalue_clamp_low() {
    PVALUE_CLAMP_LOW.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn note_pvalue_clamp_high() {
    PVALUE_CLAMP_HIGH.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn note_evalue_overflow() {
    EVALUE_OVERFLOW.fetch_add(1, Ordering::Relaxed);
}

/// Serializes tests that reset and assert on the process-wide counters,
/// which would otherwise race under the multithreaded test runner.
#[cfg(test)]
pub(crate) fn test_guard() -> std::sync::MutexGuard<'static, ()> {
    static LOCK: std::sync::Mutex<()> = std::sync::Mutex::new(());
    LOCK.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}
