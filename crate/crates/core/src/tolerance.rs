//! Global numeric tolerance for feasibility and implication checks.

use std::sync::atomic::{AtomicU64, Ordering};

/// Default tolerance used by every LP-backed comparison.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Environment variable read by the CLI and service to override the tolerance.
pub const TOLERANCE_ENV: &str = "CONTRACT_FORGE_TOL";

// Zero bits mean "not overridden".
static OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Current tolerance.
pub fn tolerance() -> f64 {
    match OVERRIDE.load(Ordering::Relaxed) {
        0 => DEFAULT_TOLERANCE,
        bits => f64::from_bits(bits),
    }
}

/// Override the tolerance for the whole process.
///
/// # Panics
///
/// Panics unless `tol` is finite and strictly positive.
pub fn set_tolerance(tol: f64) {
    assert!(
        tol.is_finite() && tol > 0.0,
        "tolerance must be positive, got {tol}"
    );
    OVERRIDE.store(tol.to_bits(), Ordering::Relaxed);
}

/// Restore [`DEFAULT_TOLERANCE`].
pub fn reset_tolerance() {
    OVERRIDE.store(0, Ordering::Relaxed);
}

/// Reads [`TOLERANCE_ENV`] and applies it if it parses as a positive number.
pub fn apply_env_override() -> Option<f64> {
    let raw = std::env::var(TOLERANCE_ENV).ok()?;
    let tol: f64 = raw.trim().parse().ok()?;
    if tol.is_finite() && tol > 0.0 {
        set_tolerance(tol);
        Some(tol)
    } else {
        None
    }
}

/// `a <= b` up to the tolerance, scaled by the magnitude of `b`.
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + tolerance() * b.abs().max(1.0)
}

/// `|a - b|` within the tolerance, scaled by the larger magnitude.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= tolerance() * a.abs().max(b.abs()).max(1.0)
}
