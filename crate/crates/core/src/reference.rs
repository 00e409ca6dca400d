//! Published reference values for the equally spaced level model at
//! g = 0.15 and quarter filling, used as cross-check data.
//!
//! The `*_EXACT` coefficient sets are cubic 1/N fits of exact
//! finite-size solutions for N in 160..=1000; they are ingested reference
//! data (regenerating them requires a solver outside this crate's scope).
//! The BCS-side values are reproduced here by [`crate::bcs::solve_bulk`].

/// Bulk chemical potential.
pub const BULK_LAMBDA: f64 = 0.12468144;
/// Bulk gap parameter.
pub const BULK_DELTA: f64 = 0.015466976;
/// Bulk energy per particle.
pub const BULK_E_PER_N: f64 = 0.062022154;
/// Bulk quasiparticle energy at the blocked level eps_q = 1/8.
pub const BULK_E_Q: f64 = 0.140151;
/// Blocked-level energy used for the quasiparticle reference.
pub const BULK_EPS_Q: f64 = 0.125;

/// Cubic 1/N coefficients (a, b, c, d) of the exact E/N series.
pub const E_PER_N_EXACT: [f64; 4] = [0.062022149, -0.597581, 1.278831, -11.1571];
/// Cubic 1/N coefficients of the exact quasiparticle-energy series.
pub const E_Q_EXACT: [f64; 4] = [0.140148, -0.479740, -10.0327, -1107.25];
/// Cubic 1/N coefficients of the exact odd-even gap series.
pub const DELTA_OE_EXACT: [f64; 4] = [0.0154637, -0.699890, -2.24642, -1066.63];
/// Cubic 1/N coefficients of the exact canonical-gap series.
pub const DELTA_C_EXACT: [f64; 4] = [0.0154672, 0.0961964, 2.59458, -257.910];

/// The particle numbers of the published series fits.
pub const SERIES_N: [usize; 8] = [160, 280, 400, 520, 640, 760, 880, 1000];
