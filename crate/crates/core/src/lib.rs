//! Solvers for pairing Hamiltonians of 4-component fermions (nucleons with
//! spin and isospin, or spin-3/2 atoms).
//!
//! The crate covers four routes to the same physics, which cross-check each
//! other:
//!
//! - [`fock`] / [`models`]: occupation-number representation of the pairing
//!   Hamiltonians (identical-particle, isovector, SU(4)-symmetric seniority,
//!   and the SU(4) Richardson-Gaudin model with nondegenerate levels) as
//!   sparse matrices.
//! - [`ed`]: Lanczos and small dense diagonalization of those matrices, plus
//!   observable extraction (occupations, odd-even and canonical gaps,
//!   quasiparticle energies, excitation spectra).
//! - [`seniority`]: closed-form spectra of the degenerate-level models.
//! - [`bcs`]: the mean-field gap/number equations for the equally spaced
//!   level model, in bulk (closed-form integrals) and discrete form.
//! - [`extrapolate`]: cubic-in-1/N least-squares fits for thermodynamic-limit
//!   extraction.
//!
//! The crate is `no_std`-compatible (`--no-default-features --features libm`);
//! everything allocates through `alloc` only.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("pairkit requires either the `std` or the `libm` feature");

pub mod bcs;
pub mod ed;
pub mod extrapolate;
pub mod fock;
pub mod linalg;
pub mod math;
pub mod models;
pub mod reference;
pub mod seniority;

use core::fmt;

/// Default cap on sector dimension (number of basis states).
pub const DEFAULT_DIM_CAP: usize = 20_000_000;

/// Errors shared across the solver modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Sector dimension exceeds the configured cap.
    CapacityExceeded { dim: u128, cap: usize },
    /// More spatial levels than the bit representation supports.
    OmegaTooLarge { omega: usize, max: usize },
    /// Particle number outside [0, 4*omega].
    BadParticleNumber { n: usize, omega: usize },
    /// An operator term maps a basis state outside the sector constraints.
    ConstraintViolation,
    /// Operation not defined for this model class.
    UnsupportedClass(&'static str),
    /// Quantum-number arguments violate a formula's domain.
    Domain(&'static str),
    /// Iterative solver failed to reach tolerance.
    NoConvergence { iterations: usize },
    /// gap observables requested for a particle number with no energy entry.
    MissingSector { n: usize },
    /// Least-squares design matrix is rank deficient.
    RankDeficient,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CapacityExceeded { dim, cap } => {
                write!(f, "sector dimension {dim} exceeds cap {cap}")
            }
            Error::OmegaTooLarge { omega, max } => {
                write!(f, "omega={omega} exceeds representable maximum {max}")
            }
            Error::BadParticleNumber { n, omega } => {
                write!(f, "particle number {n} outside [0, {}]", 4 * omega)
            }
            Error::ConstraintViolation => {
                write!(f, "operator term maps outside the sector constraints")
            }
            Error::UnsupportedClass(what) => write!(f, "unsupported model class: {what}"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::MissingSector { n } => write!(f, "no ground energy for N={n}"),
            Error::RankDeficient => write!(f, "rank-deficient least-squares system"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
