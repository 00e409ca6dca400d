//! Model specifications and Hamiltonian construction.
//!
//! Five classes share the separable form H = sum_i eps_i N_i
//! - G sum_{ij, channels} C†_i C_j, differing in which pair channels enter:
//!
//! - `Identical`: the two same-isospin spin-singlet channels (independent
//!   proton and neutron pairing).
//! - `Isovector`: all three spin-singlet channels.
//! - `Su4Seniority`: all six channels (spin-singlet isovector plus
//!   spin-triplet isoscalar), degenerate levels.
//! - `Su4Rg`: the six channels plus equally spaced level energies
//!   eps_i = (i-1)/(2 omega).
//! - `Spin32Rg`: the same model written with the spin-3/2 monopole and
//!   quadrupole pairs; spectra coincide with the Su4 constructions.

use alloc::vec;
use alloc::vec::Vec;

use crate::fock::{build_operator, PairChannel, SectorBasis, SparseOperator, Term};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelClass {
    Identical,
    Isovector,
    Su4Seniority,
    Su4Rg,
    Spin32Rg,
}

impl ModelClass {
    pub fn name(self) -> &'static str {
        match self {
            ModelClass::Identical => "identical",
            ModelClass::Isovector => "isovector",
            ModelClass::Su4Seniority => "su4-seniority",
            ModelClass::Su4Rg => "su4-rg",
            ModelClass::Spin32Rg => "spin32-rg",
        }
    }

    fn channels(self) -> &'static [PairChannel] {
        match self {
            ModelClass::Identical => &PairChannel::IDENTICAL,
            ModelClass::Isovector => &PairChannel::ISOVECTOR,
            ModelClass::Su4Seniority | ModelClass::Su4Rg => &PairChannel::ALL_PQ,
            ModelClass::Spin32Rg => &PairChannel::SPIN32,
        }
    }
}

/// How the pairing strength was specified. `G = g / omega` exactly when the
/// bulk-scaled `g` is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Bulk-scaled strength g; the Hamiltonian uses G = g / omega.
    Bulk(f64),
    /// Raw pair strength G.
    Raw(f64),
}

/// Everything needed to build one Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub class: ModelClass,
    pub omega: usize,
    pub n_particles: usize,
    pub coupling: Coupling,
    /// Empty means the class default: degenerate (all zero) for the
    /// seniority models, equally spaced (i-1)/(2 omega) for the RG models.
    pub level_energies: Vec<f64>,
}

impl ModelSpec {
    pub fn new(class: ModelClass, omega: usize, n_particles: usize, coupling: Coupling) -> Self {
        ModelSpec {
            class,
            omega,
            n_particles,
            coupling,
            level_energies: Vec::new(),
        }
    }

    /// Raw pair strength G entering the Hamiltonian.
    pub fn big_g(&self) -> f64 {
        match self.coupling {
            Coupling::Raw(g) => g,
            Coupling::Bulk(g) => g / self.omega as f64,
        }
    }

    /// Bulk-scaled strength g = G * omega.
    pub fn bulk_g(&self) -> f64 {
        match self.coupling {
            Coupling::Bulk(g) => g,
            Coupling::Raw(g) => g * self.omega as f64,
        }
    }

    /// Level energies after applying the class default.
    pub fn resolved_levels(&self) -> Vec<f64> {
        if !self.level_energies.is_empty() {
            return self.level_energies.clone();
        }
        match self.class {
            ModelClass::Su4Rg | ModelClass::Spin32Rg => equally_spaced_levels(self.omega),
            _ => vec![0.0; self.omega],
        }
    }
}

/// The RG band eps_i = (i-1)/(2 omega), i = 1..omega; bandwidth [0, 1/2).
pub fn equally_spaced_levels(omega: usize) -> Vec<f64> {
    (0..omega)
        .map(|i| i as f64 / (2.0 * omega as f64))
        .collect()
}

/// Assemble the model Hamiltonian over `basis`.
pub fn build_hamiltonian(spec: &ModelSpec, basis: &SectorBasis) -> Result<SparseOperator> {
    if basis.omega() != spec.omega || basis.n_particles() != spec.n_particles {
        return Err(Error::Domain("basis sector does not match the model spec"));
    }
    let g = spec.big_g();
    let mut terms: Vec<Term> = spec
        .class
        .channels()
        .iter()
        .map(|&channel| Term::PairHop {
            channel,
            factor: -g,
        })
        .collect();
    let levels = spec.resolved_levels();
    if levels.len() != spec.omega {
        return Err(Error::Domain("level_energies length must equal omega"));
    }
    if levels.iter().any(|&e| e != 0.0) {
        terms.push(Term::LevelEnergy { energies: levels });
    }
    build_operator(&terms, basis)
}

/// Rewrite an SU(4)-symmetric spec in the spin-3/2 monopole/quadrupole form.
///
/// The resulting Hamiltonian is built from the S/D channels; its spectrum
/// must coincide with the P/Q construction. Level energies are resolved
/// explicitly so the degenerate seniority case stays degenerate.
pub fn spin32_relabel(spec: &ModelSpec) -> Result<ModelSpec> {
    match spec.class {
        ModelClass::Su4Seniority | ModelClass::Su4Rg => Ok(ModelSpec {
            class: ModelClass::Spin32Rg,
            omega: spec.omega,
            n_particles: spec.n_particles,
            coupling: spec.coupling,
            level_energies: spec.resolved_levels(),
        }),
        _ => Err(Error::UnsupportedClass(
            "spin-3/2 relabeling applies to the SU(4)-symmetric classes only",
        )),
    }
}
