//! Spectra of isolated groups: dense many-body eigensystems for small
//! groups, normal modes for oscillator groups and quasiparticles for spin
//! groups, together with the end-site observables the moment formulas need.

mod dense;
mod fermion;
mod modes;

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::SymmetricEigen;

pub use dense::{dense_eigensystem, sparse_eigensystem, DenseSpectrum};
pub use fermion::{ising_group_free_fermion, many_body_levels, MAX_PAIRING_SITES};
pub use modes::{Mode, ModeFamily, ModeSpectrum, Statistics, TypicalState, DISCRETE_LIMIT};

use crate::chain::{isolated_quadratic_group, isolated_spin_group, HarmonicParams, IsingParams};
use crate::{Error, Result};

/// Eigen-decomposition of one isolated group.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupSpectrum {
    /// Complete many-body eigenbasis of a spin group on `sites` sites.
    ManyBody {
        sites: usize,
        spectrum: DenseSpectrum,
    },
    /// Independent modes (oscillators or quasiparticles).
    Modes(ModeSpectrum),
}

/// Dense many-body eigensystem of an open spin group.
pub fn dense_spin_group(p: IsingParams, n: usize) -> Result<GroupSpectrum> {
    let op = isolated_spin_group(p, n)?;
    Ok(GroupSpectrum::ManyBody {
        sites: n,
        spectrum: sparse_eigensystem(&op)?,
    })
}

/// Normal modes of an open oscillator group from a numeric solve of its
/// potential matrix.
pub fn dense_oscillator_group(p: HarmonicParams, n: usize) -> Result<ModeSpectrum> {
    let v = isolated_quadratic_group(p, n)? / p.mass;
    let eig = SymmetricEigen::new(v);
    let modes = (0..n)
        .map(|j| {
            let omega = eig.eigenvalues[j].sqrt();
            let u = eig.eigenvectors[(0, j)];
            Mode::oscillator(omega, u * u)
        })
        .collect();
    ModeSpectrum::from_modes(Statistics::Bose, modes)
}

/// Closed-form normal modes `omega_j = 2 omega0 sin(j pi / (2(n+1)))`.
pub fn harmonic_group_modes(n: u64, omega0: f64) -> Result<ModeSpectrum> {
    if !(omega0 > 0.0) {
        return Err(Error::domain("omega0 must be positive"));
    }
    ModeSpectrum::from_family(ModeFamily::Oscillators { omega0 }, n)
}

/// Debye treatment of an oscillator group: linear dispersion up to `debye`.
pub fn debye_group_modes(n: u64, debye: f64, omega0: f64) -> Result<ModeSpectrum> {
    if !(debye > 0.0 && omega0 > 0.0) {
        return Err(Error::domain("Debye energy and omega0 must be positive"));
    }
    ModeSpectrum::from_family(ModeFamily::Debye { debye, omega0 }, n)
}

/// Closed-form quasiparticles `eps_k = 2 sqrt(B^2 + J^2 cos^2(k pi/(n+1)))`.
pub fn ising_group_closed_form(n: u64, field: f64, coupling: f64) -> Result<ModeSpectrum> {
    if !(field > 0.0) {
        return Err(Error::domain("field B must be positive"));
    }
    ModeSpectrum::from_family(ModeFamily::Spins { field, coupling }, n)
}

/// Quasiparticles of a spin group: the numeric pairing solve where it is
/// affordable, the closed form beyond.
pub fn ising_group_modes(n: u64, field: f64, coupling: f64) -> Result<ModeSpectrum> {
    if n <= MAX_PAIRING_SITES as u64 {
        ising_group_free_fermion(n as usize, field, coupling)
    } else {
        ising_group_closed_form(n, field, coupling)
    }
}

/// Label of one group's state inside a product state.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupLabel {
    /// Index into a dense many-body eigenbasis.
    Eigen(usize),
    /// Mode occupations (integers for eigenstates, fractional for
    /// canonical-typical states).
    Occupations(Vec<f64>),
}

/// One state per group with the resulting energies.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    pub labels: Vec<GroupLabel>,
    pub group_energies: Vec<f64>,
    pub total_energy: f64,
}

impl ProductState {
    pub fn new(spectrum: &GroupSpectrum, labels: Vec<GroupLabel>) -> Result<Self> {
        let group_energies = labels
            .iter()
            .map(|l| group_energy(spectrum, l))
            .collect::<Result<Vec<_>>>()?;
        let total_energy = group_energies.iter().sum();
        Ok(Self {
            labels,
            group_energies,
            total_energy,
        })
    }

    /// Every group in the same state.
    pub fn uniform(spectrum: &GroupSpectrum, label: GroupLabel, n_groups: usize) -> Result<Self> {
        Self::new(spectrum, alloc::vec![label; n_groups])
    }

    pub fn n_groups(&self) -> usize {
        self.labels.len()
    }
}

fn group_energy(spectrum: &GroupSpectrum, label: &GroupLabel) -> Result<f64> {
    match (spectrum, label) {
        (GroupSpectrum::ManyBody { spectrum, .. }, GroupLabel::Eigen(k)) => spectrum
            .energies
            .get(*k)
            .copied()
            .ok_or_else(|| Error::structure("eigenstate index out of range")),
        (GroupSpectrum::Modes(m), GroupLabel::Occupations(occ)) => {
            if occ
                .iter()
                .any(|&o| o < 0.0 || (m.statistics() == Statistics::Fermi && o > 1.0))
            {
                return Err(Error::structure("occupation outside its allowed range"));
            }
            Ok(m.evaluate_occupations(occ)?.0)
        }
        _ => Err(Error::structure(
            "state label does not fit the spectrum kind",
        )),
    }
}
